#include "adelix/arith_curve.hpp"

#include <cmath>

#include "adelix/errors.hpp"
#include "adelix/rational.hpp"

namespace adelix {

MetrizedLattice lattice_from_gram(const Eigen::MatrixXd& g) {
    if (g.rows() != g.cols() || g.rows() == 0) throw_usage("Gram matrix must be square and nonempty");
    if (!g.isApprox(g.transpose(), 1e-12)) throw_usage("Gram matrix must be symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success) throw_usage("Gram matrix must be positive definite");
    return {g};
}

MetrizedLattice dual_lattice(const MetrizedLattice& L) {
    Eigen::MatrixXd inv =
        L.gram.llt().solve(Eigen::MatrixXd::Identity(L.gram.rows(), L.gram.cols()));
    // symmetrize against roundoff before revalidating
    return lattice_from_gram(0.5 * (inv + inv.transpose()));
}

double deg_ar(const MetrizedLattice& L) {
    Eigen::LLT<Eigen::MatrixXd> llt(L.gram);
    double logdet = 0;
    for (long i = 0; i < L.gram.rows(); ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
    return -0.5 * logdet;
}

namespace {

// smallest eigenvalue of an SPD matrix
double min_eig(const Eigen::MatrixXd& g) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    return es.eigenvalues().minCoeff();
}

// one-sided Gaussian tail sum_{k > M} e^{-c k^2} <= e^{-c(M+1)^2} / (1 - e^{-c(2M+3)})
double gauss_tail(double c, long M) {
    double top = std::exp(-c * (double)(M + 1) * (double)(M + 1));
    double ratio = std::exp(-c * (double)(2 * M + 3));
    return top / (1.0 - ratio);
}

}  // namespace

double h0_ar(const MetrizedLattice& L, double tol) {
    long n = L.rank();
    double lmin = min_eig(L.gram);
    if (lmin <= 0) throw_usage("Gram matrix must be positive definite");
    double c = M_PI * lmin;
    // theta restricted to one axis is at most th1; the tail outside the box
    // |v_i| <= M is bounded by n * th1^{n-1} * 2 * gauss_tail(c, M)
    double th1 = 1.0 + 2.0 * std::exp(-c) / std::max(1e-300, 1.0 - std::exp(-c));
    long M = 1;
    while (true) {
        double tail = (double)n * std::pow(th1, (double)(n - 1)) * 2.0 * gauss_tail(c, M);
        if (tail < tol / 10.0) break;
        ++M;
        if (M > 4000)
            throw_precision("theta box radius exceeds 4000; Gram matrix too ill-conditioned",
                            "rescale the metric or loosen --tol");
        double width = 2.0 * (double)M + 1.0;
        if (std::pow(width, (double)n) > 5e8)
            throw_precision("theta enumeration would exceed 5e8 points",
                            "rescale the metric or reduce the rank");
    }
    // deterministic odometer enumeration of the box [-M, M]^n
    std::vector<long> v((size_t)n, -M);
    Eigen::VectorXd x(n);
    double sum = 0.0;
    while (true) {
        for (long i = 0; i < n; ++i) x(i) = (double)v[(size_t)i];
        sum += std::exp(-M_PI * x.dot(L.gram * x));
        long pos = 0;
        while (pos < n && ++v[(size_t)pos] > M) v[(size_t)pos++] = -M;
        if (pos == n) break;
    }
    return std::log(sum);
}

double h1_ar(const MetrizedLattice& L, double tol) { return h0_ar(dual_lattice(L), tol); }

double rr_defect(const MetrizedLattice& L, double tol) {
    return h0_ar(L, tol) - h1_ar(L, tol) - deg_ar(L);
}

VanishingCheck vanishing_bound_check(double d, double tol) {
    if (d > 0) throw_usage("vanishing bound applies to nonpositive degree");
    VanishingCheck out;
    out.d = d;
    MetrizedLattice L{Eigen::MatrixXd::Constant(1, 1, std::exp(-2.0 * d))};
    out.h0 = h0_ar(L, tol);
    out.bound = 3.0 / (1.0 - std::log(3.0) / M_PI) * std::exp(-M_PI * std::exp(-d));
    out.ok = out.h0 <= out.bound;
    return out;
}

double arith_deg(const ArithDivisor& D) {
    double deg = D.r_inf;
    for (auto [p, n] : D.finite) {
        if (!is_prime(p)) throw_usage("arithmetic divisor supported at non-prime " + std::to_string(p));
        deg += (double)n * std::log((double)p);
    }
    return deg;
}

MetrizedLattice arith_h0_lattice(const ArithDivisor& D) {
    // generator of the fractional ideal prod p^{-n_p} Z
    double gen = 1.0;
    for (auto [p, n] : D.finite) {
        if (!is_prime(p)) throw_usage("arithmetic divisor supported at non-prime " + std::to_string(p));
        gen *= std::pow((double)p, (double)-n);
    }
    double scaled = std::exp(-D.r_inf) * gen;
    return {Eigen::MatrixXd::Constant(1, 1, scaled * scaled)};
}

ArithCohResult adelic_complex_arith(const ArithDivisor& D, double tol) {
    MetrizedLattice L = arith_h0_lattice(D);
    ArithCohResult r;
    r.h0 = h0_ar(L, tol);
    r.h1 = h1_ar(L, tol);
    r.deg = arith_deg(D);
    r.defect = r.h0 - r.h1 - r.deg;
    return r;
}

}  // namespace adelix
