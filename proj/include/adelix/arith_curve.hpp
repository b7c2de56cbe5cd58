#pragma once
#include <Eigen/Dense>
#include <vector>

namespace adelix {

/* Arithmetic cohomology of metrized lattices over Spec Z. A lattice is Z^n
 * with the inner product given by an SPD Gram matrix;
 *
 *   deg = -1/2 log det(gram)
 *   h0  = log sum_{v in Z^n} exp(-pi v^T gram v)
 *   h1  = h0 of the dual lattice (inverse Gram)
 *
 * Poisson summation makes h0 - h1 - deg vanish exactly; the numeric defect
 * is exposed for testing. Theta sums are enumerated over a box whose radius
 * is chosen so the neglected tail is provably below tol/10.
 */
struct MetrizedLattice {
    Eigen::MatrixXd gram;
    long rank() const { return (long)gram.rows(); }
};

MetrizedLattice lattice_from_gram(const Eigen::MatrixXd& g);  // validates SPD
MetrizedLattice dual_lattice(const MetrizedLattice& L);

double deg_ar(const MetrizedLattice& L);
double h0_ar(const MetrizedLattice& L, double tol = 1e-12);
double h1_ar(const MetrizedLattice& L, double tol = 1e-12);
double rr_defect(const MetrizedLattice& L, double tol = 1e-12);

// Effectivity bound for rank-1 lattices of degree d <= 0:
// h0([e^{-2d}]) <= 3/(1 - log(3)/pi) * exp(-pi e^{-d}).
struct VanishingCheck {
    double d = 0;
    double h0 = 0;
    double bound = 0;
    bool ok = false;
};
VanishingCheck vanishing_bound_check(double d, double tol = 1e-12);

/* Arithmetic divisors on Spec Z: finite part sum n_p * [p] plus r * [inf].
 * The associated h0 lattice is the fractional ideal prod p^{-n_p} Z with the
 * metric scaled by e^{-r}.
 */
struct ArithDivisor {
    std::vector<std::pair<long, long>> finite;  // (prime, multiplicity)
    double r_inf = 0.0;
};

double arith_deg(const ArithDivisor& D);
MetrizedLattice arith_h0_lattice(const ArithDivisor& D);

struct ArithCohResult {
    double h0 = 0, h1 = 0, deg = 0, defect = 0;
};
ArithCohResult adelic_complex_arith(const ArithDivisor& D, double tol = 1e-12);

}  // namespace adelix
