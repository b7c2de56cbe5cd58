#include <algorithm>
#include <cmath>

#include "adelix/surface.hpp"

namespace adelix {

/* Finite-level model of the residue pairing on a vertical curve V_p: tails of
 * the local fields at the points of S against the dual windows cut out by
 * res(x y omega). Everything here is exact F_p linear algebra.
 */

namespace {

std::string window_point_key(const TailWindow& w) {
    return w.pt_inf ? std::string("inf") : poly_pretty(w.pt);
}

// Laurent expansion of omega_bar = wbar dt at a fiber point, coefficients in
// the residue field F_p[x]/(pt). At infinity the residue field is F_p and the
// modulus is x.
struct PointExpansion {
    typename ModPoly<Fp>::Ctx rc;
    long d = 1;                         // residue degree
    LaurentSeries<ModPoly<Fp>> series;  // expansion of omega_bar
    long m = 0;                         // ord of omega_bar at the point
};

PointExpansion expand_omega(const RationalFunction<Fp>& wbar, const TailWindow& w, long p,
                            long kmax) {
    PointExpansion out;
    Fp one(p, 1), zero(p, 0);
    auto rc = std::make_shared<ModCtx<Fp>>();
    if (w.pt_inf) {
        // u = 1/t, dt = -u^{-2} du, reversal expansion
        rc->m = make_poly<Fp>({zero, one});
        out.rc = rc;
        out.d = 1;
        long a = wbar.num.deg(), b = wbar.den.deg();
        out.m = (b - a) - 2;
        long T = kmax - out.m + 6;
        ModPoly<Fp> onem = ModPoly<Fp>::constant(rc, one);
        Poly<Fp> rn = wbar.num, rd = wbar.den;
        std::reverse(rn.c.begin(), rn.c.end());
        std::reverse(rd.c.begin(), rd.c.end());
        LaurentSeries<ModPoly<Fp>> u = make_series<ModPoly<Fp>>(1, {onem}, T);
        LaurentSeries<ModPoly<Fp>> G = eval_poly_at_series(embed_poly(poly_trim(rn), rc), u, onem);
        LaurentSeries<ModPoly<Fp>> H = eval_poly_at_series(embed_poly(poly_trim(rd), rc), u, onem);
        out.series = scalar_mul(-onem, shift_exp(G * series_inv(H), b - a - 2));
        return out;
    }
    rc->m = w.pt;
    out.rc = rc;
    out.d = w.pt.deg();
    long kn = poly_ord_at(wbar.num, w.pt), kd = poly_ord_at(wbar.den, w.pt);
    out.m = kn - kd;
    long T = kmax - out.m + 6;
    Poly<Fp> n1 = wbar.num, d1 = wbar.den;
    for (long i = 0; i < kn; ++i) n1 = divmod(n1, w.pt).first;
    for (long i = 0; i < kd; ++i) d1 = divmod(d1, w.pt).first;
    ModPoly<Fp> theta = ModPoly<Fp>::gen(rc);
    ModPoly<Fp> onem = ModPoly<Fp>::constant(rc, one);
    LaurentSeries<ModPoly<Fp>> that = newton_uniformizer(embed_poly(w.pt, rc), theta, onem, T + 1);
    LaurentSeries<ModPoly<Fp>> G = eval_poly_at_series(embed_poly(n1, rc), that, onem);
    LaurentSeries<ModPoly<Fp>> H = eval_poly_at_series(embed_poly(d1, rc), that, onem);
    out.series = shift_exp(G * series_inv(H), kn - kd) * derivative(that);
    return out;
}

struct FlatIndex {
    size_t point = 0;  // index into the per-point expansions
    long e = 0;        // tail exponent
    long r = 0;        // residue-field basis power theta^r
};

void flatten(const std::vector<TailWindow>& ws, const std::vector<size_t>& point_of,
             const std::vector<PointExpansion>& exps, std::vector<FlatIndex>& out) {
    for (size_t i = 0; i < ws.size(); ++i)
        for (long e = ws[i].lo; e < ws[i].hi; ++e)
            for (long r = 0; r < exps[point_of[i]].d; ++r) out.push_back({point_of[i], e, r});
}

}  // namespace

PairingSpace quotient_pairing_space(long p, const SurfaceDifferential& om,
                                    const std::vector<TailWindow>& side1) {
    if (!is_prime(p)) throw_usage("pairing space needs a prime p");
    if (side1.empty()) throw_usage("pairing space needs at least one tail window");
    for (const auto& w : side1) {
        if (w.lo >= w.hi) throw_usage("tail window with empty range");
        if (!w.pt_inf) {
            if (w.pt.deg() < 1 || !is_irreducible_fp(w.pt))
                throw_usage("tail window point must be a monic irreducible");
            if (w.pt.lead().p() != p) throw_usage("tail window point lives over the wrong prime");
        }
    }
    PairingSpace sp;
    sp.p = p;
    sp.side1 = side1;
    RationalFunction<Fp> wbar = rf_reduce(om.w, p);

    // group windows by point
    std::vector<size_t> point_of(side1.size(), 0);
    std::vector<size_t> reps;  // first window at each distinct point
    for (size_t i = 0; i < side1.size(); ++i) {
        size_t k = reps.size();
        for (size_t j = 0; j < reps.size(); ++j)
            if (window_point_key(side1[reps[j]]) == window_point_key(side1[i])) k = j;
        if (k == reps.size()) reps.push_back(i);
        point_of[i] = k;
    }

    // per point: worst coefficient index over window pairs, then expand once
    std::vector<PointExpansion> exps(reps.size());
    for (size_t k = 0; k < reps.size(); ++k) {
        const TailWindow& wk = side1[reps[k]];
        // m is needed for the dual windows before the expansion can be sized
        long m;
        if (wk.pt_inf) {
            m = (wbar.den.deg() - wbar.num.deg()) - 2;
        } else {
            m = poly_ord_at(wbar.num, wk.pt) - poly_ord_at(wbar.den, wk.pt);
        }
        long kmax = 0;
        bool any = false;
        for (size_t i = 0; i < side1.size(); ++i) {
            if (point_of[i] != k) continue;
            long lo2 = -m - side1[i].hi;
            for (size_t j = 0; j < side1.size(); ++j) {
                if (point_of[j] != k) continue;
                long c = -1 - side1[j].lo - lo2;
                kmax = any ? std::max(kmax, c) : c;
                any = true;
            }
        }
        exps[k] = expand_omega(wbar, wk, p, kmax);
        if (exps[k].m != m)
            throw_math("fiber expansion order disagrees with the divisor computation");
    }

    // dual windows mirror side1 around ord(omega_bar)
    for (size_t i = 0; i < side1.size(); ++i) {
        const PointExpansion& ex = exps[point_of[i]];
        TailWindow w2 = side1[i];
        w2.lo = -ex.m - side1[i].hi;
        w2.hi = -ex.m - side1[i].lo;
        sp.side2.push_back(w2);
    }

    std::vector<FlatIndex> idx1, idx2;
    flatten(side1, point_of, exps, idx1);
    flatten(sp.side2, point_of, exps, idx2);
    sp.dim1 = (long)idx1.size();
    sp.dim2 = (long)idx2.size();

    // theta powers per point, enough for r + r'
    std::vector<std::vector<ModPoly<Fp>>> pows(exps.size());
    for (size_t k = 0; k < exps.size(); ++k) {
        ModPoly<Fp> theta = ModPoly<Fp>::gen(exps[k].rc);
        ModPoly<Fp> cur = ModPoly<Fp>::constant(exps[k].rc, Fp(p, 1));
        for (long r = 0; r <= 2 * (exps[k].d - 1); ++r) {
            pows[k].push_back(cur);
            cur = cur * theta;
        }
    }

    Fp zero(p, 0);
    sp.gram.assign(idx1.size(), std::vector<Fp>(idx2.size(), zero));
    for (size_t i = 0; i < idx1.size(); ++i)
        for (size_t j = 0; j < idx2.size(); ++j) {
            if (idx1[i].point != idx2[j].point) continue;
            const PointExpansion& ex = exps[idx1[i].point];
            long kk = -1 - idx1[i].e - idx2[j].e;
            if (kk < ex.series.lo) continue;  // exact zero below the order
            ModPoly<Fp> c = coeff_at(ex.series, kk);
            sp.gram[i][j] = (pows[idx1[i].point][idx1[i].r + idx2[j].r] * c).trace();
        }
    return sp;
}

namespace {

Mat<Fp> mat_mul(const Mat<Fp>& A, const Mat<Fp>& B) {
    if (A.empty() || B.empty()) return {};
    Mat<Fp> C(A.size(), std::vector<Fp>(B[0].size(), Fp{}));
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t k = 0; k < B.size(); ++k) {
            if (A[i][k].is_zero()) continue;
            for (size_t j = 0; j < B[0].size(); ++j) C[i][j] = C[i][j] + A[i][k] * B[k][j];
        }
    return C;
}

bool fp_vec_zero(const std::vector<Fp>& v) {
    for (const auto& x : v)
        if (!x.is_zero()) return false;
    return true;
}

// reduce v against an rref basis; true when v lies in the row space
bool in_row_space(const Rref<Fp>& r, std::vector<Fp> v) {
    for (size_t pr = 0; pr < r.pivot_cols.size(); ++pr) {
        size_t pc = (size_t)r.pivot_cols[pr];
        Fp f = v[pc];
        if (f.is_zero()) continue;
        for (size_t j = 0; j < v.size(); ++j) v[j] = v[j] - f * r.m[pr][j];
    }
    return fp_vec_zero(v);
}

}  // namespace

Mat<Fp> orth_complement(const PairingSpace& sp, const Mat<Fp>& side1_vectors) {
    Fp one(sp.p, 1);
    Mat<Fp> M = mat_mul(side1_vectors, sp.gram);
    return kernel_basis(M, (size_t)sp.dim2, one);
}

Lemma36Report lemma36_bruteforce(const PairingSpace& sp, const Mat<Fp>& sub1,
                                 const Mat<Fp>& predicted_perp) {
    Lemma36Report rep;
    long p = sp.p;

    // reconstruct the flattened index maps from the stored windows
    std::vector<long> pt_of1, e1, r1, pt_of2, e2, r2;
    auto unpack = [&](const std::vector<TailWindow>& ws, std::vector<long>& pts, std::vector<long>& es,
                      std::vector<long>& rs) {
        std::vector<std::string> keys;
        for (const auto& w : ws) {
            std::string k = window_point_key(w);
            long id = -1;
            for (size_t j = 0; j < keys.size(); ++j)
                if (keys[j] == k) id = (long)j;
            if (id < 0) {
                keys.push_back(k);
                id = (long)keys.size() - 1;
            }
            long d = w.pt_inf ? 1 : w.pt.deg();
            for (long e = w.lo; e < w.hi; ++e)
                for (long r = 0; r < d; ++r) {
                    pts.push_back(id);
                    es.push_back(e);
                    rs.push_back(r);
                }
        }
    };
    unpack(sp.side1, pt_of1, e1, r1);
    unpack(sp.side2, pt_of2, e2, r2);

    // wellposedness: entries depend only on the point, e + e' and r + r'
    rep.pairing_wellposed = (long)pt_of1.size() == sp.dim1 && (long)pt_of2.size() == sp.dim2;
    for (long i = 0; i < sp.dim1 && rep.pairing_wellposed; ++i)
        for (long j = 0; j < sp.dim2; ++j) {
            if (pt_of1[i] != pt_of2[j]) {
                if (!sp.gram[i][j].is_zero()) rep.pairing_wellposed = false;
                continue;
            }
            for (long i2 = 0; i2 < sp.dim1; ++i2)
                for (long j2 = 0; j2 < sp.dim2; ++j2) {
                    if (pt_of1[i2] != pt_of1[i] || pt_of2[j2] != pt_of1[i]) continue;
                    if (e1[i] + e2[j] != e1[i2] + e2[j2] || r1[i] + r2[j] != r1[i2] + r2[j2]) continue;
                    if (!(sp.gram[i][j] - sp.gram[i2][j2]).is_zero()) rep.pairing_wellposed = false;
                }
        }

    // predicted complement must match the computed one as a row space
    Mat<Fp> W = orth_complement(sp, sub1);
    Rref<Fp> rw = row_reduce(W);
    Rref<Fp> rp = row_reduce(predicted_perp);
    rep.complement_match = rw.rank() == rp.rank();
    if (rep.complement_match)
        for (const auto& row : predicted_perp)
            if (!in_row_space(rw, row)) rep.complement_match = false;

    // exhaustive double-complement scan: v in span(sub1) iff v kills W
    double count = std::pow((double)p, (double)sp.dim1);
    if (count > (double)(1L << 21))
        throw_usage("brute-force space too large; keep p^dim under 2^21");
    long total = (long)std::llround(count);
    Rref<Fp> rs = row_reduce(sub1);
    // columns of B = gram * W^T index the complement constraints
    Mat<Fp> Wt;
    if (!W.empty()) {
        Wt.assign(W[0].size(), std::vector<Fp>(W.size(), Fp{}));
        for (size_t i = 0; i < W.size(); ++i)
            for (size_t j = 0; j < W[i].size(); ++j) Wt[j][i] = W[i][j];
    }
    Mat<Fp> B = mat_mul(sp.gram, Wt);
    rep.double_complement = true;
    Fp zero(p, 0);
    for (long n = 0; n < total; ++n) {
        long m = n;
        std::vector<Fp> v(sp.dim1, zero);
        for (long i = 0; i < sp.dim1; ++i) {
            v[i] = Fp(p, m % p);
            m /= p;
        }
        bool kills = true;
        if (!B.empty())
            for (size_t j = 0; j < B[0].size() && kills; ++j) {
                Fp s = zero;
                for (long i = 0; i < sp.dim1; ++i) s = s + v[i] * B[i][j];
                if (!s.is_zero()) kills = false;
            }
        bool member = in_row_space(rs, v);
        if (member != kills) rep.double_complement = false;
        ++rep.vectors_checked;
    }
    return rep;
}

}  // namespace adelix
