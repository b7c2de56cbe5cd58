#pragma once
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "adelix/factor.hpp"
#include "adelix/linalg.hpp"
#include "adelix/poly.hpp"

namespace adelix {

/* Coherent cohomology of P^1 over an exact field K (F_p or Q), computed at
 * finite adelic level. Places are monic irreducible polynomials in the
 * coordinate t plus the place at infinity (uniformizer 1/t); the canonical
 * divisor of dt is -2 * infinity.
 */

template <class K>
struct RationalFunction {
    Poly<K> num, den;  // den monic
};

template <class K>
K one_from(const Poly<K>& sample) {
    return sample.lead() * ring_inv(sample.lead());
}

template <class K>
RationalFunction<K> make_rf(Poly<K> num, Poly<K> den) {
    if (den.is_zero()) throw_usage("rational function with zero denominator");
    Poly<K> g = poly_gcd(num, den);
    if (g.deg() > 0) {
        num = divmod(num, g).first;
        den = divmod(den, g).first;
    }
    K li = ring_inv(den.lead());
    return {scalar_mul(li, num), scalar_mul(li, den)};
}

template <class K>
RationalFunction<K> rf_from_poly(Poly<K> f, const K& one) {
    return {std::move(f), make_poly<K>({one})};
}

template <class K>
bool rf_is_zero(const RationalFunction<K>& f) {
    return f.num.is_zero();
}

template <class K>
RationalFunction<K> operator*(const RationalFunction<K>& a, const RationalFunction<K>& b) {
    return make_rf(a.num * b.num, a.den * b.den);
}

template <class K>
RationalFunction<K> operator+(const RationalFunction<K>& a, const RationalFunction<K>& b) {
    return make_rf(a.num * b.den + b.num * a.den, a.den * b.den);
}

template <class K>
RationalFunction<K> rf_inv(const RationalFunction<K>& a) {
    if (a.num.is_zero()) throw_usage("inverse of the zero function");
    return make_rf(a.den, a.num);
}

template <class K>
std::string rf_str(const RationalFunction<K>& f, const std::string& var = "t") {
    if (f.num.is_zero()) return "0";
    std::string s = "(" + poly_str(f.num, var) + ")";
    if (f.den.deg() > 0 || !exact_zero(f.den.c[0] - one_from(f.den))) s += "/(" + poly_str(f.den, var) + ")";
    return s;
}

template <class K>
struct CurvePlace {
    bool inf = false;
    Poly<K> q;  // monic irreducible; empty when inf

    long deg() const { return inf ? 1 : q.deg(); }
    std::string key() const { return inf ? "inf" : poly_str(q, "t"); }
};

template <class K>
struct CurveDivisor {
    std::map<std::string, std::pair<CurvePlace<K>, long>> terms;

    void add(const CurvePlace<K>& p, long mult) {
        if (mult == 0) return;
        auto it = terms.find(p.key());
        if (it == terms.end()) terms.emplace(p.key(), std::make_pair(p, mult));
        else {
            it->second.second += mult;
            if (it->second.second == 0) terms.erase(it);
        }
    }
    long coeff(const CurvePlace<K>& p) const {
        auto it = terms.find(p.key());
        return it == terms.end() ? 0 : it->second.second;
    }
    long deg() const {
        long d = 0;
        for (const auto& [k, pm] : terms) d += pm.first.deg() * pm.second;
        return d;
    }
};

template <class K>
CurvePlace<K> place_infinity() {
    return CurvePlace<K>{true, Poly<K>{}};
}

template <class K>
CurvePlace<K> place_finite(Poly<K> q) {
    return CurvePlace<K>{false, monic(std::move(q))};
}

inline std::vector<PolyFactor<Fp>> factor_poly(const Poly<Fp>& f) { return factor_fp(f); }
inline std::vector<PolyFactor<Rational>> factor_poly(const Poly<Rational>& f) { return factor_q(f); }

template <class K>
long poly_ord_at(Poly<K> f, const Poly<K>& q) {
    if (f.is_zero()) throw_usage("order of zero polynomial");
    long k = 0;
    while (true) {
        auto [quo, rem] = divmod(f, q);
        if (!rem.is_zero()) return k;
        f = quo;
        ++k;
    }
}

template <class K>
long ord_at(const RationalFunction<K>& f, const CurvePlace<K>& p) {
    if (f.num.is_zero()) throw_usage("order of the zero function");
    if (p.inf) return f.den.deg() - f.num.deg();
    return poly_ord_at(f.num, p.q) - poly_ord_at(f.den, p.q);
}

template <class K>
CurveDivisor<K> divisor_of(const RationalFunction<K>& f) {
    if (f.num.is_zero()) throw_usage("divisor of the zero function");
    CurveDivisor<K> d;
    for (const auto& fac : factor_poly(f.num)) d.add(place_finite(fac.f), fac.mult);
    for (const auto& fac : factor_poly(f.den)) d.add(place_finite(fac.f), -fac.mult);
    d.add(place_infinity<K>(), f.den.deg() - f.num.deg());
    return d;
}

template <class K>
CurveDivisor<K> canonical_divisor(const K& one) {
    (void)one;
    CurveDivisor<K> d;
    d.add(place_infinity<K>(), -2);
    return d;
}

/* Newton solve for the local parameter: given a monic modulus m over a ring
 * R = K[x]/(m) in which theta = class of x satisfies m(theta) = 0 and
 * m'(theta) is invertible, produce t = theta_hat(u) with m(theta_hat) = u
 * exactly to the requested truncation.
 */
template <class R>
LaurentSeries<R> eval_poly_at_series(const Poly<R>& f, const LaurentSeries<R>& x, const R& one) {
    LaurentSeries<R> acc;
    acc.trunc = x.trunc;
    acc.lo = acc.trunc;
    (void)one;
    for (size_t i = f.c.size(); i-- > 0;) {
        acc = acc * x;
        if (!exact_zero(f.c[i])) acc = acc + make_series<R>(0, {f.c[i]}, x.trunc);
    }
    return acc;
}

template <class R>
LaurentSeries<R> newton_uniformizer(const Poly<R>& m, const R& theta, const R& one, long T) {
    if (T < 2) T = 2;
    Poly<R> mp = poly_derivative(m);
    R slope0 = poly_eval(mp, theta);
    LaurentSeries<R> that = make_series<R>(0, {theta, ring_inv(slope0)}, 2);
    LaurentSeries<R> u_ser = make_series<R>(1, {one});
    long acc = 2;
    while (acc < T) {
        long next = std::min(2 * acc, T);
        that.trunc = next;
        LaurentSeries<R> err = eval_poly_at_series(m, that, one) - truncated(u_ser, next);
        LaurentSeries<R> slope = eval_poly_at_series(mp, that, one);
        that = truncated(that - err * series_inv(slope), next);
        acc = next;
    }
    return that;
}

template <class K>
Poly<ModPoly<K>> embed_poly(const Poly<K>& f, const typename ModPoly<K>::Ctx& rc) {
    Poly<ModPoly<K>> r;
    r.c.reserve(f.c.size());
    for (const auto& cc : f.c) r.c.push_back(ModPoly<K>::constant(rc, cc));
    return poly_trim(r);
}

template <class K>
std::vector<K> mod_coords(const ModPoly<K>& x, long d) {
    std::vector<K> v((size_t)d, K{});
    for (size_t i = 0; i < x.value().c.size() && (long)i < d; ++i) v[i] = x.value().c[i];
    return v;
}

/* Laurent expansion of f at a place, as a series in the local uniformizer u
 * (u = q(t) at a finite place, u = 1/t at infinity) with coefficients in the
 * residue field K[x]/(q). Truncation is at least `window`.
 */
template <class K>
LaurentSeries<ModPoly<K>> expand_at_place(const RationalFunction<K>& f, const CurvePlace<K>& p,
                                          long window) {
    if (f.num.is_zero()) {
        LaurentSeries<ModPoly<K>> z;
        z.trunc = window;
        z.lo = window;
        return z;
    }
    if (p.inf) {
        auto rc = std::make_shared<ModCtx<K>>();
        K one = one_from(f.den);
        rc->m = make_poly<K>({K{}, one});  // modulus x: residue field = K
        long a = f.num.deg(), b = f.den.deg();
        auto rev = [&](const Poly<K>& g, long d) {
            Poly<ModPoly<K>> r;
            r.c.assign((size_t)d + 1, ModPoly<K>{});
            for (long i = 0; i <= d; ++i) {
                K cc = (i <= g.deg()) ? g.c[(size_t)(d - i)] : K{};
                r.c[(size_t)i] = ModPoly<K>::constant(rc, cc);
            }
            return poly_trim(r);
        };
        long T = window + 2 * b + 2 + std::max(0L, a - b);
        LaurentSeries<ModPoly<K>> gn, hn;
        {
            Poly<ModPoly<K>> gr = rev(f.num, a), hr = rev(f.den, b);
            gn = make_series<ModPoly<K>>(0, gr.c, T);
            hn = make_series<ModPoly<K>>(0, hr.c, T);
        }
        return shift_exp(gn * series_inv(hn), b - a);
    }
    auto rc = std::make_shared<ModCtx<K>>();
    rc->m = p.q;
    ModPoly<K> theta = ModPoly<K>::gen(rc);
    ModPoly<K> one = ModPoly<K>::constant(rc, one_from(p.q));
    long kden = poly_ord_at(f.den, p.q);
    long knum = poly_ord_at(f.num, p.q);
    long T = window + 2 * kden + knum + 3;
    LaurentSeries<ModPoly<K>> that = newton_uniformizer(embed_poly(p.q, rc), theta, one, T);
    LaurentSeries<ModPoly<K>> G = eval_poly_at_series(embed_poly(f.num, rc), that, one);
    LaurentSeries<ModPoly<K>> H = eval_poly_at_series(embed_poly(f.den, rc), that, one);
    return G * series_inv(H);
}

/* Exact residue of f dt at a place: the trace from the residue field of the
 * u^{-1} coefficient of f(theta_hat) d theta_hat / du (at infinity of
 * f(1/u) * (-u^{-2})).
 */
template <class K>
K residue_at_place(const RationalFunction<K>& f, const CurvePlace<K>& p) {
    if (f.num.is_zero()) return K{};
    if (p.inf) {
        LaurentSeries<ModPoly<K>> e = expand_at_place(f, p, 4);
        ModPoly<K> c = coeff_at(e, 1);  // f(1/u) * -u^{-2}: residue = -coeff of u^1
        return -(c.trace());
    }
    auto rc = std::make_shared<ModCtx<K>>();
    rc->m = p.q;
    ModPoly<K> theta = ModPoly<K>::gen(rc);
    ModPoly<K> one = ModPoly<K>::constant(rc, one_from(p.q));
    long kden = poly_ord_at(f.den, p.q);
    long T = 2 * kden + 4;
    LaurentSeries<ModPoly<K>> that = newton_uniformizer(embed_poly(p.q, rc), theta, one, T + 1);
    LaurentSeries<ModPoly<K>> G = eval_poly_at_series(embed_poly(f.num, rc), that, one);
    LaurentSeries<ModPoly<K>> H = eval_poly_at_series(embed_poly(f.den, rc), that, one);
    LaurentSeries<ModPoly<K>> val = G * series_inv(H) * derivative(that);
    return coeff_at(val, -1).trace();
}

// Sum of residues of f dt over the poles of f (and infinity); exactly zero
// by the residue theorem, returned for checking.
template <class K>
std::pair<K, std::vector<std::pair<std::string, K>>> residue_theorem_check(const RationalFunction<K>& f) {
    std::vector<std::pair<std::string, K>> parts;
    K total{};
    if (!f.num.is_zero()) {
        for (const auto& fac : factor_poly(f.den)) {
            CurvePlace<K> p = place_finite(fac.f);
            K r = residue_at_place(f, p);
            total = total + r;
            parts.emplace_back(p.key(), r);
        }
    }
    CurvePlace<K> pinf = place_infinity<K>();
    K rinf = residue_at_place(f, pinf);
    total = total + rinf;
    parts.emplace_back(pinf.key(), rinf);
    return {total, parts};
}

/* Riemann-Roch space L(D) = { f : div f + D >= 0 }, by linear algebra on the
 * ansatz f = g / B with B the positive finite part of D.
 */
template <class K>
std::vector<RationalFunction<K>> rr_space(const CurveDivisor<K>& D, const K& one) {
    Poly<K> B = make_poly<K>({one});
    long n_inf = 0;
    std::vector<std::pair<Poly<K>, long>> negatives;
    for (const auto& [key, pm] : D.terms) {
        const CurvePlace<K>& p = pm.first;
        long n = pm.second;
        if (p.inf) {
            n_inf = n;
            continue;
        }
        if (n > 0)
            for (long i = 0; i < n; ++i) B = B * p.q;
        else
            negatives.emplace_back(p.q, -n);
    }
    long M = n_inf + B.deg();  // max degree of g
    std::vector<RationalFunction<K>> basis;
    if (M < 0) return basis;
    size_t cols = (size_t)M + 1;
    Mat<K> rows;
    for (const auto& [q, mult] : negatives) {
        Poly<K> qm = make_poly<K>({one});
        for (long i = 0; i < mult; ++i) qm = qm * q;
        // row block: coefficients of x^j mod q^mult must vanish
        std::vector<Poly<K>> xmods;
        Poly<K> cur = make_poly<K>({one});
        for (size_t j = 0; j < cols; ++j) {
            xmods.push_back(poly_mod(cur, qm));
            cur = poly_shift(cur, 1);
        }
        for (long r = 0; r < qm.deg(); ++r) {
            std::vector<K> row(cols, K{});
            for (size_t j = 0; j < cols; ++j)
                if ((long)xmods[j].c.size() > r) row[j] = xmods[j].c[(size_t)r];
            rows.push_back(std::move(row));
        }
    }
    Mat<K> ker = kernel_basis(rows, cols, one);
    for (const auto& v : ker) {
        Poly<K> g = make_poly<K>(std::vector<K>(v));
        if (g.is_zero()) continue;
        basis.push_back(make_rf(g, B));
    }
    return basis;
}

struct CohDims {
    long h0 = 0;
    long h1 = 0;
};

/* h^0 and h^1 of O(D) through the finite-level adelic quotient: pick
 * E = D + m*infinity deep enough that H^1(E) = 0, realize A(E)/A(D) by
 * explicit local windows, and read both dimensions off the rank of the
 * expansion matrix of L(E).
 */
template <class K>
CohDims adelic_h0_h1(const CurveDivisor<K>& D, const K& one) {
    long m = std::max(0L, -D.deg() - 1) + 2;
    CurveDivisor<K> E = D;
    E.add(place_infinity<K>(), m);
    std::vector<RationalFunction<K>> LE = rr_space(E, one);
    long qdim = 0;
    struct Window {
        CurvePlace<K> p;
        long elo, ehi;  // exponents -e_P <= j < -d_P
    };
    std::vector<Window> wins;
    for (const auto& [key, pm] : E.terms) {
        long e = pm.second, d = D.coeff(pm.first);
        if (e > d) {
            wins.push_back({pm.first, -e, -d});
            qdim += (e - d) * pm.first.deg();
        }
    }
    // also places in D but not E cannot occur (E >= D by construction)
    Mat<K> rows;
    for (const auto& f : LE) {
        std::vector<K> row;
        for (const auto& w : wins) {
            LaurentSeries<ModPoly<K>> ex = expand_at_place(f, w.p, w.ehi);
            for (long j = w.elo; j < w.ehi; ++j) {
                std::vector<K> cs = mod_coords(coeff_at(ex, j), w.p.deg());
                row.insert(row.end(), cs.begin(), cs.end());
            }
        }
        rows.push_back(std::move(row));
    }
    long rk = rows.empty() ? 0 : mat_rank(rows);
    CohDims out;
    out.h0 = (long)LE.size() - rk;
    out.h1 = qdim - rk;
    return out;
}

// h^1 via duality for cross-checking: h^1(D) = dim L(K_can - D).
template <class K>
long h1_serre(const CurveDivisor<K>& D, const K& one) {
    CurveDivisor<K> KD = canonical_divisor(one);
    for (const auto& [key, pm] : D.terms) KD.add(pm.first, -pm.second);
    return (long)rr_space(KD, one).size();
}

/* Matrix of the Serre duality pairing L(K_can - D) x A(E)/A(D) -> K,
 * (g, a) |-> sum_P res_P(g a dt), evaluated on the local window coordinates.
 * Its rank equals h^1(D) when the induced pairing on H^1 is perfect.
 */
template <class K>
Mat<K> serre_pairing_matrix(const CurveDivisor<K>& D, const K& one) {
    CurveDivisor<K> KD = canonical_divisor(one);
    for (const auto& [key, pm] : D.terms) KD.add(pm.first, -pm.second);
    std::vector<RationalFunction<K>> dual = rr_space(KD, one);

    long m = std::max(0L, -D.deg() - 1) + 2;
    CurveDivisor<K> E = D;
    E.add(place_infinity<K>(), m);
    Mat<K> mat;
    for (const auto& g : dual) {
        std::vector<K> row;
        for (const auto& [key, pm] : E.terms) {
            long e = pm.second, d = D.coeff(pm.first);
            if (e <= d) continue;
            const CurvePlace<K>& p = pm.first;
            // coordinate adeles u^j x^r at P; pairing needs the expansion of
            // g up to exponent matching -j-1 (plus dt twist at infinity)
            long need = (p.inf ? e + 2 : e) + 2;
            LaurentSeries<ModPoly<K>> ex = expand_at_place(g, p, need);
            long pole = ex.c.empty() ? 0 : std::max(0L, -ex.lo);
            auto rc = std::make_shared<ModCtx<K>>();
            LaurentSeries<ModPoly<K>> dtw;  // d t / d u as series at P
            if (p.inf) {
                rc->m = make_poly<K>({K{}, one});
                ModPoly<K> mone = -ModPoly<K>::constant(rc, one);
                dtw = make_series<ModPoly<K>>(-2, {mone});
            } else {
                rc->m = p.q;
                ModPoly<K> theta = ModPoly<K>::gen(rc);
                ModPoly<K> onem = ModPoly<K>::constant(rc, one);
                dtw = derivative(newton_uniformizer(embed_poly(p.q, rc), theta, onem, need + pole + 2));
            }
            LaurentSeries<ModPoly<K>> gdt = ex * dtw;
            for (long j = -e; j < -d; ++j)
                for (long r = 0; r < p.deg(); ++r) {
                    // res(g * x^r u^j dt) = Tr(x^r * coeff_{u^{-1-j}}(g dt))
                    ModPoly<K> xr = ModPoly<K>::constant(rc, one);
                    for (long i = 0; i < r; ++i) xr = xr * ModPoly<K>::gen(rc);
                    row.push_back((xr * coeff_at(gdt, -1 - j)).trace());
                }
        }
        mat.push_back(std::move(row));
    }
    return mat;
}

}  // namespace adelix
