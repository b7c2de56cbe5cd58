#pragma once
#include <algorithm>
#include <string>
#include <vector>

#include "adelix/errors.hpp"
#include "adelix/padic.hpp"
#include "adelix/prime_field.hpp"
#include "adelix/rational.hpp"

namespace adelix {

inline constexpr long kExactTrunc = kInfPrec;  // "known to all orders" sentinel

/* Small overload set gluing the four coefficient rings (Rational, Fp, PAdic,
 * double) to the generic series code. A default-constructed K is the exact
 * zero in every ring; zeroish() additionally treats p-adic zero-at-precision
 * as zero (equality at precision), while exact_zero() does not, so trimming
 * never destroys precision information.
 */
inline bool exact_zero(const Rational& x) { return x == 0; }
inline bool exact_zero(const Fp& x) { return x.is_zero(); }
inline bool exact_zero(const PAdic& x) { return x.is_exact_zero(); }
inline bool exact_zero(double x) { return x == 0.0; }

inline bool zeroish(const Rational& x) { return x == 0; }
inline bool zeroish(const Fp& x) { return x.is_zero(); }
inline bool zeroish(const PAdic& x) { return x.is_zero_at_precision(); }
inline bool zeroish(double x) { return x == 0.0; }

inline Rational ring_inv(const Rational& x) {
    if (x == 0) throw_usage("division by zero rational");
    return Rational(1) / x;
}
inline Fp ring_inv(const Fp& x) { return x.inv(); }
inline PAdic ring_inv(const PAdic& x) { return x.inv(); }
inline double ring_inv(double x) {
    if (x == 0.0) throw_usage("division by zero real");
    return 1.0 / x;
}

inline Rational ring_mul_int(const Rational& x, long k) { return x * Rational(k); }
inline Fp ring_mul_int(const Fp& x, long k) { return x.mul_int(k); }
inline PAdic ring_mul_int(const PAdic& x, long k) { return x.mul_int(k); }
inline double ring_mul_int(double x, long k) { return x * (double)k; }

inline Rational ring_mul_rat(const Rational& x, const Rational& r) { return x * r; }
inline PAdic ring_mul_rat(const PAdic& x, const Rational& r) { return x.mul_rat(r); }
inline double ring_mul_rat(double x, const Rational& r) { return x * r.get_d(); }

/* Formal Laurent series known modulo t^trunc. c[i] is the coefficient of
 * t^{lo+i}; exponents in [lo + c.size(), trunc) are exactly zero, exponents
 * >= trunc are unknown. Empty c means the zero series (to that truncation).
 */
template <class K>
struct LaurentSeries {
    long lo = 0;
    std::vector<K> c;
    long trunc = kExactTrunc;

    bool is_zero_series() const { return c.empty(); }
};

template <class K>
LaurentSeries<K> normalized(LaurentSeries<K> f) {
    size_t drop = 0;
    while (drop < f.c.size() && exact_zero(f.c[drop])) ++drop;
    if (drop) {
        f.c.erase(f.c.begin(), f.c.begin() + (long)drop);
        f.lo += (long)drop;
    }
    while (!f.c.empty() && exact_zero(f.c.back())) f.c.pop_back();
    if (f.c.empty()) f.lo = std::min(f.lo, f.trunc);
    if (f.lo > f.trunc) f.lo = f.trunc;
    return f;
}

// Build sum_i coeffs[i] t^{e0+i}, exactly known.
template <class K>
LaurentSeries<K> make_series(long e0, std::vector<K> coeffs, long trunc = kExactTrunc) {
    LaurentSeries<K> f;
    f.lo = e0;
    f.c = std::move(coeffs);
    f.trunc = trunc;
    return normalized(f);
}

template <class K>
K coeff_at(const LaurentSeries<K>& f, long k) {
    if (k >= f.trunc)
        throw_precision("coefficient of t^" + std::to_string(k) + " is beyond the truncation order t^" +
                            std::to_string(f.trunc),
                        "re-run with a Laurent window reaching exponent " + std::to_string(k + 1));
    if (k < f.lo || k >= f.lo + (long)f.c.size()) return K{};
    return f.c[(size_t)(k - f.lo)];
}

template <class K>
LaurentSeries<K> truncated(LaurentSeries<K> f, long new_trunc) {
    f.trunc = std::min(f.trunc, new_trunc);
    if (f.lo + (long)f.c.size() > f.trunc) {
        long keep = std::max<long>(0, f.trunc - f.lo);
        f.c.resize((size_t)keep);
    }
    return normalized(f);
}

template <class K>
LaurentSeries<K> shift_exp(LaurentSeries<K> f, long k) {
    f.lo += k;
    if (f.trunc < kExactTrunc) f.trunc += k;
    return f;
}

template <class K>
LaurentSeries<K> operator+(const LaurentSeries<K>& a, const LaurentSeries<K>& b) {
    LaurentSeries<K> r;
    r.trunc = std::min(a.trunc, b.trunc);
    long lo = std::min(a.c.empty() ? r.trunc : a.lo, b.c.empty() ? r.trunc : b.lo);
    lo = std::min(lo, r.trunc);
    r.lo = lo;
    long hi = r.trunc;
    long ahi = std::min<long>(a.lo + (long)a.c.size(), hi);
    long bhi = std::min<long>(b.lo + (long)b.c.size(), hi);
    long top = std::max(std::max(ahi, bhi), lo);
    r.c.assign((size_t)(top - lo), K{});
    for (long k = a.lo; k < ahi; ++k) r.c[(size_t)(k - lo)] = a.c[(size_t)(k - a.lo)];
    for (long k = b.lo; k < bhi; ++k) r.c[(size_t)(k - lo)] = r.c[(size_t)(k - lo)] + b.c[(size_t)(k - b.lo)];
    return normalized(r);
}

template <class K>
LaurentSeries<K> negated(LaurentSeries<K> f) {
    for (auto& x : f.c) x = -x;
    return f;
}

template <class K>
LaurentSeries<K> operator-(const LaurentSeries<K>& a, const LaurentSeries<K>& b) {
    return a + negated(b);
}

template <class K>
LaurentSeries<K> scalar_mul(const K& s, LaurentSeries<K> f) {
    for (auto& x : f.c) x = s * x;
    return normalized(f);
}

// Worst-case window rule for products: the unknown tail of a starts at
// a.trunc and meets b no lower than b.lo, and symmetrically.
template <class K>
long mul_trunc_bound(const LaurentSeries<K>& a, const LaurentSeries<K>& b) {
    long alo = a.c.empty() ? a.trunc : a.lo;
    long blo = b.c.empty() ? b.trunc : b.lo;
    long t1 = (a.trunc >= kExactTrunc) ? kExactTrunc : a.trunc + blo;
    long t2 = (b.trunc >= kExactTrunc) ? kExactTrunc : b.trunc + alo;
    return std::min(std::min(t1, t2), kExactTrunc);
}

template <class K>
LaurentSeries<K> operator*(const LaurentSeries<K>& a, const LaurentSeries<K>& b) {
    LaurentSeries<K> r;
    r.trunc = mul_trunc_bound(a, b);
    if (a.c.empty() || b.c.empty()) {
        r.lo = r.trunc;
        return r;
    }
    long lo = a.lo + b.lo;
    long hi = std::min(lo + (long)(a.c.size() + b.c.size()) - 1, r.trunc);
    r.lo = std::min(lo, r.trunc);
    long n = std::max<long>(0, hi - r.lo);
    r.c.assign((size_t)n, K{});
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (exact_zero(a.c[i])) continue;
        for (size_t j = 0; j < b.c.size(); ++j) {
            long e = a.lo + (long)i + b.lo + (long)j;
            if (e >= r.trunc) break;
            size_t idx = (size_t)(e - r.lo);
            r.c[idx] = r.c[idx] + a.c[i] * b.c[j];
        }
    }
    return normalized(r);
}

// Multiplicative inverse. Requires an invertible leading coefficient; a
// leading coefficient that is only zero-at-precision is a precision error,
// not a zero divide.
template <class K>
LaurentSeries<K> series_inv(const LaurentSeries<K>& f0) {
    LaurentSeries<K> f = normalized(f0);
    if (f.c.empty()) throw_usage("inversion of a zero(-at-precision) series");
    if (zeroish(f.c[0]))
        throw_precision("leading series coefficient is zero at precision; cannot invert",
                        "increase p-adic digits");
    long n = (f.trunc >= kExactTrunc) ? kExactTrunc : f.trunc - f.lo;  // relative precision
    LaurentSeries<K> r;
    r.lo = -f.lo;
    r.trunc = (n >= kExactTrunc) ? kExactTrunc : n - f.lo;  // = f.trunc - 2*f.lo
    long terms = (n >= kExactTrunc) ? 64 : n;  // exact input: default window of 64 terms
    if ((long)f.c.size() == 1) {
        r.c = {ring_inv(f.c[0])};
        if (f.trunc >= kExactTrunc) r.trunc = kExactTrunc;
        return normalized(r);
    }
    K g0 = ring_inv(f.c[0]);
    std::vector<K> g((size_t)terms, K{});
    g[0] = g0;
    for (long k = 1; k < terms; ++k) {
        K acc{};
        for (long j = 1; j <= k && j < (long)f.c.size(); ++j)
            acc = acc + f.c[(size_t)j] * g[(size_t)(k - j)];
        g[(size_t)k] = -(g0 * acc);
    }
    r.c = std::move(g);
    if (f.trunc >= kExactTrunc) r.trunc = -f.lo + terms;  // honest: we only materialized this many
    return normalized(r);
}

template <class K>
LaurentSeries<K> derivative(const LaurentSeries<K>& f) {
    LaurentSeries<K> r;
    r.trunc = (f.trunc >= kExactTrunc) ? kExactTrunc : f.trunc - 1;
    r.lo = f.lo - 1;
    r.c.reserve(f.c.size());
    for (size_t i = 0; i < f.c.size(); ++i) r.c.push_back(ring_mul_int(f.c[i], f.lo + (long)i));
    return normalized(r);
}

template <class K>
LaurentSeries<K> series_pow(const LaurentSeries<K>& f, long e, long cap = kExactTrunc) {
    if (e < 0) return series_pow(series_inv(f), -e, cap);
    if (f.c.empty()) throw_usage("series_pow of zero series");
    // multiplicative identity of K, built from an invertible sample so that
    // context-carrying rings (Fp, PAdic) keep their context
    K one = f.c[0] * ring_inv(f.c[0]);
    LaurentSeries<K> r = make_series<K>(0, {one});
    LaurentSeries<K> base = truncated(f, cap);
    while (e > 0) {
        if (e & 1) r = truncated(r * base, cap);
        base = truncated(base * base, cap);
        e >>= 1;
    }
    return r;
}

/* Composition f(g) for g with strictly positive lowest exponent. Negative
 * exponents of f go through series_inv(g). The result truncation follows the
 * worst-case rule: the unknown f-tail enters at f.trunc * lo(g), the unknown
 * g-tail perturbs term i at order (i-1)*lo(g) + g.trunc.
 */
template <class K>
LaurentSeries<K> compose(const LaurentSeries<K>& f, const LaurentSeries<K>& g0) {
    LaurentSeries<K> g = normalized(g0);
    if (g.c.empty() || g.lo < 1) throw_usage("compose: substitution series must have positive valuation");
    long glo = g.lo;
    long cap = kExactTrunc;
    if (f.trunc < kExactTrunc) cap = std::min(cap, f.trunc * glo);
    if (g.trunc < kExactTrunc) cap = std::min(cap, (std::min(f.lo, 1L) - 1) * glo + g.trunc);
    if (f.c.empty()) {
        LaurentSeries<K> z;
        z.trunc = cap;
        z.lo = cap;
        return z;
    }
    if (cap >= kExactTrunc) cap = 64 * glo;  // both exact: materialize a default window
    LaurentSeries<K> acc;
    acc.trunc = cap;
    acc.lo = cap;
    LaurentSeries<K> pw = series_pow(g, f.lo, cap);
    LaurentSeries<K> gt = truncated(g, cap);
    for (size_t i = 0; i < f.c.size(); ++i) {
        if (!exact_zero(f.c[i])) acc = acc + scalar_mul(f.c[i], pw);
        if (i + 1 < f.c.size()) pw = truncated(pw * gt, cap);
    }
    return acc;
}

/* Compositional inverse of sigma (sigma(0) = 0, unit linear coefficient) by
 * Newton iteration tau <- tau - (sigma(tau) - s) / sigma'(tau), doubling the
 * s-adic accuracy each round. Only the linear coefficient is ever inverted,
 * so this works in every characteristic.
 */
template <class K>
LaurentSeries<K> series_revert(const LaurentSeries<K>& sigma0) {
    LaurentSeries<K> sigma = normalized(sigma0);
    if (sigma.c.empty() || sigma.lo != 1)
        throw_usage("series reversion needs a series with lowest exponent exactly 1");
    if (zeroish(sigma.c[0])) throw_usage("series reversion: linear coefficient not invertible");
    long n = (sigma.trunc >= kExactTrunc) ? 33 : sigma.trunc;  // tau modulo s^n
    K c1i = ring_inv(sigma.c[0]);
    LaurentSeries<K> dsigma = derivative(sigma);
    LaurentSeries<K> id = make_series<K>(1, {sigma.c[0] * c1i});  // the series s
    LaurentSeries<K> tau = scalar_mul(c1i, id);
    long acc = 2;  // tau correct modulo s^acc
    while (acc < n) {
        long next = std::min(2 * acc, n);
        LaurentSeries<K> taun = truncated(tau, next + 1);
        taun.trunc = next + 1;  // treat current tau as exact to this window
        LaurentSeries<K> err = truncated(compose(sigma, taun) - id, next + 1);
        LaurentSeries<K> slope = truncated(compose(dsigma, taun), next + 1);
        tau = truncated(taun - err * series_inv(slope), next + 1);
        acc = next;
    }
    tau = truncated(tau, n);
    tau.trunc = n;
    return normalized(tau);
}

/* Ring glue so a LaurentSeries can itself be a coefficient ring (for the
 * equal-characteristic double field k((u))((t)): outer variable t, inner u).
 * A zero series of finite truncation is only zero at precision, never exactly
 * zero, so trimming keeps it.
 */
template <class K>
bool exact_zero(const LaurentSeries<K>& f) {
    return f.c.empty() && f.trunc >= kExactTrunc;
}
template <class K>
bool zeroish(const LaurentSeries<K>& f) {
    for (const auto& x : f.c)
        if (!zeroish(x)) return false;
    return true;
}
template <class K>
LaurentSeries<K> ring_inv(const LaurentSeries<K>& f) {
    return series_inv(f);
}
template <class K>
LaurentSeries<K> ring_mul_int(LaurentSeries<K> f, long k) {
    for (auto& x : f.c) x = ring_mul_int(x, k);
    return normalized(f);
}

template <class K>
bool eq_at_precision(const LaurentSeries<K>& a, const LaurentSeries<K>& b) {
    LaurentSeries<K> d = a - b;
    for (const auto& x : d.c)
        if (!zeroish(x)) return false;
    return true;
}

template <class K>
std::string series_str(const LaurentSeries<K>& f, const std::string& var = "t");

inline std::string coeff_str(const Rational& x) { return rat_to_string(x); }
inline std::string coeff_str(const Fp& x) { return x.str(); }
inline std::string coeff_str(const PAdic& x) { return x.str(); }
inline std::string coeff_str(double x) { return std::to_string(x); }

template <class K>
std::string series_str(const LaurentSeries<K>& f, const std::string& var) {
    std::string s;
    bool first = true;
    for (size_t i = 0; i < f.c.size(); ++i) {
        if (exact_zero(f.c[i])) continue;
        long e = f.lo + (long)i;
        if (!first) s += " + ";
        s += "(" + coeff_str(f.c[i]) + ")";
        if (e != 0) s += "*" + var + "^" + std::to_string(e);
        first = false;
    }
    if (first) s += "0";
    if (f.trunc < kExactTrunc) s += " + O(" + var + "^" + std::to_string(f.trunc) + ")";
    return s;
}

// inner series of a double field print with their own variable
template <class K>
std::string coeff_str(const LaurentSeries<K>& f) {
    return series_str(f, "u");
}

}  // namespace adelix
