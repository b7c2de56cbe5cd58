#pragma once
#include <memory>
#include <string>
#include <vector>

#include "adelix/laurent.hpp"

namespace adelix {

/* Dense univariate polynomial over a field-like K (Rational, Fp, PAdic,
 * ModPoly). c[i] is the coefficient of x^i; the zero polynomial has empty c
 * and degree -1.
 */
template <class K>
struct Poly {
    std::vector<K> c;

    long deg() const { return (long)c.size() - 1; }
    bool is_zero() const { return c.empty(); }
    K lead() const {
        if (c.empty()) throw_usage("leading coefficient of zero polynomial");
        return c.back();
    }
};

template <class K>
Poly<K> poly_trim(Poly<K> f) {
    while (!f.c.empty() && exact_zero(f.c.back())) f.c.pop_back();
    return f;
}

template <class K>
Poly<K> make_poly(std::vector<K> coeffs) {
    Poly<K> f;
    f.c = std::move(coeffs);
    return poly_trim(f);
}

template <class K>
Poly<K> operator+(const Poly<K>& a, const Poly<K>& b) {
    Poly<K> r;
    r.c.assign(std::max(a.c.size(), b.c.size()), K{});
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] = r.c[i] + b.c[i];
    return poly_trim(r);
}

template <class K>
Poly<K> negated(Poly<K> f) {
    for (auto& x : f.c) x = -x;
    return f;
}

template <class K>
Poly<K> operator-(const Poly<K>& a, const Poly<K>& b) {
    return a + negated(b);
}

template <class K>
Poly<K> operator*(const Poly<K>& a, const Poly<K>& b) {
    Poly<K> r;
    if (a.c.empty() || b.c.empty()) return r;
    r.c.assign(a.c.size() + b.c.size() - 1, K{});
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (exact_zero(a.c[i])) continue;
        for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
    }
    return poly_trim(r);
}

template <class K>
Poly<K> scalar_mul(const K& s, Poly<K> f) {
    for (auto& x : f.c) x = s * x;
    return poly_trim(f);
}

template <class K>
Poly<K> poly_shift(Poly<K> f, long k) {  // multiply by x^k
    if (f.c.empty()) return f;
    f.c.insert(f.c.begin(), (size_t)k, K{});
    return f;
}

// Euclidean division a = q*b + r with deg r < deg b. Requires invertible
// leading coefficient of b.
template <class K>
std::pair<Poly<K>, Poly<K>> divmod(const Poly<K>& a, const Poly<K>& b) {
    if (b.is_zero()) throw_usage("polynomial division by zero");
    K linv = ring_inv(b.lead());
    Poly<K> q, r = a;
    if (r.deg() >= b.deg()) q.c.assign((size_t)(r.deg() - b.deg() + 1), K{});
    while (r.deg() >= b.deg()) {
        long d = r.deg() - b.deg();
        K f = r.lead() * linv;
        q.c[(size_t)d] = f;
        for (size_t i = 0; i < b.c.size(); ++i)
            r.c[(size_t)d + i] = r.c[(size_t)d + i] - f * b.c[i];
        r.c.pop_back();
        r = poly_trim(r);
    }
    return {poly_trim(q), r};
}

template <class K>
Poly<K> poly_mod(const Poly<K>& a, const Poly<K>& b) {
    return divmod(a, b).second;
}

template <class K>
Poly<K> monic(const Poly<K>& f) {
    if (f.is_zero()) return f;
    return scalar_mul(ring_inv(f.lead()), f);
}

template <class K>
Poly<K> poly_gcd(Poly<K> a, Poly<K> b) {
    while (!b.is_zero()) {
        Poly<K> r = poly_mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

template <class K>
Poly<K> poly_derivative(const Poly<K>& f) {
    Poly<K> r;
    for (size_t i = 1; i < f.c.size(); ++i) r.c.push_back(ring_mul_int(f.c[i], (long)i));
    return poly_trim(r);
}

template <class K>
K poly_eval(const Poly<K>& f, const K& x) {
    K acc{};
    for (size_t i = f.c.size(); i-- > 0;) acc = acc * x + f.c[i];
    return acc;
}

// Resultant via the Euclidean remainder sequence; fine at the small degrees
// used here.
template <class K>
K resultant(Poly<K> a, Poly<K> b) {
    if (a.is_zero() || b.is_zero()) return K{};
    K one = ring_inv(a.lead()) * a.lead();
    K sign = one, acc = one;
    while (b.deg() > 0) {
        Poly<K> r = poly_mod(a, b);
        if (r.is_zero()) return K{};
        // res(a,b) = (-1)^{deg a * deg b} lead(b)^{deg a - deg r} res(b,r)
        if ((a.deg() & 1) && (b.deg() & 1)) sign = -sign;
        K lb = b.lead(), pw = one;
        for (long i = 0; i < a.deg() - r.deg(); ++i) pw = pw * lb;
        acc = acc * pw;
        a = std::move(b);
        b = std::move(r);
    }
    // deg b == 0: res(a, c) = c^{deg a}
    K cb = b.c[0], pw = one;
    for (long i = 0; i < a.deg(); ++i) pw = pw * cb;
    return sign * acc * pw;
}

template <class K>
K poly_discriminant(const Poly<K>& f) {
    if (f.deg() < 1) throw_usage("discriminant needs degree >= 1");
    K r = resultant(f, poly_derivative(f));
    K li = ring_inv(f.lead());
    K d = r * li;
    // disc = (-1)^{n(n-1)/2} res(f, f') / lead(f)
    long n = f.deg();
    if (((n * (n - 1)) / 2) & 1) d = -d;
    return d;
}

/* The quotient ring K[x]/(m) for monic m, used as the residue field of a
 * closed point of degree d = deg m. The modulus is shared by handle; a
 * default-constructed ModPoly is the context-free exact zero, mirroring the
 * Fp and PAdic conventions so that a ModPoly can sit inside LaurentSeries.
 */
template <class K>
struct ModCtx {
    Poly<K> m;  // monic modulus
    long deg() const { return m.deg(); }
};

template <class K>
class ModPoly {
  public:
    using Ctx = std::shared_ptr<const ModCtx<K>>;

    ModPoly() = default;

    ModPoly(Ctx ctx, Poly<K> value) : ctx_(std::move(ctx)) {
        if (!ctx_ || ctx_->deg() < 1) throw_usage("ModPoly needs a modulus of degree >= 1");
        v_ = poly_mod(value, ctx_->m);
    }

    static ModPoly constant(const Ctx& ctx, const K& a) {
        return ModPoly(ctx, make_poly<K>({a}));
    }
    static ModPoly gen(const Ctx& ctx) {  // the class of x
        return ModPoly(ctx, make_poly<K>({K{}, unit_of(ctx)}));
    }

    bool is_ctx_free_zero() const { return !ctx_; }
    bool is_exact_zero() const { return v_.is_zero(); }
    const Poly<K>& value() const { return v_; }
    const Ctx& ctx() const { return ctx_; }

    ModPoly operator+(const ModPoly& o) const {
        Ctx c = common(ctx_, o.ctx_);
        if (!c) return ModPoly{};
        return ModPoly(c, v_ + o.v_);
    }
    ModPoly operator-() const {
        ModPoly r = *this;
        r.v_ = negated(r.v_);
        return r;
    }
    ModPoly operator-(const ModPoly& o) const { return *this + (-o); }
    ModPoly operator*(const ModPoly& o) const {
        Ctx c = common(ctx_, o.ctx_);
        if (!c) return ModPoly{};
        if (v_.is_zero() || o.v_.is_zero()) return ModPoly(c, Poly<K>{});
        return ModPoly(c, v_ * o.v_);
    }
    ModPoly mul_int(long k) const {
        ModPoly r = *this;
        for (auto& x : r.v_.c) x = ring_mul_int(x, k);
        r.v_ = poly_trim(r.v_);
        return r;
    }

    // Inverse by solving M_a x = 1 where M_a is the multiplication matrix;
    // works whenever the element is invertible in K[x]/(m), including
    // p-divisible units of unramified p-adic extensions.
    ModPoly inv() const;

    // Trace of the multiplication-by-this endomorphism over K.
    K trace() const;

    std::string str() const { return poly_str(v_, "x"); }

  private:
    static Ctx common(const Ctx& a, const Ctx& b) {
        if (a && b && a != b) {
            // distinct handles with identical moduli are fine
            if (a->m.c.size() != b->m.c.size()) throw_usage("mixed ModPoly moduli");
        }
        return a ? a : b;
    }
    static K unit_of(const Ctx& ctx) { return ring_inv(ctx->m.lead()) * ctx->m.lead(); }

    Ctx ctx_;
    Poly<K> v_;
};

// Human-form polynomial printing ("t^2 - t + 3"), nicer than the coefficient
// dump poly_str gives. Used in flag keys and reports.
std::string poly_pretty(const Poly<Rational>& f, const std::string& var = "t");
std::string poly_pretty(const Poly<Fp>& f, const std::string& var = "t");

template <class K>
std::string poly_str(const Poly<K>& f, const std::string& var) {
    std::string s;
    bool first = true;
    for (size_t i = 0; i < f.c.size(); ++i) {
        if (exact_zero(f.c[i])) continue;
        if (!first) s += " + ";
        s += "(" + coeff_str(f.c[i]) + ")";
        if (i) s += "*" + var + "^" + std::to_string(i);
        first = false;
    }
    if (first) s = "0";
    return s;
}

template <class K>
ModPoly<K> ModPoly<K>::inv() const {
    if (!ctx_ || v_.is_zero()) throw_usage("inverse of zero in quotient ring");
    long d = ctx_->deg();
    // columns of the multiplication matrix: this * x^j mod m
    std::vector<std::vector<K>> col((size_t)d);
    Poly<K> cur = v_;
    for (long j = 0; j < d; ++j) {
        col[(size_t)j].assign((size_t)d, K{});
        for (size_t i = 0; i < cur.c.size(); ++i) col[(size_t)j][i] = cur.c[i];
        cur = poly_mod(poly_shift(cur, 1), ctx_->m);
    }
    // solve sum_j x_j col_j = e_0 by Gaussian elimination on [A | e0]
    std::vector<std::vector<K>> a((size_t)d, std::vector<K>((size_t)(d + 1), K{}));
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j) a[(size_t)i][(size_t)j] = col[(size_t)j][(size_t)i];
    a[0][(size_t)d] = unit_of(ctx_);
    long row = 0;
    std::vector<long> pivot_col;
    for (long cidx = 0; cidx < d && row < d; ++cidx) {
        long pr = -1;
        for (long r = row; r < d; ++r)
            if (!zeroish(a[(size_t)r][(size_t)cidx])) {
                pr = r;
                break;
            }
        if (pr < 0) continue;
        std::swap(a[(size_t)row], a[(size_t)pr]);
        K pi = ring_inv(a[(size_t)row][(size_t)cidx]);
        for (long j = cidx; j <= d; ++j) a[(size_t)row][(size_t)j] = pi * a[(size_t)row][(size_t)j];
        for (long r = 0; r < d; ++r) {
            if (r == row) continue;
            K f = a[(size_t)r][(size_t)cidx];
            if (exact_zero(f)) continue;
            for (long j = cidx; j <= d; ++j)
                a[(size_t)r][(size_t)j] = a[(size_t)r][(size_t)j] - f * a[(size_t)row][(size_t)j];
        }
        pivot_col.push_back(cidx);
        ++row;
    }
    if (row < d) throw_usage("element is not invertible in quotient ring");
    std::vector<K> x((size_t)d, K{});
    for (long r = 0; r < d; ++r) x[(size_t)pivot_col[(size_t)r]] = a[(size_t)r][(size_t)d];
    return ModPoly(ctx_, make_poly<K>(std::move(x)));
}

template <class K>
K ModPoly<K>::trace() const {
    if (!ctx_ || v_.is_zero()) return K{};
    long d = ctx_->deg();
    K tr{};
    Poly<K> cur = v_;
    for (long j = 0; j < d; ++j) {
        if ((long)cur.c.size() > j) tr = tr + cur.c[(size_t)j];
        cur = poly_mod(poly_shift(cur, 1), ctx_->m);
    }
    return tr;
}

// LaurentSeries glue for ModPoly coefficients
template <class K>
bool exact_zero(const ModPoly<K>& x) {
    return x.is_exact_zero();
}
template <class K>
bool zeroish(const ModPoly<K>& x) {
    if (x.is_exact_zero()) return true;
    for (const auto& cc : x.value().c)
        if (!zeroish(cc)) return false;
    return true;
}
template <class K>
ModPoly<K> ring_inv(const ModPoly<K>& x) {
    return x.inv();
}
template <class K>
ModPoly<K> ring_mul_int(const ModPoly<K>& x, long k) {
    return x.mul_int(k);
}
template <class K>
std::string coeff_str(const ModPoly<K>& x) {
    return x.str();
}

}  // namespace adelix
