#include "adelix/factor.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace adelix {

Poly<Fp> reduce_mod_p(const Poly<Rational>& f, long p) {
    Poly<Fp> r;
    r.c.reserve(f.c.size());
    for (const auto& q : f.c) {
        Int den = q.get_den();
        if (mpz_divisible_ui_p(den.get_mpz_t(), (unsigned long)p))
            throw_usage("cannot reduce mod " + std::to_string(p) + ": denominator divisible by p");
        Int num = q.get_num();
        long nv = (long)mpz_fdiv_ui(num.get_mpz_t(), (unsigned long)p);
        long dv = (long)mpz_fdiv_ui(den.get_mpz_t(), (unsigned long)p);
        r.c.push_back(Fp(p, nv) * Fp(p, dv).inv());
    }
    return poly_trim(r);
}

Poly<Rational> lift_to_q(const Poly<Fp>& f) {
    Poly<Rational> r;
    r.c.reserve(f.c.size());
    for (const auto& x : f.c) r.c.push_back(Rational(x.value()));
    return poly_trim(r);
}

namespace {

Poly<Fp> fp_x(long p) { return make_poly<Fp>({Fp(p, 0), Fp(p, 1)}); }

// x^(p^e) mod m via iterated Frobenius: start from x^p mod m, then repeatedly
// raise to the p-th power.
Poly<Fp> poly_powmod(const Poly<Fp>& base, const Int& e, const Poly<Fp>& m) {
    long p = m.lead().p();
    Poly<Fp> r = make_poly<Fp>({Fp(p, 1)});
    Poly<Fp> b = poly_mod(base, m);
    Int k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) r = poly_mod(r * b, m);
        b = poly_mod(b * b, m);
        k >>= 1;
    }
    return r;
}

Poly<Fp> frobenius_iter(const Poly<Fp>& start, long times, const Poly<Fp>& m) {
    long p = m.lead().p();
    Poly<Fp> r = start;
    for (long i = 0; i < times; ++i) r = poly_powmod(r, Int(p), m);
    return r;
}

// Equal-degree splitting of a squarefree product of irreducibles of common
// degree d (Cantor-Zassenhaus; trace map in characteristic 2). Fixed seed
// keeps runs reproducible.
void edf(const Poly<Fp>& g, long d, std::vector<Poly<Fp>>& out, std::mt19937_64& rng) {
    long p = g.lead().p();
    if (g.deg() == d) {
        out.push_back(monic(g));
        return;
    }
    Poly<Fp> one = make_poly<Fp>({Fp(p, 1)});
    while (true) {
        Poly<Fp> a;
        a.c.assign((size_t)g.deg(), Fp(p, 0));
        for (auto& x : a.c) x = Fp(p, (long)(rng() % (unsigned long)p));
        a = poly_trim(a);
        if (a.deg() < 1) continue;
        Poly<Fp> b;
        if (p == 2) {
            // trace map T(a) = a + a^2 + ... + a^(2^(d-1))
            Poly<Fp> t = poly_mod(a, g), term = t;
            for (long i = 1; i < d; ++i) {
                term = poly_mod(term * term, g);
                t = t + term;
            }
            b = t;
        } else {
            Int e = 1;
            for (long i = 0; i < d; ++i) e *= p;
            e = (e - 1) / 2;
            b = poly_powmod(a, e, g) - one;
        }
        Poly<Fp> h = poly_gcd(b, g);
        if (h.deg() > 0 && h.deg() < g.deg()) {
            edf(h, d, out, rng);
            edf(divmod(g, h).first, d, out, rng);
            return;
        }
    }
}

// Distinct-degree factorization of a squarefree monic poly; appends the
// irreducible factors to out.
void ddf(Poly<Fp> g, std::vector<Poly<Fp>>& out, std::mt19937_64& rng) {
    long p = g.lead().p();
    Poly<Fp> x = fp_x(p);
    Poly<Fp> h = poly_mod(x, g);  // will hold x^(p^d) mod g
    for (long d = 1; g.deg() > 0 && d <= g.deg() / 2; ++d) {
        h = frobenius_iter(h, 1, g);
        Poly<Fp> gd = poly_gcd(h - x, g);
        if (gd.deg() > 0) {
            edf(gd, d, out, rng);
            g = divmod(g, gd).first;
            h = poly_mod(h, g);
        }
    }
    if (g.deg() > 0) out.push_back(monic(g));
}

// p-th root of f when f'(x) = 0, i.e. f = r(x^p); over the prime field the
// coefficients themselves are fixed by Frobenius.
Poly<Fp> pth_root(const Poly<Fp>& f) {
    long p = f.lead().p();
    Poly<Fp> r;
    for (size_t i = 0; i < f.c.size(); i += (size_t)p) r.c.push_back(f.c[i]);
    return poly_trim(r);
}

bool divides(const Poly<Fp>& u, const Poly<Fp>& f) { return poly_mod(f, u).is_zero(); }

}  // namespace

std::vector<PolyFactor<Fp>> factor_fp(const Poly<Fp>& f0) {
    std::vector<PolyFactor<Fp>> res;
    if (f0.deg() < 1) return res;
    std::map<std::vector<long>, std::pair<Poly<Fp>, long>> found;  // key: coeff values
    std::mt19937_64 rng(0x5eed5eedULL);

    // strip multiplicities as we discover distinct irreducibles
    Poly<Fp> f = monic(f0);
    long scale = 1;  // collected p-th power multiplicity
    while (f.deg() >= 1) {
        Poly<Fp> fp = poly_derivative(f);
        if (fp.is_zero()) {
            f = pth_root(f);
            scale *= f0.lead().p();
            continue;
        }
        Poly<Fp> sq = divmod(f, poly_gcd(f, fp)).first;
        std::vector<Poly<Fp>> irr;
        ddf(monic(sq), irr, rng);
        for (const auto& u : irr) {
            long k = 0;
            while (f.deg() >= u.deg() && divides(u, f)) {
                f = divmod(f, u).first;
                ++k;
            }
            std::vector<long> key;
            for (const auto& cc : u.c) key.push_back(cc.value());
            auto it = found.find(key);
            if (it == found.end()) found.emplace(key, std::make_pair(u, k * scale));
            else it->second.second += k * scale;
        }
    }
    for (auto& [key, pr] : found) res.push_back({pr.first, pr.second});
    std::sort(res.begin(), res.end(), [](const auto& a, const auto& b) {
        if (a.f.deg() != b.f.deg()) return a.f.deg() < b.f.deg();
        for (long i = a.f.deg(); i >= 0; --i)
            if (a.f.c[(size_t)i].value() != b.f.c[(size_t)i].value())
                return a.f.c[(size_t)i].value() < b.f.c[(size_t)i].value();
        return false;
    });
    return res;
}

bool is_irreducible_fp(const Poly<Fp>& f) {
    long n = f.deg();
    if (n < 1) return false;
    if (n == 1) return true;
    long p = f.lead().p();
    Poly<Fp> m = monic(f);
    Poly<Fp> x = fp_x(p);
    // Rabin: x^(p^n) = x mod f, and gcd(x^(p^(n/q)) - x, f) = 1 for primes q | n
    Poly<Fp> h = frobenius_iter(poly_mod(x, m), n, m);
    if (!(h - poly_mod(x, m)).is_zero()) return false;
    for (long q = 2; q <= n; ++q) {
        if (n % q) continue;
        bool qprime = true;
        for (long r = 2; r * r <= q; ++r)
            if (q % r == 0) qprime = false;
        if (!qprime) continue;
        Poly<Fp> hq = frobenius_iter(poly_mod(x, m), n / q, m);
        if (poly_gcd(hq - x, m).deg() != 0) return false;
    }
    return true;
}

Poly<Rational> primitive_part(const Poly<Rational>& f, Rational& content) {
    if (f.is_zero()) {
        content = 0;
        return f;
    }
    Int den = 1;
    for (const auto& q : f.c) den = lcm(den, Int(q.get_den()));
    Int g = 0;
    for (const auto& q : f.c) {
        Int z = Int(q.get_num()) * (den / Int(q.get_den()));
        g = gcd(g, z);
    }
    Rational c(g, den);
    if (f.lead() < 0) c = -c;
    content = c;
    Poly<Rational> r = f;
    for (auto& q : r.c) q /= c;
    return r;
}

std::vector<Int> int_divisors(const Int& n0, size_t cap) {
    Int n = abs(n0);
    if (n == 0) throw_usage("divisors of zero requested");
    std::vector<std::pair<long, long>> pf;
    for (long p : prime_factors(n)) pf.emplace_back(p, ord_p(n, p));
    std::vector<Int> divs = {Int(1)};
    for (auto [p, e] : pf) {
        size_t base = divs.size();
        Int pk = 1;
        for (long k = 1; k <= e; ++k) {
            pk *= p;
            for (size_t i = 0; i < base; ++i) {
                divs.push_back(divs[i] * pk);
                if (divs.size() > cap)
                    throw_math("divisor enumeration exceeds cap; constant term too composite");
            }
        }
    }
    size_t m = divs.size();
    for (size_t i = 0; i < m; ++i) divs.push_back(-divs[i]);
    return divs;
}

namespace {

// Rational roots of a primitive integer polynomial, by the rational root
// theorem.
std::vector<Rational> rational_roots(const Poly<Rational>& f) {
    std::vector<Rational> roots;
    if (f.deg() < 1) return roots;
    Int a0 = f.c[0].get_num();  // primitive: integers
    Int an = f.lead().get_num();
    if (a0 == 0) {
        roots.push_back(Rational(0));
        return roots;  // caller strips and retries
    }
    std::vector<Int> nums = int_divisors(a0);
    std::vector<Int> dens = int_divisors(an);
    for (const Int& num : nums)
        for (const Int& den : dens) {
            if (den <= 0) continue;
            Rational r(num, den);
            r.canonicalize();
            if (poly_eval(f, r) == 0) {
                bool seen = false;
                for (const auto& s : roots)
                    if (s == r) seen = true;
                if (!seen) roots.push_back(r);
            }
        }
    return roots;
}

// Bounded Kronecker search for a monic rational factor of degree k of a
// primitive integer polynomial. Evaluates at k+1 small points, runs over
// divisor combinations of the values, interpolates, and tests divisibility.
bool kronecker_factor(const Poly<Rational>& f, long k, Poly<Rational>& out) {
    std::vector<Rational> xs;
    for (long i = 0; (long)xs.size() < k + 1; ++i) {
        Rational x(i % 2 == 0 ? i / 2 : -(i / 2 + 1));
        if (poly_eval(f, x) != 0) xs.push_back(x);  // roots already stripped, but be safe
    }
    std::vector<std::vector<Int>> cand;
    size_t total = 1;
    for (const auto& x : xs) {
        Int v = poly_eval(f, x).get_num();
        std::vector<Int> dv = int_divisors(v, 512);
        total *= dv.size();
        if (total > 2000000) throw_math("factor search space too large; try smaller coefficients");
        cand.push_back(std::move(dv));
    }
    std::vector<size_t> idx(xs.size(), 0);
    while (true) {
        // Lagrange interpolation through (xs[i], cand[i][idx[i]])
        Poly<Rational> g;
        for (size_t i = 0; i < xs.size(); ++i) {
            Poly<Rational> li = make_poly<Rational>({Rational(1)});
            Rational denom(1);
            for (size_t j = 0; j < xs.size(); ++j) {
                if (i == j) continue;
                li = li * make_poly<Rational>({-xs[j], Rational(1)});
                denom *= (xs[i] - xs[j]);
            }
            g = g + scalar_mul(Rational(Rational(cand[i][idx[i]]) / denom), li);
        }
        if (g.deg() == k) {
            auto [q, r] = divmod(f, g);
            if (r.is_zero()) {
                out = monic(g);
                return true;
            }
        }
        size_t pos = 0;
        while (pos < idx.size() && ++idx[pos] == cand[pos].size()) idx[pos++] = 0;
        if (pos == idx.size()) return false;
    }
}

void factor_q_rec(Poly<Rational> f, std::map<std::vector<std::string>, std::pair<Poly<Rational>, long>>& found);

void record_q(const Poly<Rational>& u, long mult,
              std::map<std::vector<std::string>, std::pair<Poly<Rational>, long>>& found) {
    std::vector<std::string> key;
    for (const auto& cc : u.c) key.push_back(rat_to_string(cc));
    auto it = found.find(key);
    if (it == found.end()) found.emplace(key, std::make_pair(u, mult));
    else it->second.second += mult;
}

void factor_q_rec(Poly<Rational> f, std::map<std::vector<std::string>, std::pair<Poly<Rational>, long>>& found) {
    f = monic(f);
    if (f.deg() < 1) return;
    if (f.deg() == 1) {
        record_q(f, 1, found);
        return;
    }
    Rational content;
    Poly<Rational> pf = primitive_part(f, content);

    // x^k factor
    size_t z = 0;
    while (z < pf.c.size() && pf.c[z] == 0) ++z;
    if (z > 0) {
        record_q(make_poly<Rational>({Rational(0), Rational(1)}), (long)z, found);
        pf.c.erase(pf.c.begin(), pf.c.begin() + (long)z);
        factor_q_rec(pf, found);
        return;
    }

    std::vector<Rational> roots = rational_roots(pf);
    if (!roots.empty()) {
        for (const auto& r : roots) {
            Poly<Rational> lin = make_poly<Rational>({-r, Rational(1)});
            long k = 0;
            while (true) {
                auto [q, rem] = divmod(pf, lin);
                if (!rem.is_zero()) break;
                pf = q;
                ++k;
            }
            record_q(lin, k, found);
        }
        factor_q_rec(pf, found);
        return;
    }
    if (pf.deg() <= 3) {  // no rational root and degree <= 3: irreducible
        record_q(monic(pf), 1, found);
        return;
    }
    // mod-p irreducibility certificate
    Rational c2;
    Poly<Rational> zpoly = primitive_part(monic(pf), c2);
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L, 41L, 43L, 47L}) {
        Int lead = zpoly.lead().get_num();
        if (mpz_divisible_ui_p(lead.get_mpz_t(), (unsigned long)p)) continue;
        Poly<Fp> fbar = reduce_mod_p(zpoly, p);
        if (fbar.deg() == zpoly.deg() && is_irreducible_fp(fbar)) {
            record_q(monic(pf), 1, found);
            return;
        }
    }
    // bounded Kronecker search for a proper factor
    for (long k = 2; k <= pf.deg() / 2; ++k) {
        Poly<Rational> g;
        if (kronecker_factor(zpoly, k, g)) {
            factor_q_rec(g, found);
            factor_q_rec(divmod(pf, g).first, found);
            return;
        }
    }
    record_q(monic(pf), 1, found);  // no factor of any degree up to deg/2: irreducible
}

}  // namespace

std::vector<PolyFactor<Rational>> factor_q(const Poly<Rational>& f) {
    std::vector<PolyFactor<Rational>> res;
    if (f.deg() < 1) return res;
    std::map<std::vector<std::string>, std::pair<Poly<Rational>, long>> found;
    // peel multiplicities first so the recursion only sees squarefree parts
    Poly<Rational> g = monic(f);
    Poly<Rational> sq = divmod(g, poly_gcd(g, poly_derivative(g))).first;
    factor_q_rec(sq, found);
    for (auto& [key, pr] : found) {
        long k = 0;
        Poly<Rational> cur = g;
        while (true) {
            auto [q, rem] = divmod(cur, pr.first);
            if (!rem.is_zero()) break;
            cur = q;
            ++k;
        }
        res.push_back({pr.first, k});
    }
    std::sort(res.begin(), res.end(), [](const auto& a, const auto& b) { return a.f.deg() < b.f.deg(); });
    return res;
}

bool is_irreducible_q(const Poly<Rational>& f) {
    if (f.deg() < 1) return false;
    auto fs = factor_q(f);
    return fs.size() == 1 && fs[0].mult == 1;
}

}  // namespace adelix
