#include "adelix/rational.hpp"

#include "adelix/errors.hpp"

namespace adelix {

bool is_prime(long p) {
    if (p < 2) return false;
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

long ord_p(const Int& n, long p) {
    if (n == 0) throw_usage("ord_p of zero");
    if (p < 2) throw_usage("ord_p: p must be >= 2");
    Int m = abs(n);
    long v = 0;
    Int q, r;
    for (;;) {
        mpz_fdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t(), (unsigned long)p);
        if (r != 0) break;
        m = q;
        ++v;
    }
    return v;
}

long ord_p(const Rational& x, long p) {
    if (x == 0) throw_usage("ord_p of zero");
    return ord_p(x.get_num(), p) - ord_p(x.get_den(), p);
}

Rational mod1(const Rational& x) {
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    Rational r = x - Rational(fl);
    r.canonicalize();
    return r;
}

Rational principal_part_at(const Rational& x, long p) {
    if (x == 0) return Rational(0);
    long v = ord_p(x, p);
    if (v >= 0) return Rational(0);
    // x = num / (d0 * p^k) with p coprime to num and d0 (all p-power sits in
    // the denominator since v < 0). The fractional p-tail is then
    // (num * d0^{-1} mod p^k) / p^k, a rational in [0,1).
    long k = -v;
    Int pk = pow_int(p, k);
    Int d0 = x.get_den() / pk;
    Int inv = mod_inverse(d0, pk);
    Int c = (x.get_num() % pk) * inv % pk;
    if (c < 0) c += pk;
    Rational r(c, pk);
    r.canonicalize();
    return r;
}

Int mod_inverse(const Int& a, const Int& m) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw_usage("mod_inverse: not invertible");
    return r;
}

Int pow_int(long base, long exp) {
    if (exp < 0) throw_usage("pow_int: negative exponent");
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), (unsigned long)std::abs(base), (unsigned long)exp);
    if (base < 0 && (exp & 1)) r = -r;
    return r;
}

std::vector<long> prime_factors(const Int& n) {
    std::vector<long> out;
    Int m = abs(n);
    if (m <= 1) return out;
    for (long d = 2; Int(d) * d <= m; ++d) {
        if (mpz_divisible_ui_p(m.get_mpz_t(), (unsigned long)d)) {
            out.push_back(d);
            while (mpz_divisible_ui_p(m.get_mpz_t(), (unsigned long)d)) m /= d;
        }
    }
    if (m > 1) {
        if (!m.fits_slong_p()) throw_usage("prime_factors: factor too large for desk scale");
        out.push_back(m.get_si());
    }
    return out;
}

std::string rat_to_string(const Rational& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Rational rat_from_string(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0) throw_usage("bad rational literal: '" + s + "'");
    r.canonicalize();
    if (r.get_den() == 0) throw_usage("zero denominator in rational literal");
    return r;
}

}  // namespace adelix
