#include "adelix/prime_field.hpp"

#include "adelix/errors.hpp"
#include "adelix/rational.hpp"

namespace adelix {

Fp::Fp(long p, long value) : p_(p) {
    if (!is_prime(p)) throw_usage("Fp: p = " + std::to_string(p) + " is not prime");
    v_ = value % p;
    if (v_ < 0) v_ += p;
}

long Fp::common_p(const Fp& a, const Fp& b) {
    if (a.p_ == 0) return b.p_;
    if (b.p_ == 0) return a.p_;
    if (a.p_ != b.p_) throw_usage("Fp: mixed characteristics " + std::to_string(a.p_) + " and " + std::to_string(b.p_));
    return a.p_;
}

Fp Fp::operator+(const Fp& o) const {
    long p = common_p(*this, o);
    if (p == 0) return Fp();
    return Fp(p, v_ + o.v_);
}

Fp Fp::operator-(const Fp& o) const {
    long p = common_p(*this, o);
    if (p == 0) return Fp();
    return Fp(p, v_ - o.v_);
}

Fp Fp::operator-() const {
    if (p_ == 0) return Fp();
    return Fp(p_, -v_);
}

Fp Fp::operator*(const Fp& o) const {
    long p = common_p(*this, o);
    if (p == 0 || v_ == 0 || o.v_ == 0) return p == 0 ? Fp() : Fp(p, 0);
    return Fp(p, (long)((__int128)v_ * o.v_ % p));
}

Fp Fp::inv() const {
    if (v_ == 0) throw_usage("Fp: inverse of zero");
    // extended euclid on (v, p)
    long a = v_, m = p_, x0 = 1, x1 = 0;
    while (m != 0) {
        long q = a / m;
        long t = a - q * m; a = m; m = t;
        t = x0 - q * x1; x0 = x1; x1 = t;
    }
    return Fp(p_, x0);
}

Fp Fp::mul_int(long k) const {
    if (p_ == 0) return Fp();
    return Fp(p_, (long)((__int128)v_ * (k % p_) % p_));
}

Fp Fp::pow(long e) const {
    if (p_ == 0) {
        if (e <= 0) throw_usage("Fp: 0^e with e <= 0");
        return Fp();
    }
    Fp base = *this;
    if (e < 0) { base = base.inv(); e = -e; }
    Fp r(p_, 1);
    while (e > 0) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

bool Fp::operator==(const Fp& o) const {
    if (p_ == 0 || o.p_ == 0) return v_ == 0 && o.v_ == 0;  // context-free zero compares by value
    return common_p(*this, o) && v_ == o.v_;
}

std::string Fp::str() const { return std::to_string(v_); }

}  // namespace adelix
