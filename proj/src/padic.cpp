#include "adelix/padic.hpp"

#include <algorithm>

#include "adelix/errors.hpp"

namespace adelix {

static void check_p(long p) {
    if (!is_prime(p)) throw_usage("PAdic: p = " + std::to_string(p) + " is not prime");
}

PAdic PAdic::zero_at(long p, long abs_prec) {
    check_p(p);
    PAdic z;
    z.p_ = p;
    z.val_ = std::min(abs_prec, kInfPrec);
    return z;
}

PAdic PAdic::from_unit(long p, long val, const Int& unit_residue, long rel_digits) {
    check_p(p);
    if (rel_digits <= 0) return zero_at(p, val);
    Int pm = pow_int(p, rel_digits);
    Int u = unit_residue % pm;
    if (u < 0) u += pm;
    if (u == 0) return zero_at(p, val + rel_digits);
    long s = ord_p(u, p);  // < rel_digits since u != 0 mod p^rel
    // knew the value mod p^{val+rel}; stripping p^s leaves rel - s digits
    PAdic r;
    r.p_ = p;
    r.val_ = val + s;
    Int unit = u / pow_int(p, s);
    long m = rel_digits - s;
    r.digits_.reserve(m);
    Int q, rem;
    for (long i = 0; i < m; ++i) {
        mpz_fdiv_qr_ui(q.get_mpz_t(), rem.get_mpz_t(), unit.get_mpz_t(), (unsigned long)p);
        r.digits_.push_back((int32_t)rem.get_si());
        unit = q;
    }
    return r;
}

PAdic PAdic::from_rational(const Rational& r, long p, int digits) {
    check_p(p);
    if (digits < 1) throw_usage("PAdic: need at least one digit");
    if (r == 0) return PAdic();  // exact zero embeds exactly
    long vn = ord_p(r.get_num(), p);
    long vd = ord_p(r.get_den(), p);
    Int pm = pow_int(p, digits);
    Int num = r.get_num() / pow_int(p, vn);
    Int den = r.get_den() / pow_int(p, vd);
    Int unit = (num % pm) * mod_inverse(den, pm) % pm;
    return from_unit(p, vn - vd, unit, digits);
}

long PAdic::val() const {
    if (digits_.empty()) throw_usage("PAdic: valuation of a zero form");
    return val_;
}

long PAdic::require_common_p(const PAdic& a, const PAdic& b) {
    if (a.p_ == 0) return b.p_;
    if (b.p_ == 0) return a.p_;
    if (a.p_ != b.p_) throw_usage("PAdic: mixed primes " + std::to_string(a.p_) + " and " + std::to_string(b.p_));
    return a.p_;
}

Int PAdic::unit_value() const {
    Int u = 0;
    for (size_t i = digits_.size(); i-- > 0;) u = u * p_ + digits_[i];
    return u;
}

PAdic PAdic::operator+(const PAdic& o) const {
    long p = require_common_p(*this, o);
    if (p == 0) return PAdic();
    if (is_exact_zero()) return o;
    if (o.is_exact_zero()) return *this;
    long absN = std::min(abs_prec(), o.abs_prec());
    if (digits_.empty() && o.digits_.empty()) return zero_at(p, absN);
    long vmin = kInfPrec;
    if (!digits_.empty()) vmin = std::min(vmin, val_);
    if (!o.digits_.empty()) vmin = std::min(vmin, o.val_);
    long rel = absN - vmin;
    if (rel <= 0) return zero_at(p, absN);
    Int pm = pow_int(p, rel);
    Int s = 0;
    if (!digits_.empty()) s += unit_value() * pow_int(p, val_ - vmin);
    if (!o.digits_.empty()) s += o.unit_value() * pow_int(p, o.val_ - vmin);
    s %= pm;
    return from_unit(p, vmin, s, rel);
}

PAdic PAdic::operator-() const {
    if (digits_.empty()) return *this;
    Int pm = pow_int(p_, (long)digits_.size());
    return from_unit(p_, val_, pm - unit_value(), (long)digits_.size());
}

PAdic PAdic::operator-(const PAdic& o) const { return *this + (-o); }

PAdic PAdic::operator*(const PAdic& o) const {
    long p = require_common_p(*this, o);
    if (p == 0) return PAdic();
    if (is_exact_zero() || o.is_exact_zero()) return PAdic();
    if (digits_.empty() || o.digits_.empty()) {
        // O(p^a) * (p^b unit) = O(p^{a+b}); O(p^a) * O(p^b) = O(p^{a+b})
        long bound = std::min(val_, kInfPrec) + std::min(o.val_, kInfPrec);
        return zero_at(p, std::min(bound, kInfPrec));
    }
    long m = std::min(rel_prec(), o.rel_prec());
    Int pm = pow_int(p, m);
    Int u = unit_value() % pm * (o.unit_value() % pm) % pm;
    return from_unit(p, val_ + o.val_, u, m);
}

PAdic PAdic::inv() const {
    if (digits_.empty()) throw_usage("PAdic: inversion of a zero form (zero at precision)");
    long m = rel_prec();
    Int pm = pow_int(p_, m);
    return from_unit(p_, -val_, mod_inverse(unit_value(), pm), m);
}

PAdic PAdic::mul_int(long k) const {
    if (digits_.empty()) {
        if (k == 0) return PAdic();
        if (is_exact_zero() || p_ == 0) return *this;
        return zero_at(p_, val_ + ord_p(Int(k), p_));
    }
    if (k == 0) return PAdic();
    long vk = ord_p(Int(k), p_);
    Int pm = pow_int(p_, rel_prec());
    Int u = unit_value() * (Int(k) / pow_int(p_, vk)) % pm;
    return from_unit(p_, val_ + vk, u, rel_prec());
}

PAdic PAdic::mul_rat(const Rational& r) const {
    if (r == 0) return PAdic();
    if (is_exact_zero() || p_ == 0) return *this;
    long vr = ord_p(r, p_);
    if (digits_.empty()) return zero_at(p_, val_ + vr);
    long m = rel_prec();
    Int pm = pow_int(p_, m);
    long vn = ord_p(r.get_num(), p_), vd = ord_p(r.get_den(), p_);
    Int num = r.get_num() / pow_int(p_, vn);
    Int den = r.get_den() / pow_int(p_, vd);
    Int u = unit_value() * (num % pm) % pm * mod_inverse(den, pm) % pm;
    return from_unit(p_, val_ + vr, u, m);
}

PAdic PAdic::truncate_abs(long n) const {
    if (digits_.empty()) return p_ == 0 ? *this : zero_at(p_, std::min(val_, n));
    if (abs_prec() <= n) return *this;
    long rel = n - val_;
    if (rel <= 0) return zero_at(p_, n);
    PAdic r = *this;
    r.digits_.resize((size_t)rel);
    return r;  // digits_[0] unchanged, still nonzero
}

bool PAdic::eq_at_precision(const PAdic& o) const { return (*this - o).is_zero_at_precision(); }

Rational PAdic::representative() const {
    if (digits_.empty()) return Rational(0);
    Rational r(unit_value());
    if (val_ >= 0) return r * Rational(pow_int(p_, val_));
    return r / Rational(pow_int(p_, -val_));
}

Rational PAdic::principal_part() const {
    if (digits_.empty()) {
        if (is_exact_zero()) return Rational(0);
        if (val_ >= 0) return Rational(0);
        throw_precision("principal part of O(p^" + std::to_string(val_) + ") is undetermined",
                        "need absolute p-adic precision >= 0");
    }
    if (val_ >= 0) return Rational(0);
    if (abs_prec() < 0)
        throw_precision("principal part not fully determined at precision O(p^" + std::to_string(abs_prec()) + ")",
                        "need absolute p-adic precision >= 0, have " + std::to_string(abs_prec()));
    Rational s(0);
    for (long i = 0; i < (long)digits_.size() && val_ + i < 0; ++i)
        s += Rational(digits_[(size_t)i]) / Rational(pow_int(p_, -(val_ + i)));
    s.canonicalize();
    return s;
}

std::string PAdic::str() const {
    if (is_exact_zero()) return "0";
    if (digits_.empty()) return "O(" + std::to_string(p_) + "^" + std::to_string(val_) + ")";
    std::string s;
    bool first = true;
    for (size_t i = 0; i < digits_.size(); ++i) {
        if (digits_[i] == 0) continue;
        long e = val_ + (long)i;
        if (!first) s += " + ";
        s += std::to_string(digits_[i]);
        if (e != 0) s += "*" + std::to_string(p_) + "^" + std::to_string(e);
        first = false;
    }
    s += " + O(" + std::to_string(p_) + "^" + std::to_string(abs_prec()) + ")";
    return s;
}

}  // namespace adelix
