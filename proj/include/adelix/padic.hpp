#pragma once
#include <limits>
#include <string>
#include <vector>

#include "adelix/rational.hpp"

namespace adelix {

inline constexpr long kInfPrec = std::numeric_limits<long>::max() / 4;

/* p-adic number with interval-style precision.
 *
 * Three observable states:
 *   nonzero           p^val * (d0 + d1 p + ...), d0 != 0, known to m = digits.size()
 *                     relative digits, i.e. modulo p^{val+m};
 *   zero-at-precision O(p^val): indistinguishable from 0 below that bound;
 *   exact zero        the default-constructed value, context-free (p may be 0),
 *                     so generic series code can pad without a field handle.
 *
 * Precision propagation is the standard interval contract: addition keeps the
 * minimum absolute precision, multiplication the minimum relative precision.
 */
class PAdic {
public:
    PAdic() = default;  // exact zero

    static PAdic zero_at(long p, long abs_prec);
    static PAdic from_rational(const Rational& r, long p, int digits);
    static PAdic from_unit(long p, long val, const Int& unit_residue, long rel_digits);

    long p() const { return p_; }
    bool is_exact_zero() const { return digits_.empty() && val_ >= kInfPrec; }
    bool is_zero_at_precision() const { return digits_.empty(); }  // either zero flavor
    // valuation of a nonzero element; usage error on zero forms
    long val() const;
    long abs_prec() const { return digits_.empty() ? val_ : val_ + (long)digits_.size(); }
    long rel_prec() const { return digits_.empty() ? 0 : (long)digits_.size(); }
    const std::vector<int32_t>& digits() const { return digits_; }

    PAdic operator+(const PAdic& o) const;
    PAdic operator-(const PAdic& o) const;
    PAdic operator-() const;
    PAdic operator*(const PAdic& o) const;
    PAdic inv() const;  // usage error on zero forms
    PAdic mul_int(long k) const;
    PAdic mul_rat(const Rational& r) const;
    // Truncate to absolute precision min(abs_prec, n).
    PAdic truncate_abs(long n) const;

    bool eq_at_precision(const PAdic& o) const;  // difference is a zero form
    bool operator==(const PAdic& o) const { return eq_at_precision(o); }

    // Unit part as an integer residue mod p^{rel_prec}, nonzero only.
    Int unit_value() const;
    // A rational representative of the stored window (exact for the digits kept).
    Rational representative() const;
    // Fractional tail sum_{i<0} d_i p^i in [0,1); needs abs_prec >= 0 (else precision error).
    Rational principal_part() const;

    std::string str() const;

private:
    long p_ = 0;
    long val_ = kInfPrec;            // zero forms: O(p^val); nonzero: valuation
    std::vector<int32_t> digits_;    // little-endian unit digits, digits_[0] != 0
    static long require_common_p(const PAdic& a, const PAdic& b);
};

}  // namespace adelix
