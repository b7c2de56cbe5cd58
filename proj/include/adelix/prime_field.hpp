#pragma once
#include <cstdint>
#include <string>

namespace adelix {

/* Element of F_p with p carried per value (desk-scale p, fits in long).
 * A default-constructed Fp is the context-free exact zero: it behaves as the
 * zero of whatever F_p it meets, which lets generic series code pad with
 * zeros without threading a field handle everywhere.
 */
class Fp {
public:
    Fp() = default;                    // context-free zero
    Fp(long p, long value);            // validates p prime, reduces value mod p

    long p() const { return p_; }
    long value() const { return v_; }
    bool is_zero() const { return v_ == 0; }
    bool has_context() const { return p_ != 0; }

    Fp operator+(const Fp& o) const;
    Fp operator-(const Fp& o) const;
    Fp operator-() const;
    Fp operator*(const Fp& o) const;
    Fp inv() const;                    // usage error on zero
    Fp mul_int(long k) const;
    Fp pow(long e) const;              // e may be negative for nonzero elements

    bool operator==(const Fp& o) const;
    bool operator!=(const Fp& o) const { return !(*this == o); }

    std::string str() const;

private:
    long p_ = 0;
    long v_ = 0;
    static long common_p(const Fp& a, const Fp& b);
};

}  // namespace adelix
