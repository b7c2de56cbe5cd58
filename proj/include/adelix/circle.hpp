#pragma once
#include <optional>
#include <string>

#include "adelix/padic.hpp"
#include "adelix/rational.hpp"

namespace adelix {

/* A value in R/Z. Values produced by p-adic principal parts are exact
 * rationals in [0,1); archimedean contributions are floating point. Sums
 * stay exact as long as every summand is exact and degrade to the float
 * representative otherwise (the float track is always maintained).
 */
struct CircleValue {
    std::optional<Rational> exact;  // reduced representative in [0,1) when known
    double approx = 0.0;            // representative in [0,1)

    static CircleValue from_exact(const Rational& r);
    static CircleValue from_approx(double x);
    static CircleValue zero() { return from_exact(Rational(0)); }

    CircleValue operator+(const CircleValue& o) const;
    CircleValue operator-() const;
    CircleValue operator-(const CircleValue& o) const { return *this + (-o); }

    bool is_exact() const { return exact.has_value(); }
    // distance to the nearest integer, i.e. to 0 in R/Z
    double dist_to_zero() const;
    bool is_zero(double tol) const;
    std::string str() const;
};

double circle_dist(const CircleValue& a, const CircleValue& b);

// lambda_p: the local fractional-part map Q_p -> R/Z, x |-> principal part of
// x mod 1. Exact on rationals; on interval p-adics it needs the digits below
// p^0 to be determined and raises a precision error otherwise.
CircleValue lambda_p(const PAdic& x);
CircleValue lambda_p_rational(const Rational& x, long p);

// lambda_inf: R -> R/Z, x |-> -x mod 1 (sign flipped so that the product
// formula over all places sums to zero).
CircleValue lambda_inf_exact(const Rational& x);
CircleValue lambda_inf(double x);

}  // namespace adelix
