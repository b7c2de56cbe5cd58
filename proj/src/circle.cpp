#include "adelix/circle.hpp"

#include <cmath>
#include <sstream>

namespace adelix {

static double wrap01(double x) {
    double y = x - std::floor(x);
    if (y >= 1.0) y = 0.0;  // guard against floor rounding at the boundary
    return y;
}

CircleValue CircleValue::from_exact(const Rational& r) {
    CircleValue v;
    v.exact = mod1(r);
    v.approx = wrap01(v.exact->get_d());
    return v;
}

CircleValue CircleValue::from_approx(double x) {
    CircleValue v;
    v.approx = wrap01(x);
    return v;
}

CircleValue CircleValue::operator+(const CircleValue& o) const {
    if (exact && o.exact) return from_exact(*exact + *o.exact);
    return from_approx(approx + o.approx);
}

CircleValue CircleValue::operator-() const {
    if (exact) return from_exact(-*exact);
    return from_approx(-approx);
}

double CircleValue::dist_to_zero() const {
    if (exact) {
        double x = wrap01(exact->get_d());
        return std::min(x, 1.0 - x);
    }
    double x = wrap01(approx);
    return std::min(x, 1.0 - x);
}

bool CircleValue::is_zero(double tol) const {
    if (exact) return *exact == 0;
    return dist_to_zero() < tol;
}

std::string CircleValue::str() const {
    if (exact) return rat_to_string(*exact) + " (mod 1)";
    std::ostringstream os;
    os.precision(15);
    os << approx << " (mod 1, approx)";
    return os.str();
}

double circle_dist(const CircleValue& a, const CircleValue& b) {
    if (a.exact && b.exact) {
        double x = wrap01(Rational(*a.exact - *b.exact).get_d());
        return std::min(x, 1.0 - x);
    }
    double x = wrap01(a.approx - b.approx);
    return std::min(x, 1.0 - x);
}

CircleValue lambda_p(const PAdic& x) {
    if (x.is_exact_zero()) return CircleValue::zero();
    return CircleValue::from_exact(x.principal_part());
}

CircleValue lambda_p_rational(const Rational& x, long p) {
    return CircleValue::from_exact(principal_part_at(x, p));
}

CircleValue lambda_inf_exact(const Rational& x) { return CircleValue::from_exact(-x); }

CircleValue lambda_inf(double x) { return CircleValue::from_approx(-x); }

}  // namespace adelix
