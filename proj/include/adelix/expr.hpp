#pragma once
#include <memory>
#include <string>
#include <vector>

#include "adelix/curve.hpp"
#include "adelix/rational.hpp"

namespace adelix {

/* Concrete syntax for differentials and divisors, always in the global
 * coordinate t: "dt/(2*t)", "(3/t+5+t) dt", "3*inf - 1*(t) + 2*(t^2+1)".
 * Precedence is ^ above unary minus above mul/div above add/sub, all left
 * associative;
 * ^ takes a literal integer exponent. Parse errors carry byte offsets.
 */
enum class ExprKind { int_lit, rat_lit, var_t, neg, add, sub, mul, div, pow, diff };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    ExprKind kind = ExprKind::int_lit;
    Rational value;  // int_lit / rat_lit payload
    ExprPtr lhs, rhs;  // operands; unary nodes use lhs only; a pow node keeps
                       // its folded exponent as an int_lit in rhs
};

ExprPtr parse_expr(const std::string& src);

// Minimal-parenthesis rendering. parse_expr(render(e)) rebuilds e node for
// node whenever e came out of parse_expr (the round-trip property).
std::string render(const ExprPtr& e);
bool expr_equal(const ExprPtr& a, const ExprPtr& b);

// Exact evaluation in Q(t). eval_expr rejects differential markers outright;
// eval_form expects the whole expression to equal f(t) dt with exactly one
// marker and returns f.
RationalFunction<Rational> eval_expr(const ExprPtr& e);
RationalFunction<Rational> eval_form(const ExprPtr& e);

// parse + eval in one step
RationalFunction<Rational> parse_function(const std::string& src);
RationalFunction<Rational> parse_form(const std::string& src);

/* Divisor sums. The grammar covers the union vocabulary
 *   coeff * place,  place in { (poly), inf, V<p>, E<rational>, Einf }
 * and each consumer validates the tokens it understands (curve places,
 * Spec Z places, surface curves) plus coefficient integrality.
 */
struct DivisorTerm {
    enum class Place { poly, inf, vert, horiz, horiz_inf };
    Place place = Place::poly;
    Rational coeff;
    Poly<Rational> f;  // poly place payload (may be constant: a Spec Z prime)
    long p = 0;        // V<p>
    Rational a;        // E<a>
};

struct DivisorSpec {
    std::vector<DivisorTerm> terms;
};

DivisorSpec parse_divisor(const std::string& src);

}  // namespace adelix
