#pragma once
#include "adelix/circle.hpp"
#include "adelix/laurent.hpp"
#include "adelix/precision.hpp"

namespace adelix {

/* Local fields of the four flavors that occur on an arithmetic surface, all
 * modeled as truncated Laurent series in the last uniformizer t:
 *
 *   eq-char double field   k((u))((t))   outer t, inner u, k = F_p
 *   mixed double field     Q_p{{t}}      p-adic coefficients, p deeper than t
 *   curve-direction field  Q_p((t))      p-adic coefficients, t deeper than p
 *   archimedean field      R((t))
 *
 * The mixed field carries the sign flip in its residue; the other three use
 * the plain coefficient of t^{-1}. lambda then lands everything in R/Z.
 */
using EqChar2 = LaurentSeries<LaurentSeries<Fp>>;

// residue of f dt, coefficient of t^{-1} (an element of k((u)))
LaurentSeries<Fp> res_eqchar(const EqChar2& f);

// residue of f dt in Q_p{{t}}: minus the coefficient of t^{-1}
PAdic res_mixed(const LaurentSeries<PAdic>& f);

// residue of f dt in Q_p((t)) (curve convention): plus the coefficient
PAdic res_curve(const LaurentSeries<PAdic>& f);

// residue of f dt in R((t))
double res_arch(const LaurentSeries<double>& f);

// residue followed by lambda, landing in R/Z
CircleValue res_flag_mixed(const LaurentSeries<PAdic>& f);
CircleValue res_flag_curve(const LaurentSeries<PAdic>& f);
CircleValue res_flag_arch(const LaurentSeries<double>& f);

// coefficientwise completions of Q((t))
LaurentSeries<double> complete_tensor_real(const LaurentSeries<Rational>& f);
LaurentSeries<PAdic> complete_tensor_padic(const LaurentSeries<Rational>& f, long p, int digits);

/* Rewrite x in terms of a new uniformizer t' = sigma(t): returns x composed
 * with the inverse substitution. sigma must be a unit-linear power series.
 * The differential transforms with the extra Jacobian factor, provided
 * separately so callers can verify residue invariance:
 * res_t(x dt) = res_t'((x o tau) tau' dt') with tau = sigma^(-1).
 */
template <class K>
LaurentSeries<K> substitute_parameter(const LaurentSeries<K>& x, const LaurentSeries<K>& sigma) {
    return compose(x, series_revert(sigma));
}

template <class K>
LaurentSeries<K> substitute_differential(const LaurentSeries<K>& x, const LaurentSeries<K>& sigma) {
    LaurentSeries<K> tau = series_revert(sigma);
    return compose(x, tau) * derivative(tau);
}

}  // namespace adelix
