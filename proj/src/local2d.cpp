#include "adelix/local2d.hpp"

namespace adelix {

LaurentSeries<Fp> res_eqchar(const EqChar2& f) { return coeff_at(f, -1); }

PAdic res_mixed(const LaurentSeries<PAdic>& f) { return -coeff_at(f, -1); }

PAdic res_curve(const LaurentSeries<PAdic>& f) { return coeff_at(f, -1); }

double res_arch(const LaurentSeries<double>& f) { return coeff_at(f, -1); }

CircleValue res_flag_mixed(const LaurentSeries<PAdic>& f) { return lambda_p(res_mixed(f)); }

CircleValue res_flag_curve(const LaurentSeries<PAdic>& f) { return lambda_p(res_curve(f)); }

CircleValue res_flag_arch(const LaurentSeries<double>& f) { return lambda_inf(res_arch(f)); }

LaurentSeries<double> complete_tensor_real(const LaurentSeries<Rational>& f) {
    LaurentSeries<double> r;
    r.lo = f.lo;
    r.trunc = f.trunc;
    r.c.reserve(f.c.size());
    for (const auto& q : f.c) r.c.push_back(q.get_d());
    return normalized(r);
}

LaurentSeries<PAdic> complete_tensor_padic(const LaurentSeries<Rational>& f, long p, int digits) {
    LaurentSeries<PAdic> r;
    r.lo = f.lo;
    r.trunc = f.trunc;
    r.c.reserve(f.c.size());
    for (const auto& q : f.c) r.c.push_back(PAdic::from_rational(q, p, digits));
    return normalized(r);
}

}  // namespace adelix
