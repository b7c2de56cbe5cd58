#include <cstdlib>

#include "adelix/surface.hpp"

namespace adelix {

/* Reciprocity laws, checked numerically: around a point the vertical residue
 * balances the sections through it; along a fiber the point residues sum to
 * zero; along a section the residue satisfies the product formula over Q.
 */

namespace {

RationalFunction<Rational> rf_power(const Poly<Rational>& base, long k) {
    Poly<Rational> pw = make_poly<Rational>({Rational(1)});
    for (long i = 0; i < std::labs(k); ++i) pw = pw * base;
    if (k >= 0) return rf_from_poly(pw, Rational(1));
    return make_rf(make_poly<Rational>({Rational(1)}), pw);
}

bool coeffs_p_integral(const Poly<Rational>& f, long p) {
    for (const auto& c : f.c)
        if (c != 0 && ord_p(c, p) < 0) return false;
    return true;
}

}  // namespace

MorrowPointReport morrow_point_check(const RationalFunction<Rational>& h, long p, const Poly<Fp>& pt,
                                     const PrecisionCtx& prec) {
    MorrowPointReport rep;
    rep.vertical = vertical_point_residue(h, p, pt, prec);
    PAdic sum = rep.vertical;
    if (!h.num.is_zero() && h.den.deg() >= 1) {
        for (const auto& fac : factor_q(h.den)) {
            if (fac.f.deg() == 1) {
                Rational a = -fac.f.c[0];
                if (a != 0 && ord_p(a, p) < 0) continue;  // the section exits through the fiber point at infinity
                if (pt.deg() != 1) continue;    // rational sections only meet degree-one points
                Poly<Fp> red = reduce_mod_p(make_poly<Rational>({-a, Rational(1)}), p);
                if (!(red - pt).is_zero()) continue;
                Rational c = horizontal_residue(h, a);
                rep.horizontal.push_back(c);
                sum = sum + PAdic::from_rational(c, p, (int)prec.padic_digits);
            } else {
                // higher-degree sections contribute their full trace, which
                // sits at a single fiber point only when the reduction is inert
                if (!coeffs_p_integral(fac.f, p)) {
                    long content = 0;
                    Poly<Fp> dred = poly_reduce_primitive(fac.f, p, content);
                    if (poly_gcd(dred, pt).deg() > 0)
                        throw_usage("pole section meets both this point and the fiber point at "
                                   "infinity; pick an inert section");
                    continue;
                }
                Poly<Fp> red = reduce_mod_p(fac.f, p);
                if (poly_gcd(red, pt).deg() == 0) continue;
                if (red.deg() != fac.f.deg() || !(red - pt).is_zero())
                    throw_usage("pole section meets the fiber in several points; pick an inert "
                               "section through the target point");
                Rational c = residue_at_place(h, place_finite(fac.f));
                rep.horizontal.push_back(c);
                sum = sum + PAdic::from_rational(c, p, (int)prec.padic_digits);
            }
        }
    }
    rep.ok = sum.is_zero_at_precision();
    return rep;
}

MorrowVerticalReport morrow_vertical_check(const RationalFunction<Rational>& h, long p,
                                           const PrecisionCtx& prec) {
    MorrowVerticalReport rep;
    PAdic sum;
    CircleValue lsum = CircleValue::zero();
    if (!h.num.is_zero() && h.den.deg() >= 1) {
        long content = 0;
        Poly<Fp> dbar = poly_reduce_primitive(h.den, p, content);
        for (const auto& fac : factor_fp(dbar)) {
            PAdic r = vertical_point_residue(h, p, fac.f, prec);
            rep.parts.emplace_back(flag_vert_point(p, fac.f).key(), r);
            sum = sum + r;
            lsum = lsum + lambda_p(r);
        }
    }
    rep.inf_part = vertical_inf_residue(h);
    sum = sum + PAdic::from_rational(rep.inf_part, p, (int)prec.padic_digits);
    lsum = lsum + lambda_p_rational(rep.inf_part, p);
    rep.lambda_sum = lsum;
    rep.ok = sum.is_zero_at_precision() && lsum.is_exact() && lsum.is_zero(0.0);
    return rep;
}

MorrowHorizontalReport morrow_horizontal_check(const RationalFunction<Rational>& h, const Rational& a,
                                               bool at_inf, const PrecisionCtx& prec) {
    (void)prec;
    MorrowHorizontalReport rep;
    rep.residue = at_inf ? horizontal_inf_residue(h) : horizontal_residue(h, a);
    CircleValue tot = lambda_inf_exact(rep.residue);
    Int d = rep.residue.get_den();
    if (d != 1)
        for (long q : prime_factors(d)) tot = tot + lambda_p_rational(rep.residue, q);
    rep.total = tot;
    rep.ok = tot.is_exact() && tot.is_zero(0.0);
    return rep;
}

NondegeneracyWitness nondegeneracy_probe(const Flag& fl, const SurfaceDifferential& om,
                                         const PrecisionCtx& prec) {
    const RationalFunction<Rational>& w = om.w;
    if (w.num.is_zero()) throw_usage("nondegeneracy probe needs a nonzero differential");
    NondegeneracyWitness wit;
    auto finish = [&](const RationalFunction<Rational>& carrier) {
        SurfaceAdele f;
        f.flag_parts.push_back({fl, carrier});
        wit.f = f;
        wit.pairing = flag_residue(carrier * w, fl, prec);
        wit.ok = !wit.pairing.is_zero(prec.eps);
    };

    switch (fl.kind) {
        case Flag::Kind::vert_point: {
            Poly<Rational> mq = lift_to_q(fl.point);
            long ow = poly_ord_at(w.num, mq) - poly_ord_at(w.den, mq);
            CurvePlace<Rational> pl = place_finite(mq);
            for (long j = 0; j < fl.point.deg(); ++j) {
                RationalFunction<Rational> gj =
                    rf_from_poly(poly_shift(make_poly<Rational>({Rational(1)}), j), Rational(1)) *
                    rf_power(mq, -1 - ow);
                Rational tau = residue_at_place(gj * w, pl);
                if (tau == 0) continue;  // trace-degenerate direction, twist further
                Rational c = Rational(1) / (Rational(fl.p) * tau);
                finish({scalar_mul(c, gj.num), gj.den});
                if (wit.ok) return wit;
            }
            throw_math("no vertical witness at this point; the form looks degenerate here");
        }
        case Flag::Kind::vert_inf: {
            long lo = w.den.deg() - w.num.deg();
            RationalFunction<Rational> g0 = rf_power(make_poly<Rational>({Rational(0), Rational(1)}), lo - 1);
            Rational v0 = vertical_inf_residue(g0 * w);
            if (v0 == 0) throw_math("leading coefficient vanished at infinity; cannot happen for a nonzero form");
            Rational c = Rational(1) / (Rational(fl.p) * v0);
            finish({scalar_mul(c, g0.num), g0.den});
            return wit;
        }
        case Flag::Kind::horiz_prime:
        case Flag::Kind::horiz_arch: {
            long unit = fl.kind == Flag::Kind::horiz_arch ? 2 : fl.p;
            RationalFunction<Rational> g0;
            Rational r0;
            if (fl.curve_inf) {
                long lo = w.den.deg() - w.num.deg();
                g0 = rf_power(make_poly<Rational>({Rational(0), Rational(1)}), lo - 1);
                r0 = horizontal_inf_residue(g0 * w);
            } else {
                Poly<Rational> lin = make_poly<Rational>({-fl.a, Rational(1)});
                long ow = poly_ord_at(w.num, lin) - poly_ord_at(w.den, lin);
                g0 = rf_power(lin, -1 - ow);
                r0 = horizontal_residue(g0 * w, fl.a);
            }
            if (r0 == 0) throw_math("leading residue vanished along the section; cannot happen for a nonzero form");
            Rational c = Rational(1) / (Rational(unit) * r0);
            finish({scalar_mul(c, g0.num), g0.den});
            return wit;
        }
    }
    throw_usage("unknown flag kind");
}

/* Probe form that takes the window adele itself. Pick the first declared flag
 * where g is nonzero, search a partner f supported there, and rescale f so
 * the residue of f g omega lands at valuation -1 (finite flavors) or at 1/2
 * (archimedean): the proof's "choose an element h such that Res(h omega) != 0"
 * made effective. A formally zero g returns the null witness (ok stays false).
 */
NondegeneracyWitness nondegeneracy_probe(const SurfaceAdele& g, const SurfaceDifferential& om,
                                         const PrecisionCtx& prec) {
    NondegeneracyWitness wit;
    if (om.w.num.is_zero()) throw_usage("nondegeneracy probe needs a nonzero differential");
    if (!g.global.num.is_zero() || !g.curves.empty() || !g.points.empty())
        throw_usage("adele probe wants a window adele: single-flag parts plus an archimedean constant");

    auto rfc = [](const Rational& c) {
        return make_rf(make_poly<Rational>({c}), make_poly<Rational>({Rational(1)}));
    };
    auto p_power = [](long q, long e) {
        return e >= 0 ? Rational(pow_int(q, e)) : Rational(1) / Rational(pow_int(q, -e));
    };

    // target flag: first one with a nonzero carrier; a bare archimedean
    // constant pairs against any section flag, t = 0 is as good as any
    Flag fl;
    bool have_flag = false;
    for (const auto& fp : g.flag_parts)
        if (!fp.carrier.num.is_zero()) {
            fl = fp.flag;
            have_flag = true;
            break;
        }
    if (!have_flag) {
        if (g.arch_const == 0) return wit;  // null: nothing to probe
        fl = flag_arch(Rational(0));
    }

    RationalFunction<Rational> sum = rf_zero();
    for (const auto& fp : g.flag_parts)
        if (fp.flag.key() == fl.key()) sum = sum + fp.carrier;
    if (fl.kind == Flag::Kind::horiz_arch) sum = sum + rfc(g.arch_const);
    RationalFunction<Rational> sw = sum * om.w;
    if (sw.num.is_zero()) throw_math("carrier collapsed against the form; g was not nonzero here");

    auto attempt = [&](const RationalFunction<Rational>& f0) -> bool {
        RationalFunction<Rational> h = f0 * sw;
        Rational c(1);
        switch (fl.kind) {
            case Flag::Kind::vert_point: {
                PAdic r = vertical_point_residue(h, fl.p, fl.point, prec);
                if (r.is_zero_at_precision()) return false;
                c = p_power(fl.p, -r.val() - 1);
                break;
            }
            case Flag::Kind::vert_inf: {
                Rational r = vertical_inf_residue(h);
                if (r == 0) return false;
                c = p_power(fl.p, -ord_p(r, fl.p) - 1);
                break;
            }
            case Flag::Kind::horiz_prime: {
                Rational r = fl.curve_inf ? horizontal_inf_residue(h) : horizontal_residue(h, fl.a);
                if (r == 0) return false;
                c = p_power(fl.p, -ord_p(r, fl.p) - 1);
                break;
            }
            case Flag::Kind::horiz_arch: {
                Rational r = fl.curve_inf ? horizontal_inf_residue(h) : horizontal_residue(h, fl.a);
                if (r == 0) return false;
                c = Rational(1) / (Rational(2) * r);
                break;
            }
        }
        SurfaceAdele f;
        f.flag_parts.push_back({fl, {scalar_mul(c, f0.num), f0.den}});
        wit.f = f;
        wit.pairing = global_pairing(f, g, om, prec).value;
        wit.ok = !wit.pairing.is_zero(prec.eps);
        return wit.ok;
    };

    Poly<Rational> tp = make_poly<Rational>({Rational(0), Rational(1)});
    for (long k = 0; k < 4; ++k) {
        switch (fl.kind) {
            case Flag::Kind::vert_point: {
                Poly<Rational> mq = lift_to_q(fl.point);
                long ow = poly_ord_at(sw.num, mq) - poly_ord_at(sw.den, mq);
                for (long j = 0; j < fl.point.deg(); ++j) {
                    RationalFunction<Rational> f0 =
                        rf_from_poly(poly_shift(make_poly<Rational>({Rational(1)}), j), Rational(1)) *
                        rf_power(mq, -1 - ow - k);
                    if (attempt(f0)) return wit;
                }
                break;
            }
            case Flag::Kind::vert_inf: {
                long lo = sw.den.deg() - sw.num.deg();
                if (attempt(rf_power(tp, lo - 1 + k))) return wit;
                break;
            }
            case Flag::Kind::horiz_prime:
            case Flag::Kind::horiz_arch: {
                if (fl.curve_inf) {
                    long lo = sw.den.deg() - sw.num.deg();
                    if (attempt(rf_power(tp, lo - 1 + k))) return wit;
                } else {
                    Poly<Rational> lin = make_poly<Rational>({-fl.a, Rational(1)});
                    long ow = poly_ord_at(sw.num, lin) - poly_ord_at(sw.den, lin);
                    if (attempt(rf_power(lin, -1 - ow - k))) return wit;
                }
                break;
            }
        }
    }
    throw_precision("probe exhausted its twist family without a nonzero pairing",
                    "raise --padic-prec or widen --t-window");
}

}  // namespace adelix
