#include "adelix/surface.hpp"

#include <algorithm>
#include <set>

#include "adelix/factor.hpp"

namespace adelix {

std::string Flag::key() const {
    switch (kind) {
        case Kind::vert_point:
            return "V_" + std::to_string(p) + ":(" + poly_pretty(point) + ")";
        case Kind::vert_inf:
            return "V_" + std::to_string(p) + ":inf";
        case Kind::horiz_prime:
            return (curve_inf ? std::string("E_inf") : "E_" + rat_to_string(a)) + ":" + std::to_string(p);
        case Kind::horiz_arch:
            return (curve_inf ? std::string("E_inf") : "E_" + rat_to_string(a)) + ":arch";
    }
    return "?";
}

Flag flag_vert_point(long p, Poly<Fp> pt) {
    Flag f;
    f.kind = Flag::Kind::vert_point;
    f.p = p;
    f.point = std::move(pt);
    return f;
}
Flag flag_vert_inf(long p) {
    Flag f;
    f.kind = Flag::Kind::vert_inf;
    f.p = p;
    return f;
}
Flag flag_horiz(const Rational& a, long p) {
    Flag f;
    f.kind = Flag::Kind::horiz_prime;
    f.p = p;
    f.a = a;
    return f;
}
Flag flag_horiz_inf_curve(long p) {
    Flag f;
    f.kind = Flag::Kind::horiz_prime;
    f.p = p;
    f.curve_inf = true;
    return f;
}
Flag flag_arch(const Rational& a) {
    Flag f;
    f.kind = Flag::Kind::horiz_arch;
    f.a = a;
    return f;
}
Flag flag_arch_inf_curve() {
    Flag f;
    f.kind = Flag::Kind::horiz_arch;
    f.curve_inf = true;
    return f;
}

SurfaceDifferential dt_form() {
    Rational one(1);
    return {make_rf(make_poly<Rational>({one}), make_poly<Rational>({one}))};
}

void SurfaceDivisor::add_vert(long p, long m) {
    if (!is_prime(p)) throw_usage("vertical fiber at non-prime " + std::to_string(p));
    vert[p] += m;
    if (vert[p] == 0) vert.erase(p);
}

void SurfaceDivisor::add_horiz(const Rational& a, long m) {
    for (auto& [b, mb] : horiz)
        if (b == a) {
            mb += m;
            return;
        }
    horiz.emplace_back(a, m);
}

SurfaceAdele adele_global(const RationalFunction<Rational>& f) {
    SurfaceAdele x;
    x.global = f;
    return x;
}

SurfaceAdele adele_add(const SurfaceAdele& x, const SurfaceAdele& y) {
    SurfaceAdele r = x;
    r.global = x.global + y.global;
    r.curves.insert(r.curves.end(), y.curves.begin(), y.curves.end());
    r.points.insert(r.points.end(), y.points.begin(), y.points.end());
    r.flag_parts.insert(r.flag_parts.end(), y.flag_parts.begin(), y.flag_parts.end());
    r.arch_const = x.arch_const + y.arch_const;
    return r;
}

SurfaceAdele adele_neg(const SurfaceAdele& x) {
    SurfaceAdele r = x;
    r.global.num = negated(r.global.num);
    for (auto& c : r.curves) c.carrier.num = negated(c.carrier.num);
    for (auto& pp : r.points) pp.c = -pp.c;
    for (auto& fp : r.flag_parts) fp.carrier.num = negated(fp.carrier.num);
    r.arch_const = -r.arch_const;
    return r;
}

namespace {

std::string curve_key_of(const SurfaceAdele::CurvePart& c) {
    if (c.vertical) return "V_" + std::to_string(c.p);
    return c.at_inf ? "E_inf" : "E_" + rat_to_string(c.a);
}

std::string point_key_of(long p, bool pt_inf, const Poly<Fp>& pt) {
    return "P_" + std::to_string(p) + ":" + (pt_inf ? "inf" : "(" + poly_pretty(pt) + ")");
}

}  // namespace

bool adele_formally_zero(const SurfaceAdele& x) {
    if (!x.global.num.is_zero()) return false;
    if (x.arch_const != 0) return false;
    std::map<std::string, RationalFunction<Rational>> cs;
    for (const auto& c : x.curves) {
        std::string k = curve_key_of(c);
        auto it = cs.find(k);
        if (it == cs.end()) cs.emplace(k, c.carrier);
        else it->second = it->second + c.carrier;
    }
    for (const auto& [k, v] : cs)
        if (!v.num.is_zero()) return false;
    std::map<std::string, Rational> ps;
    for (const auto& pp : x.points) ps[point_key_of(pp.p, pp.pt_inf, pp.pt)] += pp.c;
    for (const auto& [k, v] : ps)
        if (v != 0) return false;
    std::map<std::string, RationalFunction<Rational>> fs;
    for (const auto& fp : x.flag_parts) {
        std::string k = fp.flag.key();
        auto it = fs.find(k);
        if (it == fs.end()) fs.emplace(k, fp.carrier);
        else it->second = it->second + fp.carrier;
    }
    for (const auto& [k, v] : fs)
        if (!v.num.is_zero()) return false;
    return true;
}

AdeleTriple complex_d0(const SurfaceAdele& a0, const SurfaceAdele& a1, const SurfaceAdele& a2) {
    AdeleTriple t;
    t.x0 = adele_add(a1, adele_neg(a0));  // component 01
    t.x1 = adele_add(a2, adele_neg(a0));  // component 02
    t.x2 = adele_add(a2, adele_neg(a1));  // component 12
    return t;
}

SurfaceAdele complex_d1(const AdeleTriple& b) {
    return adele_add(b.x2, adele_add(adele_neg(b.x1), b.x0));
}

/* ---------- raw residues ---------- */

namespace {

Rational rat_pow(long p, long e) {
    Rational b = Rational(pow_int(p, e >= 0 ? e : -e));
    return e >= 0 ? b : Rational(1) / b;
}

// p-content of a rational polynomial: min ord_p over nonzero coefficients
long poly_content_p(const Poly<Rational>& f, long p) {
    bool any = false;
    long c = 0;
    for (const auto& x : f.c) {
        if (x == 0) continue;
        long o = ord_p(x, p);
        c = any ? std::min(c, o) : o;
        any = true;
    }
    if (!any) throw_usage("content of zero polynomial");
    return c;
}

Poly<PAdic> poly_to_padic(const Poly<Rational>& f, long p, int digits) {
    Poly<PAdic> r;
    r.c.reserve(f.c.size());
    for (const auto& x : f.c) r.c.push_back(PAdic::from_rational(x, p, digits));
    return poly_trim(r);
}

}  // namespace

/* The completed local ring at (p, pt) is W[[u]] with W the Witt vectors of
 * the residue field and u the lift of pt; the local field allows tails with
 * p-adically decaying coefficients. The denominator expands to Q(u) in W[[u]]
 * whose reduction has order sigma = mult of pt in the fiber reduction, so
 * Q = u^sigma (V + W) with V a unit power series and W a finite tail of
 * p-divisible coefficients. 1/(V + W) = V^{-1} sum (-V^{-1} W)^m converges in
 * the local field; the sum is cut at m = digits and the dropped tail lands
 * below the reported absolute precision.
 */
PAdic vertical_point_residue(const RationalFunction<Rational>& h, long p, const Poly<Fp>& pt,
                             const PrecisionCtx& prec) {
    if (h.num.is_zero()) return PAdic{};
    if (pt.deg() < 1 || !is_irreducible_fp(pt)) throw_usage("fiber point must be a monic irreducible");
    long cn = 0, cd = 0;
    poly_reduce_primitive(h.num, p, cn);
    Poly<Fp> dbar = poly_reduce_primitive(h.den, p, cd);
    long sigma = poly_ord_at(dbar, pt);
    if (sigma == 0) return PAdic{};  // unit denominator: the expansion is regular

    long digits = prec.padic_digits;
    long T = (digits + 3) * sigma + 6;
    Poly<Rational> np = h.num, dp = h.den;
    Rational pcn = rat_pow(p, -cn), pcd = rat_pow(p, -cd);
    for (auto& x : np.c) x *= pcn;
    for (auto& x : dp.c) x *= pcd;

    auto rc = std::make_shared<ModCtx<PAdic>>();
    rc->m = poly_to_padic(lift_to_q(pt), p, (int)digits);
    ModPoly<PAdic> theta = ModPoly<PAdic>::gen(rc);
    ModPoly<PAdic> onem = ModPoly<PAdic>::constant(rc, PAdic::from_rational(Rational(1), p, (int)digits));

    LaurentSeries<ModPoly<PAdic>> that = newton_uniformizer(embed_poly(rc->m, rc), theta, onem, T + 1);
    LaurentSeries<ModPoly<PAdic>> Q =
        eval_poly_at_series(embed_poly(poly_to_padic(dp, p, (int)digits), rc), that, onem);

    std::vector<ModPoly<PAdic>> wc, vc;
    for (long e = 0; e < sigma; ++e) wc.push_back(coeff_at(Q, e));
    for (long e = sigma; e < Q.trunc; ++e) vc.push_back(coeff_at(Q, e));
    LaurentSeries<ModPoly<PAdic>> Ws = make_series(-sigma, std::move(wc));  // exact finite tail
    LaurentSeries<ModPoly<PAdic>> Vs = make_series(0, std::move(vc), Q.trunc - sigma);

    LaurentSeries<ModPoly<PAdic>> vinv = series_inv(Vs);
    LaurentSeries<ModPoly<PAdic>> one_s = make_series(0, std::vector<ModPoly<PAdic>>{onem});
    LaurentSeries<ModPoly<PAdic>> S = one_s;
    LaurentSeries<ModPoly<PAdic>> Z = vinv * Ws;
    if (!Z.c.empty())
        for (long m = 1; m < digits; ++m) S = one_s - Z * S;
    LaurentSeries<ModPoly<PAdic>> invQ = shift_exp(vinv * S, -sigma);

    LaurentSeries<ModPoly<PAdic>> G =
        eval_poly_at_series(embed_poly(poly_to_padic(np, p, (int)digits), rc), that, onem);
    ModPoly<PAdic> c = coeff_at(G * invQ * derivative(that), -1);
    PAdic res = -(c.trace());
    res = res.mul_rat(rat_pow(p, cn - cd));
    return res.truncate_abs(digits + cn - cd);
}

Rational vertical_inf_residue(const RationalFunction<Rational>& h) {
    if (h.num.is_zero()) return Rational(0);
    CurvePlace<Rational> inf = place_infinity<Rational>();
    return -residue_at_place(h, inf);
}

Rational horizontal_residue(const RationalFunction<Rational>& h, const Rational& a) {
    if (h.num.is_zero()) return Rational(0);
    CurvePlace<Rational> pl = place_finite(make_poly<Rational>({-a, Rational(1)}));
    return residue_at_place(h, pl);
}

Rational horizontal_inf_residue(const RationalFunction<Rational>& h) {
    if (h.num.is_zero()) return Rational(0);
    return residue_at_place(h, place_infinity<Rational>());
}

CircleValue flag_residue(const RationalFunction<Rational>& h, const Flag& fl, const PrecisionCtx& prec) {
    switch (fl.kind) {
        case Flag::Kind::vert_point:
            return lambda_p(vertical_point_residue(h, fl.p, fl.point, prec));
        case Flag::Kind::vert_inf:
            return lambda_p_rational(vertical_inf_residue(h), fl.p);
        case Flag::Kind::horiz_prime:
            return lambda_p_rational(
                fl.curve_inf ? horizontal_inf_residue(h) : horizontal_residue(h, fl.a), fl.p);
        case Flag::Kind::horiz_arch:
            return lambda_inf_exact(fl.curve_inf ? horizontal_inf_residue(h) : horizontal_residue(h, fl.a));
    }
    throw_usage("unknown flag kind");
}

std::vector<long> candidate_vertical_primes(const RationalFunction<Rational>& h) {
    std::set<long> ps;
    auto add_int_primes = [&](const Int& n) {
        if (n == 0 || n == 1 || n == -1) return;
        Int an = abs(n);
        for (long q : prime_factors(an)) ps.insert(q);
    };
    for (const auto& x : h.num.c) add_int_primes(x.get_den());
    for (const auto& x : h.den.c) add_int_primes(x.get_den());
    if (h.den.deg() >= 1) {
        // collisions of denominator roots mod p: p | disc of the radical
        Poly<Rational> rad = divmod(h.den, poly_gcd(h.den, poly_derivative(h.den))).first;
        if (rad.deg() >= 2) {
            Rational d = poly_discriminant(rad);
            add_int_primes(d.get_num());
            add_int_primes(d.get_den());
        }
        for (long p = 2; p <= h.den.deg() + 1; ++p)
            if (is_prime(p)) ps.insert(p);
    }
    return std::vector<long>(ps.begin(), ps.end());
}

long rf_content_p(const RationalFunction<Rational>& f, long p) {
    return poly_content_p(f.num, p) - poly_content_p(f.den, p);
}

RationalFunction<Fp> rf_reduce(const RationalFunction<Rational>& f, long p) {
    long cn = 0, cd = 0;
    Poly<Fp> n = poly_reduce_primitive(f.num, p, cn);
    Poly<Fp> d = poly_reduce_primitive(f.den, p, cd);
    return make_rf(std::move(n), std::move(d));
}

Poly<Fp> poly_reduce_primitive(const Poly<Rational>& f, long p, long& content) {
    content = poly_content_p(f, p);
    Poly<Rational> g = f;
    Rational pc = rat_pow(p, -content);
    for (auto& x : g.c) x *= pc;
    return reduce_mod_p(g, p);
}

/* ---------- the global residue pairing ---------- */

namespace {

using Parts = std::vector<std::pair<std::string, CircleValue>>;

void add_part(Parts& out, CircleValue& total, const std::string& key, const CircleValue& v) {
    total = total + v;
    out.emplace_back(key, v);
}

// primes that can make lambda_p of an exact rational nonzero
std::vector<long> rational_lambda_primes(const Rational& c) {
    Int d = c.get_den();
    if (d == 1) return {};
    return prime_factors(d);
}

// horizontal contributions of a carrier along one rational section
void horiz_curve_contributions(const RationalFunction<Rational>& r, const Rational& a, bool at_inf,
                               Parts& out, CircleValue& total) {
    Rational c = at_inf ? horizontal_inf_residue(r) : horizontal_residue(r, a);
    if (c == 0) return;
    std::string curve = at_inf ? std::string("E_inf") : "E_" + rat_to_string(a);
    for (long p : rational_lambda_primes(c))
        add_part(out, total, curve + ":" + std::to_string(p), lambda_p_rational(c, p));
    add_part(out, total, curve + ":arch", lambda_inf_exact(c));
}

// vertical contributions of a carrier along one fiber
void vert_curve_contributions(const RationalFunction<Rational>& r, long p, const PrecisionCtx& prec,
                              Parts& out, CircleValue& total) {
    if (r.num.is_zero()) return;
    if (r.den.deg() >= 1) {
        long content = 0;
        Poly<Fp> dbar = poly_reduce_primitive(r.den, p, content);
        for (const auto& fac : factor_fp(dbar)) {
            CircleValue v = lambda_p(vertical_point_residue(r, p, fac.f, prec));
            if (!v.is_zero(0)) add_part(out, total, flag_vert_point(p, fac.f).key(), v);
        }
    }
    Rational ci = vertical_inf_residue(r);
    CircleValue vi = lambda_p_rational(ci, p);
    if (!vi.is_zero(0)) add_part(out, total, flag_vert_inf(p).key(), vi);
}

// full-support contributions of a global x global carrier
void full_contributions(const RationalFunction<Rational>& r, const PrecisionCtx& prec,
                        Parts& out, CircleValue& total) {
    if (r.num.is_zero()) return;
    // horizontal curves at denominator factors
    for (const auto& fac : factor_q(r.den)) {
        if (fac.f.deg() == 1) {
            Rational a = -fac.f.c[0];
            horiz_curve_contributions(r, a, false, out, total);
        } else {
            // higher-degree section: total over its flags via the trace
            CurvePlace<Rational> pl = place_finite(fac.f);
            Rational c = residue_at_place(r, pl);
            if (c == 0) continue;
            std::string curve = "E_(" + poly_pretty(fac.f) + ")";
            for (long p : rational_lambda_primes(c))
                add_part(out, total, curve + ":" + std::to_string(p), lambda_p_rational(c, p));
            add_part(out, total, curve + ":arch", lambda_inf_exact(c));
        }
    }
    horiz_curve_contributions(r, Rational(0), true, out, total);  // E_inf
    for (long p : candidate_vertical_primes(r)) vert_curve_contributions(r, p, prec, out, total);
}

// does the rational section through a pass through the fiber point (p, pt)?
bool section_through_point(const Rational& a, long p, bool pt_inf, const Poly<Fp>& pt) {
    long o = a == 0 ? 0 : ord_p(a, p);
    if (pt_inf) return o < 0;
    if (o < 0 || pt.deg() != 1) return false;
    // reduction of t - a mod p must equal pt = t - abar
    Poly<Fp> red = reduce_mod_p(make_poly<Rational>({-a, Rational(1)}), p);
    return (red - pt).is_zero();
}

// contributions of a carrier over the flags through one fiber point
void point_contributions(const RationalFunction<Rational>& r, long p, bool pt_inf, const Poly<Fp>& pt,
                         const PrecisionCtx& prec, Parts& out, CircleValue& total) {
    if (r.num.is_zero()) return;
    // vertical flag through the point
    if (pt_inf) {
        CircleValue v = lambda_p_rational(vertical_inf_residue(r), p);
        if (!v.is_zero(0)) add_part(out, total, flag_vert_inf(p).key(), v);
    } else {
        CircleValue v = lambda_p(vertical_point_residue(r, p, pt, prec));
        if (!v.is_zero(0)) add_part(out, total, flag_vert_point(p, pt).key(), v);
    }
    // horizontal flags: sections through the point at poles of the carrier
    for (const auto& fac : factor_q(r.den)) {
        if (fac.f.deg() == 1) {
            Rational a = -fac.f.c[0];
            if (!section_through_point(a, p, pt_inf, pt)) continue;
            Rational c = horizontal_residue(r, a);
            CircleValue v = lambda_p_rational(c, p);
            if (!v.is_zero(0)) add_part(out, total, flag_horiz(a, p).key(), v);
        } else {
            // a higher-degree pole section through this point is out of scope
            Int lead = fac.f.lead().get_num();
            bool bad;
            if (pt_inf) {
                bad = mpz_divisible_ui_p(lead.get_mpz_t(), (unsigned long)p) != 0;
            } else {
                bool ok_red = true;
                for (const auto& cc : fac.f.c)
                    if (mpz_divisible_ui_p(Int(cc.get_den()).get_mpz_t(), (unsigned long)p)) ok_red = false;
                if (!ok_red) bad = true;
                else {
                    Poly<Fp> red = reduce_mod_p(fac.f, p);
                    bad = red.deg() != fac.f.deg() || poly_gcd(red, pt).deg() > 0;
                }
            }
            if (bad)
                throw_usage("pole section of degree >= 2 passes through the target point; "
                           "only rational sections are supported here");
        }
    }
    if (pt_inf) {
        Rational c = horizontal_inf_residue(r);
        CircleValue v = lambda_p_rational(c, p);
        if (!v.is_zero(0)) add_part(out, total, flag_horiz_inf_curve(p).key(), v);
    }
}

// contributions of a carrier spread over every archimedean flag: per-curve
// parts are reported, and their sum is exactly zero by the residue theorem
// over the generic fiber.
void arch_all_contributions(const RationalFunction<Rational>& r, Parts& out,
                            CircleValue& total) {
    if (r.num.is_zero()) return;
    for (const auto& fac : factor_q(r.den)) {
        CurvePlace<Rational> pl = place_finite(fac.f);
        Rational c = residue_at_place(r, pl);
        if (c == 0) continue;
        std::string curve =
            fac.f.deg() == 1 ? "E_" + rat_to_string(-fac.f.c[0]) : "E_(" + poly_pretty(fac.f) + ")";
        add_part(out, total, curve + ":arch", lambda_inf_exact(c));
    }
    Rational ci = horizontal_inf_residue(r);
    if (ci != 0) add_part(out, total, "E_inf:arch", lambda_inf_exact(ci));
}

RationalFunction<Rational> rf_const(const Rational& c) {
    return make_rf(make_poly<Rational>({c}), make_poly<Rational>({Rational(1)}));
}

// evaluate the expansion carrier of one flag part restricted to a flag
void single_flag_contribution(const RationalFunction<Rational>& r, const Flag& fl,
                              const PrecisionCtx& prec, Parts& out,
                              CircleValue& total) {
    if (r.num.is_zero()) return;
    CircleValue v = flag_residue(r, fl, prec);
    if (!v.is_zero(0)) add_part(out, total, fl.key(), v);
}

bool same_curve(const SurfaceAdele::CurvePart& a, const SurfaceAdele::CurvePart& b) {
    return curve_key_of(a) == curve_key_of(b);
}

bool flag_on_curve(const Flag& fl, const SurfaceAdele::CurvePart& c) {
    if (c.vertical) return (fl.kind == Flag::Kind::vert_point || fl.kind == Flag::Kind::vert_inf) && fl.p == c.p;
    if (fl.kind != Flag::Kind::horiz_prime && fl.kind != Flag::Kind::horiz_arch) return false;
    if (c.at_inf != fl.curve_inf) return false;
    return c.at_inf || fl.a == c.a;
}

bool flag_through_point(const Flag& fl, const SurfaceAdele::PointPart& pp) {
    switch (fl.kind) {
        case Flag::Kind::vert_point:
            return !pp.pt_inf && fl.p == pp.p && (fl.point - pp.pt).is_zero();
        case Flag::Kind::vert_inf:
            return pp.pt_inf && fl.p == pp.p;
        case Flag::Kind::horiz_prime:
            if (fl.p != pp.p) return false;
            if (fl.curve_inf) return pp.pt_inf;
            return section_through_point(fl.a, pp.p, pp.pt_inf, pp.pt);
        case Flag::Kind::horiz_arch:
            return false;  // archimedean flags sit over no finite point
    }
    return false;
}

}  // namespace

PairingReport global_pairing(const SurfaceAdele& A, const SurfaceAdele& B,
                             const SurfaceDifferential& om, const PrecisionCtx& prec) {
    PairingReport rep;
    rep.value = CircleValue::zero();
    auto& out = rep.parts;
    CircleValue& total = rep.value;
    const RationalFunction<Rational>& w = om.w;

    auto mul3 = [&w](const RationalFunction<Rational>& x, const RationalFunction<Rational>& y) {
        return x * y * w;
    };

    // global x global
    full_contributions(mul3(A.global, B.global), prec, out, total);

    // global x curve parts (both orders) and curve x curve on a common curve
    auto curve_terms = [&](const SurfaceAdele::CurvePart& c, const RationalFunction<Rational>& other) {
        RationalFunction<Rational> r = mul3(c.carrier, other);
        if (c.vertical) vert_curve_contributions(r, c.p, prec, out, total);
        else horiz_curve_contributions(r, c.a, c.at_inf, out, total);
    };
    for (const auto& c : A.curves) curve_terms(c, B.global);
    for (const auto& c : B.curves) curve_terms(c, A.global);
    for (const auto& ca : A.curves)
        for (const auto& cb : B.curves)
            if (same_curve(ca, cb)) curve_terms(ca, cb.carrier);

    // point parts against global, matching curves, and each other
    auto point_terms = [&](const SurfaceAdele::PointPart& pp, const RationalFunction<Rational>& other) {
        point_contributions(mul3(rf_const(pp.c), other), pp.p, pp.pt_inf, pp.pt, prec, out, total);
    };
    for (const auto& pp : A.points) point_terms(pp, B.global);
    for (const auto& pp : B.points) point_terms(pp, A.global);
    for (const auto& pa : A.points)
        for (const auto& pb : B.points)
            if (point_key_of(pa.p, pa.pt_inf, pa.pt) == point_key_of(pb.p, pb.pt_inf, pb.pt))
                point_terms(pa, rf_const(pb.c));
    auto point_curve = [&](const SurfaceAdele::PointPart& pp, const SurfaceAdele::CurvePart& c) {
        RationalFunction<Rational> r = mul3(rf_const(pp.c), c.carrier);
        if (c.vertical && c.p == pp.p) {
            // single common flag (V_p, x)
            Flag fl = pp.pt_inf ? flag_vert_inf(pp.p) : flag_vert_point(pp.p, pp.pt);
            single_flag_contribution(r, fl, prec, out, total);
        } else if (!c.vertical) {
            bool through = c.at_inf ? pp.pt_inf : section_through_point(c.a, pp.p, pp.pt_inf, pp.pt);
            if (through) {
                Flag fl = c.at_inf ? flag_horiz_inf_curve(pp.p) : flag_horiz(c.a, pp.p);
                single_flag_contribution(r, fl, prec, out, total);
            }
        }
    };
    for (const auto& pp : A.points)
        for (const auto& c : B.curves) point_curve(pp, c);
    for (const auto& pp : B.points)
        for (const auto& c : A.curves) point_curve(pp, c);

    // archimedean constants
    auto arch_terms = [&](const Rational& cA, const SurfaceAdele& other) {
        if (cA == 0) return;
        arch_all_contributions(mul3(rf_const(cA), other.global), out, total);
        for (const auto& c : other.curves) {
            if (c.vertical) continue;  // vertical curves carry no archimedean flag
            RationalFunction<Rational> r = mul3(rf_const(cA), c.carrier);
            Flag fl = c.at_inf ? flag_arch_inf_curve() : flag_arch(c.a);
            single_flag_contribution(r, fl, prec, out, total);
        }
    };
    arch_terms(A.arch_const, B);
    arch_terms(B.arch_const, A);
    if (A.arch_const != 0 && B.arch_const != 0)
        arch_all_contributions(mul3(rf_const(A.arch_const), rf_const(B.arch_const)), out, total);

    // single-flag parts against everything supported at their flag
    auto flag_terms = [&](const SurfaceAdele::FlagPart& fp, const SurfaceAdele& other) {
        RationalFunction<Rational> sum = other.global;
        for (const auto& c : other.curves)
            if (flag_on_curve(fp.flag, c)) sum = sum + c.carrier;
        for (const auto& pp : other.points)
            if (flag_through_point(fp.flag, pp)) sum = sum + rf_const(pp.c);
        if (fp.flag.kind == Flag::Kind::horiz_arch) sum = sum + rf_const(other.arch_const);
        single_flag_contribution(mul3(fp.carrier, sum), fp.flag, prec, out, total);
    };
    for (const auto& fp : A.flag_parts) flag_terms(fp, B);
    for (const auto& fp : B.flag_parts) flag_terms(fp, A);
    for (const auto& fa : A.flag_parts)
        for (const auto& fb : B.flag_parts)
            if (fa.flag.key() == fb.flag.key())
                single_flag_contribution(mul3(fa.carrier, fb.carrier), fa.flag, prec, out, total);

    return rep;
}

/* ---------- subspace membership ---------- */

bool in_A01(const SurfaceAdele& x, std::string* witness) {
    // A01 = constant along every curve, horizontal parts uniform with their
    // infinite components. In this finite model point and single-flag parts
    // are exactly the non-uniform data, and a bare archimedean constant
    // breaks the k(X)_{E_P} = k(X_F)_P matching.
    if (!x.points.empty()) {
        if (witness)
            *witness = "point part at " + point_key_of(x.points.front().p, x.points.front().pt_inf, x.points.front().pt) + " varies across the curves through it";
        return false;
    }
    if (!x.flag_parts.empty()) {
        if (witness) *witness = "single-flag part at " + x.flag_parts.front().flag.key() + " is not constant along its curve";
        return false;
    }
    if (x.arch_const != 0) {
        if (witness) *witness = "archimedean constant " + rat_to_string(x.arch_const) + " has no matching horizontal component";
        return false;
    }
    return true;
}

bool in_A02(const SurfaceAdele& x, std::string* witness) {
    if (!x.curves.empty()) {
        if (witness) *witness = "curve part along " + curve_key_of(x.curves.front()) + " varies across the points on it";
        return false;
    }
    if (!x.flag_parts.empty()) {
        if (witness) *witness = "single-flag part at " + x.flag_parts.front().flag.key() + " is not constant at its point";
        return false;
    }
    return true;
}

namespace {

long rf_ord_vert(const RationalFunction<Rational>& f, long p) {
    return poly_content_p(f.num, p) - poly_content_p(f.den, p);
}

long horiz_mult(const SurfaceDivisor& D, const Rational& a) {
    for (const auto& [b, m] : D.horiz)
        if (b == a) return m;
    return 0;
}

}  // namespace

bool in_A12(const SurfaceAdele& x, const SurfaceDivisor& D, const PrecisionCtx& prec,
            std::string* witness) {
    (void)prec;
    if (!x.points.empty() || x.arch_const != 0) {  // point parts are not ord-bounded data
        if (witness) *witness = "point or archimedean constant parts carry no ord bound";
        return false;
    }
    auto global_ok = [&](const RationalFunction<Rational>& g) {
        if (g.num.is_zero()) return true;
        std::set<long> ps;
        for (const auto& [p, m] : D.vert) ps.insert(p);
        for (long p : candidate_vertical_primes(g)) ps.insert(p);
        for (long p : ps)
            if (rf_ord_vert(g, p) < -(D.vert.count(p) ? D.vert.at(p) : 0)) {
                if (witness)
                    *witness = "ord_{V_" + std::to_string(p) + "} = " + std::to_string(rf_ord_vert(g, p)) +
                               " below -ord_{V_" + std::to_string(p) + "}(D)";
                return false;
            }
        for (const auto& fac : factor_q(g.den)) {
            if (fac.f.deg() > 1) {
                if (witness) *witness = "pole along the non-rational section (" + poly_pretty(fac.f) + ")";
                return false;
            }
            Rational a = -fac.f.c[0];
            if (fac.mult > horiz_mult(D, a)) {
                if (witness)
                    *witness = "pole of order " + std::to_string(fac.mult) + " along E_" + rat_to_string(a) +
                               " exceeds ord_{E}(D) = " + std::to_string(horiz_mult(D, a));
                return false;
            }
        }
        if (g.num.deg() - g.den.deg() > D.n_inf) {
            if (witness)
                *witness = "pole of order " + std::to_string(g.num.deg() - g.den.deg()) +
                           " along E_inf exceeds ord_{E_inf}(D) = " + std::to_string(D.n_inf);
            return false;
        }
        return true;
    };
    if (!global_ok(x.global)) return false;
    for (const auto& c : x.curves)
        if (!global_ok(c.carrier)) return false;
    for (const auto& fp : x.flag_parts)
        if (!global_ok(fp.carrier)) return false;
    return true;
}

/* ---------- arithmetic H^0 on the surface ---------- */

SurfaceH0 h0_ar_surface(const SurfaceDivisor& D) {
    SurfaceH0 out;
    Poly<Rational> B = make_poly<Rational>({Rational(1)});
    long N = D.n_inf;
    for (const auto& [a, m] : D.horiz) {
        if (m < 0)
            throw_usage("negative horizontal multiplicities are not supported in h0_ar_surface");
        N += m;
        Poly<Rational> lin = make_poly<Rational>({-a, Rational(1)});
        for (long i = 0; i < m; ++i) B = B * lin;
    }
    if (N < 0) {
        out.empty = true;
        out.scale = 0;
        return out;
    }
    // scale: p^{sigma_p - v_p} with sigma_p the p-content of B
    std::set<long> ps;
    for (const auto& [p, m] : D.vert) ps.insert(p);
    for (const auto& [a, m] : D.horiz)
        for (long p : rational_lambda_primes(a)) ps.insert(p);
    Rational s(1);
    for (long p : ps) {
        long sigma = poly_content_p(B, p);
        long v = D.vert.count(p) ? D.vert.at(p) : 0;
        s *= rat_pow(p, sigma - v);
    }
    out.scale = s;
    for (long j = 0; j <= N; ++j) {
        Poly<Rational> tj = poly_shift(make_poly<Rational>({Rational(1)}), j);
        out.basis.push_back(make_rf(tj, B));
    }
    double sd = s.get_d();
    out.lattice = lattice_from_gram(Eigen::MatrixXd::Identity(N + 1, N + 1) * (sd * sd));
    return out;
}

std::vector<TailWindow> divisor_tail_windows(const SurfaceDivisor& D, long p) {
    if (!is_prime(p)) throw_usage("tail windows need a prime fiber");
    long m_inf = D.n_inf;
    std::map<std::string, std::pair<Poly<Fp>, long>> finite;
    for (const auto& [a, m] : D.horiz) {
        if (a != 0 && ord_p(a, p) < 0) {
            m_inf += m;
            continue;
        }
        Poly<Fp> red = reduce_mod_p(make_poly<Rational>({-a, Rational(1)}), p);
        auto [it, fresh] = finite.emplace(poly_pretty(red), std::make_pair(red, 0L));
        (void)fresh;
        it->second.second += m;
    }
    std::vector<TailWindow> wins;
    for (const auto& [key, ptm] : finite)
        if (ptm.second > 0) wins.push_back({ptm.first, false, -ptm.second, 0});
    if (m_inf > 0) wins.push_back({Poly<Fp>{}, true, -m_inf, 0});
    return wins;
}

CohDims prop17_piece_vertical(const SurfaceDivisor& D, long p) {
    if (!is_prime(p)) throw_usage("prop17 fiber at non-prime " + std::to_string(p));
    Fp one(p, 1);
    CurveDivisor<Fp> Dbar;
    for (const auto& [a, m] : D.horiz) {
        if (a != 0 && ord_p(a, p) < 0) {
            Dbar.add(place_infinity<Fp>(), m);
        } else {
            Poly<Fp> red = reduce_mod_p(make_poly<Rational>({-a, Rational(1)}), p);
            Dbar.add(place_finite(red), m);
        }
    }
    if (D.n_inf != 0) Dbar.add(place_infinity<Fp>(), D.n_inf);
    return adelic_h0_h1(Dbar, one);
}

}  // namespace adelix
