#include "adelix/report.hpp"

namespace adelix {

namespace {

Json window_json(long lo, long trunc) {
    Json w;
    w["lo"] = lo;
    if (trunc >= kExactTrunc) w["trunc"] = "exact";
    else w["trunc"] = trunc;
    return w;
}

template <class K, class F>
Json elem_json(const char* tag, const LaurentSeries<K>& f, F&& coeff_json) {
    Json e;
    e["tag"] = tag;
    e["window"] = window_json(f.lo, f.trunc);
    Json cs = Json::array();
    for (size_t i = 0; i < f.c.size(); ++i) {
        Json one;
        one["e"] = f.lo + (long)i;
        one["c"] = coeff_json(f.c[i]);
        cs.push_back(std::move(one));
    }
    e["coeffs"] = std::move(cs);
    return e;
}

Json fp_json(const Fp& x) {
    Json j;
    j["tag"] = "fp";
    j["p"] = x.p();
    j["value"] = x.value();
    return j;
}

}  // namespace

Json exact_json(const Rational& x) {
    Json j;
    j["tag"] = "exact";
    j["value"] = rat_to_string(x);
    return j;
}

Json approx_json(double value, double tol) {
    Json j;
    j["tag"] = "approx";
    j["value"] = value;
    j["tol"] = tol;
    return j;
}

Json circle_json(const CircleValue& v, double tol) {
    if (v.is_exact()) return exact_json(*v.exact);
    return approx_json(v.approx, tol);
}

Json padic_json(const PAdic& x) {
    Json j;
    j["tag"] = "padic";
    j["p"] = x.p();
    if (x.is_exact_zero()) {
        j["kind"] = "exact-zero";
        return j;
    }
    if (x.is_zero_at_precision()) {
        j["kind"] = "zero-at-precision";
        j["abs_prec"] = x.abs_prec();
        return j;
    }
    j["kind"] = "unit";
    j["val"] = x.val();
    j["digits"] = x.digits();
    return j;
}

Json elem_inner_json(const LaurentSeries<Fp>& f) {
    return elem_json("inner", f, fp_json);
}

Json elem_eqchar_json(const EqChar2& f) {
    return elem_json("eqchar", f, [](const LaurentSeries<Fp>& c) { return elem_inner_json(c); });
}

Json elem_mixed_json(const LaurentSeries<PAdic>& f) {
    return elem_json("mixed", f, [](const PAdic& c) { return padic_json(c); });
}

Json elem_curve_json(const LaurentSeries<PAdic>& f) {
    return elem_json("curve", f, [](const PAdic& c) { return padic_json(c); });
}

Json elem_arch_json(const LaurentSeries<double>& f, double tol) {
    return elem_json("arch", f, [tol](double c) { return approx_json(c, tol); });
}

Report::Report(std::string command, const PrecisionCtx& prec) {
    doc_["schema"] = kReportSchema;
    doc_["command"] = std::move(command);
    Json p;
    p["padic_digits"] = prec.padic_digits;
    p["t_lo"] = prec.t_lo;
    p["t_hi"] = prec.t_hi;
    p["eps"] = prec.eps;
    doc_["precision"] = std::move(p);
    doc_["results"] = Json::object();
    doc_["checks"] = Json::array();
}

void Report::result(const std::string& key, Json v) { doc_["results"][key] = std::move(v); }

void Report::check(const std::string& name, bool ok, double tol) {
    Json c;
    c["name"] = name;
    c["ok"] = ok;
    c["tol"] = tol;
    doc_["checks"].push_back(std::move(c));
    ok_ = ok_ && ok;
}

void Report::provenance(const std::string& note) { doc_["provenance"] = note; }

}  // namespace adelix
