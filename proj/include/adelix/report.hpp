#pragma once
#include <string>

#include <json.hpp>

#include "adelix/circle.hpp"
#include "adelix/local2d.hpp"
#include "adelix/precision.hpp"

namespace adelix {

using Json = nlohmann::json;

inline constexpr const char* kReportSchema = "adelix-report/1";

/* Value conventions shared by every report, enforced by the shipped schema:
 *   exact rational   {"tag":"exact","value":"a/b"}          never a float
 *   approx real      {"tag":"approx","value":x,"tol":eps}   tolerance mandatory
 *   circle value     one of the two, representative in [0,1)
 *   p-adic           digit window, all integers
 * Local-field elements carry their variant tag, the exponent window and the
 * coefficient list. Bare JSON numbers elsewhere are integers only (dims,
 * degrees, exponents).
 */
Json exact_json(const Rational& x);
Json approx_json(double value, double tol);
Json circle_json(const CircleValue& v, double tol);
Json padic_json(const PAdic& x);

Json elem_inner_json(const LaurentSeries<Fp>& f);  // k((u)) values
Json elem_eqchar_json(const EqChar2& f);
Json elem_mixed_json(const LaurentSeries<PAdic>& f);
Json elem_curve_json(const LaurentSeries<PAdic>& f);
Json elem_arch_json(const LaurentSeries<double>& f, double tol);

/* Envelope {schema, command, precision, results, checks[], provenance?}.
 * all_ok() ands the recorded verdicts; the CLI maps it to the exit code.
 */
class Report {
  public:
    Report(std::string command, const PrecisionCtx& prec);

    void result(const std::string& key, Json v);
    void check(const std::string& name, bool ok, double tol);
    void provenance(const std::string& note);

    bool all_ok() const { return ok_; }
    const Json& doc() const { return doc_; }

  private:
    Json doc_;
    bool ok_ = true;
};

}  // namespace adelix
