#pragma once
#include <iosfwd>
#include <string>
#include <vector>

#include "adelix/arith_curve.hpp"
#include "adelix/expr.hpp"
#include "adelix/surface.hpp"

namespace adelix {

/* Flag specs name a curve and a point on it:
 *   V2@t=0   V5@inf   V2@(t^2+t+1)      vertical fiber, reduced point
 *   E1/2@3   E2@arch  Einf@5  Einf@arch  horizontal section, prime or arch
 */
Flag parse_flag_spec(const std::string& src);

// "2,t=0" / "3,(t^2+1)" / "2,inf": a prime and a point of its fiber
struct PointSpec {
    long p = 0;
    bool at_inf = false;
    Poly<Fp> pt;
};
PointSpec parse_point_spec(const std::string& src);

/* Vocabulary validation of a parsed divisor, one converter per consumer.
 * Each rejects tokens outside its vocabulary and non-integer coefficients
 * (the Spec Z infinite place alone takes a real coefficient).
 */
CurveDivisor<Fp> to_curve_divisor(const DivisorSpec& spec, long p);
ArithDivisor to_arith_divisor(const DivisorSpec& spec);
SurfaceDivisor to_surface_divisor(const DivisorSpec& spec);

// One full command line, without argv[0]. Returns the process exit code:
// 0 checks pass, 1 mathematical check failed, 2 usage error, 3 precision.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace adelix
