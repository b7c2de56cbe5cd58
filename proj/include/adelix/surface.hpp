#pragma once
#include <map>
#include <string>
#include <vector>

#include "adelix/arith_curve.hpp"
#include "adelix/circle.hpp"
#include "adelix/curve.hpp"
#include "adelix/precision.hpp"

namespace adelix {

/* The arithmetic surface P^1 over Z. Curves on it are the vertical fibers
 * V_p and the horizontal sections E_a (a in Q, plus E_inf); a flag pairs a
 * curve with a closed point on it. Residues of f dt are taken in the
 * two-dimensional local field of the flag and carried to R/Z by lambda:
 *
 *   (V_p, point)   mixed field, minus-trace convention, lambda_p
 *   (V_p, inf)     mixed field at the fiber point at infinity
 *   (E_a, p)       Q_p((t-a)), plain coefficient, lambda_p
 *   (E_a, arch)    R((t-a)), plain coefficient, lambda_inf
 */
struct Flag {
    enum class Kind { vert_point, vert_inf, horiz_prime, horiz_arch };
    Kind kind = Kind::vert_point;
    long p = 0;          // fiber prime (vert_*) or residue prime (horiz_prime)
    Poly<Fp> point;      // vert_point: monic irreducible in F_p[t]
    bool curve_inf = false;  // horizontal curve is E_inf
    Rational a;          // finite horizontal curve parameter

    std::string key() const;
};

Flag flag_vert_point(long p, Poly<Fp> pt);
Flag flag_vert_inf(long p);
Flag flag_horiz(const Rational& a, long p);
Flag flag_horiz_inf_curve(long p);
Flag flag_arch(const Rational& a);
Flag flag_arch_inf_curve();

// differentials w(t) dt with w rational
struct SurfaceDifferential {
    RationalFunction<Rational> w;
};
SurfaceDifferential dt_form();

// the zero function with a usable denominator
inline RationalFunction<Rational> rf_zero() {
    return {Poly<Rational>{}, make_poly<Rational>({Rational(1)})};
}

/* Divisors supported on vertical fibers and rational horizontal sections. */
struct SurfaceDivisor {
    std::map<long, long> vert;                       // p -> multiplicity
    std::vector<std::pair<Rational, long>> horiz;    // finite sections
    long n_inf = 0;                                  // multiplicity of E_inf

    void add_vert(long p, long m);
    void add_horiz(const Rational& a, long m);
};

/* Finite-support adeles. The value at a flag is the sum of the matching
 * parts, each an exact rational-function carrier expanded locally:
 *   global      contributes at every flag
 *   CurvePart   contributes at every flag of one curve (diagonal along it)
 *   PointPart   a rational constant at every flag through one finite point
 *   FlagPart    contributes at a single flag
 *   arch_const  a rational constant at every archimedean flag
 */
struct SurfaceAdele {
    RationalFunction<Rational> global = rf_zero();

    struct CurvePart {
        bool vertical = false;
        long p = 0;          // vertical curve V_p
        bool at_inf = false; // horizontal curve E_inf
        Rational a;          // finite horizontal curve E_a
        RationalFunction<Rational> carrier;
    };
    struct PointPart {
        long p = 0;
        bool pt_inf = false;  // the fiber point at infinity
        Poly<Fp> pt;          // else a monic irreducible over F_p
        Rational c;
    };
    struct FlagPart {
        Flag flag;
        RationalFunction<Rational> carrier;
    };

    std::vector<CurvePart> curves;
    std::vector<PointPart> points;
    std::vector<FlagPart> flag_parts;
    Rational arch_const = Rational(0);
};

SurfaceAdele adele_global(const RationalFunction<Rational>& f);
SurfaceAdele adele_add(const SurfaceAdele& x, const SurfaceAdele& y);
SurfaceAdele adele_neg(const SurfaceAdele& x);
// true when the representation cancels identically part-by-part
bool adele_formally_zero(const SurfaceAdele& x);

/* Raw flag residues of h dt. Vertical finite points run through the p-adic
 * Newton machinery; everything else is exact rational arithmetic.
 */
PAdic vertical_point_residue(const RationalFunction<Rational>& h, long p, const Poly<Fp>& pt,
                             const PrecisionCtx& prec);
Rational vertical_inf_residue(const RationalFunction<Rational>& h);
Rational horizontal_residue(const RationalFunction<Rational>& h, const Rational& a);
Rational horizontal_inf_residue(const RationalFunction<Rational>& h);

CircleValue flag_residue(const RationalFunction<Rational>& h, const Flag& fl, const PrecisionCtx& prec);

// Primes that can carry nonzero vertical residues of h dt: bad reduction of
// the denominator (discriminant/leading degeneration), coefficient
// denominators, and small primes up to the degree.
std::vector<long> candidate_vertical_primes(const RationalFunction<Rational>& h);

// p-content of a nonzero rational function (min coefficient valuation of the
// numerator minus the denominator's) and the fiber reduction of p^{-content} f,
// a nonzero rational function over F_p.
long rf_content_p(const RationalFunction<Rational>& f, long p);
RationalFunction<Fp> rf_reduce(const RationalFunction<Rational>& f, long p);
// reduction of p^{-content} f mod p for a nonzero rational polynomial
Poly<Fp> poly_reduce_primitive(const Poly<Rational>& f, long p, long& content);

struct PairingReport {
    CircleValue value;
    std::vector<std::pair<std::string, CircleValue>> parts;  // flag key -> contribution
};

// <A, B>_omega = sum over flags of lambda(res(A B omega)); exact whenever
// every lambda evaluation is exact.
PairingReport global_pairing(const SurfaceAdele& A, const SurfaceAdele& B,
                             const SurfaceDifferential& om, const PrecisionCtx& prec);

// Level-two subspace membership in the finite model. On failure the witness,
// when asked for, names the first violated constraint.
bool in_A01(const SurfaceAdele& x, std::string* witness = nullptr);
bool in_A02(const SurfaceAdele& x, std::string* witness = nullptr);
bool in_A12(const SurfaceAdele& x, const SurfaceDivisor& D, const PrecisionCtx& prec,
            std::string* witness = nullptr);

/* The adelic double complex at finite level:
 * d0 (a0,a1,a2) = (a1-a0, a2-a0, a2-a1), d1 (b01,b02,b12) = b12-b02+b01.
 */
struct AdeleTriple {
    SurfaceAdele x0, x1, x2;
};
AdeleTriple complex_d0(const SurfaceAdele& a0, const SurfaceAdele& a1, const SurfaceAdele& a2);
SurfaceAdele complex_d1(const AdeleTriple& b);

/* Global sections of O(D) as a metrized lattice: rational functions g/B with
 * the horizontal part bounding deg g and the vertical part scaling the
 * integral structure by prod_p p^{sigma_p - v_p}.
 */
struct SurfaceH0 {
    std::vector<RationalFunction<Rational>> basis;  // Q-basis t^j / B
    Rational scale;                                 // lattice = scale * Z^n on that basis
    MetrizedLattice lattice;                        // empty rank -> no sections
    bool empty = false;
};
SurfaceH0 h0_ar_surface(const SurfaceDivisor& D);

// Restriction of O(D) to a vertical fiber and its coherent cohomology over
// F_p. Horizontal curves would need the Spec Z theory and are rejected.
CohDims prop17_piece_vertical(const SurfaceDivisor& D, long p);

/* Finite-dimensional pairing spaces on a vertical curve V_p: truncated tails
 * at the points of S paired against the dual windows through res(.. omega).
 * Coordinates are F_{p^d}-components flattened over F_p.
 */
struct TailWindow {
    Poly<Fp> pt;      // finite fiber point (monic irreducible)
    bool pt_inf = false;
    long lo = 0, hi = 0;  // tail exponents lo <= e < hi
};

struct PairingSpace {
    long p = 0;
    std::vector<TailWindow> side1, side2;
    Mat<Fp> gram;  // pairing matrix side1 x side2 over F_p
    long dim1 = 0, dim2 = 0;
};

// Build the pairing space for omega on V_p over the points of S with side-1
// windows [lo, hi) and the dual side-2 windows around ord_x(omega_bar).
PairingSpace quotient_pairing_space(long p, const SurfaceDifferential& om,
                                    const std::vector<TailWindow>& side1);

// Side-1 windows of A12(D)/A12(0) on the fiber V_p: one window [-m_x, 0) per
// fiber point x where the restriction of D allows a pole of order m_x
// (horizontal sections reduce mod p; ord_p(a) < 0 sends E_a to the fiber
// point at infinity). Points with m_x <= 0 contribute nothing.
std::vector<TailWindow> divisor_tail_windows(const SurfaceDivisor& D, long p);

// Exact orthogonal complement in side2 of the span of the given side1
// vectors (rows in flattened coordinates).
Mat<Fp> orth_complement(const PairingSpace& sp, const Mat<Fp>& side1_vectors);

struct Lemma36Report {
    bool pairing_wellposed = false;   // bilinearity spot checks
    bool complement_match = false;    // window complement equals predicted window
    bool double_complement = false;   // W-perp-perp == span(W) for all enumerated W
    long vectors_checked = 0;
};
// Exhaustive verification on small spaces (p^dim enumerations).
Lemma36Report lemma36_bruteforce(const PairingSpace& sp, const Mat<Fp>& sub1,
                                 const Mat<Fp>& predicted_perp);

/* Reciprocity checks. The point and vertical laws are exact p-adic
 * identities; the horizontal law is the product formula on the exact
 * rational residue.
 */
struct MorrowPointReport {
    PAdic vertical;                       // residue along (V_p, x)
    std::vector<Rational> horizontal;     // residues along sections through x
    bool ok = false;
};
MorrowPointReport morrow_point_check(const RationalFunction<Rational>& h, long p, const Poly<Fp>& pt,
                                     const PrecisionCtx& prec);

struct MorrowVerticalReport {
    std::vector<std::pair<std::string, PAdic>> parts;
    Rational inf_part;
    bool ok = false;        // trace sum vanishes at precision
    CircleValue lambda_sum; // and the lambda-level sum is exactly 0
};
MorrowVerticalReport morrow_vertical_check(const RationalFunction<Rational>& h, long p,
                                           const PrecisionCtx& prec);

struct MorrowHorizontalReport {
    Rational residue;  // exact residue at t = a (or infinity)
    CircleValue total; // sum of lambda_p over p | den plus lambda_inf
    bool ok = false;
};
MorrowHorizontalReport morrow_horizontal_check(const RationalFunction<Rational>& h, const Rational& a,
                                               bool at_inf, const PrecisionCtx& prec);

// A witness element whose pairing against the constant adele 1 under omega
// is nonzero at the given flag: evidence of nondegeneracy flag by flag.
struct NondegeneracyWitness {
    SurfaceAdele f;
    CircleValue pairing;
    bool ok = false;
};
NondegeneracyWitness nondegeneracy_probe(const Flag& fl, const SurfaceDifferential& om,
                                         const PrecisionCtx& prec);

// Same, but against a concrete window adele g (single-flag parts plus an
// archimedean constant): the witness pairs nonzero with g itself. A formally
// zero g yields the null witness, ok = false and an empty f.
NondegeneracyWitness nondegeneracy_probe(const SurfaceAdele& g, const SurfaceDifferential& om,
                                         const PrecisionCtx& prec);

}  // namespace adelix
