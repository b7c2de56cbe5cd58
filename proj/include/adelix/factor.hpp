#pragma once
#include <vector>

#include "adelix/poly.hpp"
#include "adelix/prime_field.hpp"
#include "adelix/rational.hpp"

namespace adelix {

template <class K>
struct PolyFactor {
    Poly<K> f;  // monic irreducible
    long mult = 1;
};

Poly<Fp> reduce_mod_p(const Poly<Rational>& f, long p);
Poly<Rational> lift_to_q(const Poly<Fp>& f);  // coefficients lifted to {0,...,p-1}

// Monic irreducible factors with multiplicities; the unit leading coefficient
// is the caller's business. Deterministic (fixed-seed splitting).
std::vector<PolyFactor<Fp>> factor_fp(const Poly<Fp>& f);
bool is_irreducible_fp(const Poly<Fp>& f);

// Factorization over Q into monic irreducibles (content dropped). Combines
// rational-root extraction, mod-p irreducibility certificates and a bounded
// Kronecker search; throws a math error if the poly resists all of them.
std::vector<PolyFactor<Rational>> factor_q(const Poly<Rational>& f);
bool is_irreducible_q(const Poly<Rational>& f);

// Scale to integer coefficients with content 1 and positive leading
// coefficient; returns the rational multiplier c with f = c * primitive.
Poly<Rational> primitive_part(const Poly<Rational>& f, Rational& content);

// All divisors of |n| (both signs), capped; throws a math error beyond cap.
std::vector<Int> int_divisors(const Int& n, size_t cap = 4096);

}  // namespace adelix
