#pragma once
#include <gmpxx.h>

#include <string>
#include <vector>

namespace adelix {

/* Exact scalars are GMP-backed. mpq_class keeps the canonical-form invariant
 * (reduced, positive denominator) on every operation, which is exactly the
 * Rational contract; the helpers below add the valuation and mod-1 operations
 * the residue theory needs.
 */
using Int = mpz_class;
using Rational = mpq_class;

bool is_prime(long p);

// ord_p of a nonzero integer (p >= 2). Throws usage error on zero input.
long ord_p(const Int& n, long p);
// ord_p of a nonzero rational.
long ord_p(const Rational& x, long p);

// Representative of x mod 1 in [0, 1).
Rational mod1(const Rational& x);

// Principal part of x at p: the fractional tail sum_{i<0} d_i p^i of the
// p-adic expansion, as a rational in [0,1). Zero when ord_p(x) >= 0.
// This is the canonical character lambda_p evaluated exactly.
Rational principal_part_at(const Rational& x, long p);

// Modular inverse of a mod m, gcd(a, m) = 1 required.
Int mod_inverse(const Int& a, const Int& m);

Int pow_int(long base, long exp);  // base^exp for exp >= 0

// Distinct prime factors of |n| (trial division; desk-scale inputs).
std::vector<long> prime_factors(const Int& n);

std::string rat_to_string(const Rational& x);
Rational rat_from_string(const std::string& s);  // "a/b" or "a"; usage error on junk

}  // namespace adelix
