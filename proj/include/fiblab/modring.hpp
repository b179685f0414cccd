// Exact arithmetic in Z_n: factorization, unit groups, and the residue sets
// of the form {+-t^2 mod n : t a unit} that drive the classification rules.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fiblab/errors.hpp"
#include "fiblab/fgab.hpp"

namespace fiblab::modring {

// Prime factorization, (prime, exponent) pairs with strictly increasing
// primes and positive exponents. Empty for n = 1.
using Factorization = std::vector<std::pair<long long, int>>;

// A residue class value mod modulus, normalized to [0, modulus).
struct Residue {
    long long value = 0;
    long long modulus = 1;
};

Residue make_residue(long long value, long long modulus);

// Sorted, deduplicated subset of [0, modulus).
struct ResidueSet {
    long long modulus = 1;
    std::vector<long long> members;

    bool contains(long long v) const;
};

// Deterministic for all 64-bit inputs (trial division plus Miller-Rabin and
// Pollard rho). Rejects n <= 0.
Factorization factorize(long long n);

long long euler_phi(long long n);
long long gcd_ll(long long a, long long b);

// Modular arithmetic helpers; modulus must be >= 1, all reductions land in
// [0, modulus).
long long mod_reduce(long long v, long long modulus);
long long mod_mul(long long a, long long b, long long modulus);
long long mod_pow(long long base, long long exp, long long modulus);
// Inverse of a unit; throws InvalidArgument when gcd(a, modulus) != 1.
long long mod_inverse(long long a, long long modulus);

// { (+t^2) mod n, (-t^2) mod n : gcd(t, n) = 1 }. For n = 1 this is {0}.
// Materializes the set by enumeration; intended for n up to about 10^6
// (the membership predicate below has no such bound).
ResidueSet pm_unit_squares(long long n);

// Membership in pm_unit_squares(m.modulus) without materializing the set:
// CRT-decomposes the modulus and tests each prime power with a closed-form
// criterion, once for +value and once for -value (the sign must be
// consistent across all components). Agrees with the brute-force set.
bool is_pm_unit_square(const Residue& m);

// Single-sign variant: is m.value congruent to t^2 for some unit t
// (no negation allowed). True for modulus 1.
bool is_unit_square(const Residue& m);

// Invariant-factor decomposition of the multiplicative group (Z_n)^*.
// Assembled from the classical prime-power structure:
//   (Z_2)^* = 0, (Z_4)^* = Z_2, (Z_{2^e})^* = Z_2 + Z_{2^{e-2}} for e >= 3,
//   (Z_{p^e})^* cyclic of order p^{e-1}(p-1) for odd p.
fgab::AbGroup unit_group_structure(long long n);

// Component residues of m modulo each prime power of f, in f's order.
// f must factorize m.modulus exactly.
std::vector<Residue> crt_split(const Residue& m, const Factorization& f);

// Inverse of crt_split: unique residue mod the product of the component
// moduli (which must be pairwise coprime).
Residue crt_combine(const std::vector<Residue>& components);

}  // namespace fiblab::modring
