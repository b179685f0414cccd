// Decision procedures for attaching descriptors of three-cell complexes
// built on a mod-n Moore space: which descriptors are realizable as the total
// space of an odd-sphere fibration over an even sphere, the equivalent
// linking-form standardness test, and the homotopy-type counting tables.
#pragma once

#include <optional>
#include <string>

#include "fiblab/errors.hpp"
#include "fiblab/fgab.hpp"
#include "fiblab/modring.hpp"
#include "fiblab/registry.hpp"

namespace fiblab::classifier {

// Caller-supplied torsion group housing the gamma component of a descriptor.
// The k-th group pi_{4k-2}(S^{2k-1}) is cited but not tabulated by the inputs
// this tool ships, so it must arrive from external tables with a mandatory
// source string; values are never guessed.
struct TorsionInput {
    long long k = 2;
    fgab::AbGroup group;  // must be finite
    std::string source;
};

// Descriptor of an attaching class: f = a * theta + (fiber inclusion) * gamma.
// a lives mod coefficient_modulus(k, n); gamma is an element index in the
// declared quotient group (gamma_home.group / n * gamma_home.group), or 0
// for the distinguished zero element when no home is declared. The
// realizability decision provably ignores gamma.
struct AttachingClass {
    long long k = 2;
    long long n = 1;
    modring::Residue a;
    long long gamma = 0;
    std::optional<TorsionInput> gamma_home;
};

// Validates ranges, reduces a mod coefficient_modulus(k, n), and checks gamma
// against the declared quotient when a home is given.
AttachingClass make_attaching_class(long long k, long long n, long long a,
                                    long long gamma = 0,
                                    std::optional<TorsionInput> gamma_home = std::nullopt);

// Order of the quotient group T / nT that gamma indexes into.
long long gamma_quotient_order(const TorsionInput& home, long long n);

// The linking-form value on the canonical generator pair, mod n. The sign is
// ambiguous because reversing orientation negates the form.
struct LinkingFormClass {
    long long n = 1;
    modring::Residue value;
    bool sign_ambiguous = true;
};

// Count of homotopy types, or an explicit gap marker when the stated table
// does not cover the parameter (never an extrapolated number).
struct GTableResult {
    long long k = 2;
    long long n = 2;
    long long gcd_value = 1;       // gcd(c_k, n) for c_k in {12, 8, 240, 8, 504}
    bool star = false;             // star_condition(n)
    std::optional<long long> count;
    std::string uncovered_reason;  // non-empty iff count is absent
};

// The coefficient m with i_*(f) = m * (distinguished generator), reduced mod
// the order of i_*(K): m = a when k in {2,4} or n is even, m = 2a otherwise
// (the descriptor coordinate measures against a doubled generator in the odd
// case). gamma never contributes (it lands in the kernel of i_*).
modring::Residue whitehead_coefficient(const AttachingClass& f);

// Realizability as an odd-sphere fibration total space: m mod n must be
// +-(unit square) mod n. Independent of gamma.
bool is_fibration(const AttachingClass& f);

// First of the two equivalent conditions: the descriptor projects to zero
// under the pinch map. True for every well-formed descriptor by construction
// of the coordinate system; named explicitly so the equivalence test with
// the linking-form condition reads literally.
bool condition_I(const AttachingClass& f);

// Evaluation of the linking form on the distinguished generator.
LinkingFormClass linking_form_of(const AttachingClass& f);

// Standardness of the linking form: some isomorphism psi of Z_n carries the
// form to plain multiplication, i.e. exists unit u with u^2 * (+-value) = 1.
bool condition_II(const LinkingFormClass& form);

// Independent oracle: enumerates every unit u and both orientations and
// checks u^2 * s * value * x * y == x * y over Z_n pairs. Exhaustive over all
// (x, y) for n <= 128; for larger n the residual u^2 * value is scanned
// directly, which is pair-complete: u^2*s*v*xy == xy for all x,y iff
// u^2*s*v == 1. Requires n <= 10000.
bool condition_II_oracle(const LinkingFormClass& form);

// Additive invariant of descriptor sums: m(f1) + m(f2) mod n.
modring::Residue james_h(const AttachingClass& f1, const AttachingClass& f2);

// n = 2^r * p_1^{e_1} ... p_s^{e_s} satisfies the star condition when
// r <= 1 and every odd prime factor is 1 mod 4; equivalently -1 is a unit
// square mod n.
bool star_condition(long long n);

// Homotopy-type counting table for 2 <= k <= 6, driven by d = gcd(c_k, n)
// and the star condition. Parameters outside the stated table produce an
// Uncovered result with the offending decomposition, never a guess.
GTableResult homotopy_type_count(long long k, long long n);

// |{a mod coefficient_modulus(k,n) : is_fibration with gamma = 0}| by
// exhaustive loop. Counts realizable a-coordinates, not homotopy types.
long long count_realizable(long long k, long long n);

}  // namespace fiblab::classifier
