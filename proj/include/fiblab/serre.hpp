// Two-column Serre spectral sequence replay for the three fibration shapes
// used by the classification argument: the loop fibration over the three-cell
// complex X, the loop fibration over the top sphere, and the normalized
// fiber-over-base-sphere model. Differentials are stored as generator-level
// integer matrices so that d∘d = 0 is a checkable statement, not a comment.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fiblab/errors.hpp"
#include "fiblab/fgab.hpp"

namespace fiblab::serre {

enum class ModelKind {
    LoopFiberOverX,         // loop space of S^{2k} -> F -> X, base columns {0, 2k, 4k-1}
    LoopFiberOverTopSphere, // loop space of S^{2k} -> G -> S^{4k-1}, base columns {0, 4k-1}
    FiberOverBaseSphere,    // F -> X -> S^{2k}, fiber data supplied by caller
};

struct FibrationModel {
    ModelKind kind = ModelKind::LoopFiberOverX;
    long long k = 2;
    long long n = 1;      // LoopFiberOverX only
    long long hopf = 0;   // Hopf invariant / lambda parameter where relevant
    // FiberOverBaseSphere: caller-supplied fiber cohomology (degree, group).
    std::vector<std::pair<long long, fgab::AbGroup>> fiber_data;
};

// One applied differential d_r: (p,q) -> (p+r, q-r+1). The matrix maps the
// source entry's generators to the target entry's generators (rows = target
// generators, cols = source generators); a zero-generator target encodes the
// zero continuation of a differential landing outside the support, logged so
// that composite checks d∘d = 0 range over real pairs.
struct DifferentialRecord {
    long long r = 2;
    long long p = 0, q = 0;
    long long p2 = 0, q2 = 0;
    fgab::IntMatrix matrix;
};

// Page entry: the isomorphism type plus the scale of its generator relative
// to the original E_2 generator (a survivor nZ inside Z has gen_scale n).
struct PageEntry {
    fgab::AbGroup group;
    long long gen_scale = 1;
};

struct BigradedPage {
    long long page_index = 2;
    long long max_total_degree = 0;
    std::map<std::pair<long long, long long>, PageEntry> entries;
    std::vector<DifferentialRecord> differential_log;

    // Golden dump: `p q free_rank torsion-list` lines sorted by (p, q), then
    // `d r: (p,q)->(p',q') matrix=[rows ; -separated, entries ,-separated]`.
    std::string to_dump() const;
};

// Cohomology of the loop space of S^{2k}: Z in degrees (2k-1)j up to the
// truncation, nothing else.
std::vector<std::pair<long long, fgab::AbGroup>> loop_cohomology(long long k,
                                                                 long long max_degree);

// E_2 of the model, truncated at total degree p + q <= max_total_degree.
// Entries that are trivial groups are omitted (modulus-1 coefficients).
BigradedPage build_E2(const FibrationModel& model, long long max_total_degree);

// The multiplication-type differential d_{2k}: z_{(2k-1)j} -> y ox z_{(2k-1)(j-1)}
// for j >= 1, an epimorphism Z -> Z_n on each column pair. Survivors in
// column 0 are the subgroups nZ (gen_scale multiplied by n); column 2k dies.
// Requires the E_2 page of a LoopFiberOverX model; advances page_index to
// 4k-1 (the next potentially nonzero differential).
BigradedPage apply_d2k(const BigradedPage& page, const FibrationModel& model);

// The transgressive differential d_{4k-1}: (n z_{(2k-1)j}) -> lambda y' ox
// z_{(2k-1)(j-2)} for j >= 2. Source survivors die unless lambda = 0; targets
// become Z_|lambda| (Z_0 = Z, Z_1 = 0). Requires the post-d_{2k} page;
// advances page_index to 4k (everything further is zero for degree reasons).
BigradedPage apply_d4k1(const BigradedPage& page, const FibrationModel& model,
                        long long lambda);

// Transgression data for the loop fibration over the top sphere:
// d_{4k-1}(z_{4k-2}) = H_f * y_{4k-1}. Returns ((0,4k-2), (4k-1,0), H_f).
struct Transgression {
    std::pair<long long, long long> source;
    std::pair<long long, long long> target;
    long long multiplier = 0;
};
Transgression transgression_G(long long k, long long H_f);

// Reduced homology of the normalized fiber: Z in degree 2k-1, Z_|lambda| in
// degrees (2k-1)j for j >= 2 (conventions Z_0 = Z, Z_1 = 0). Trivial entries
// are omitted.
std::vector<std::pair<long long, fgab::AbGroup>> fiber_homology(long long k,
                                                                long long lambda,
                                                                long long max_degree);

// Unreduced fiber cohomology obtained from fiber_homology by universal
// coefficients: H^i = free(H_i) + torsion(H_{i-1}), with H_0 = Z.
std::vector<std::pair<long long, fgab::AbGroup>> fiber_cohomology(long long k,
                                                                  long long lambda,
                                                                  long long max_degree);

// Assemble the cohomology read off a final page: one group per total degree
// p + q (each anti-diagonal of these two-column pages carries at most one
// nonzero entry; a violation is an internal inconsistency).
std::map<long long, fgab::AbGroup> einf_cohomology(const BigradedPage& page);

// Verify d∘d = 0 over every composable pair of logged differentials (same r,
// target of one = source of the next). Throws InternalInconsistency on a
// nonzero composite.
void check_dd_zero(const BigradedPage& page);

// The Hopf invariant after acting by a class alpha with H(alpha) = Ha on a
// model with invariant H0: exactly n^2 * Ha + H0.
long long hopf_action(long long H0, long long n, long long Ha);

// lambda with H0 = lambda * n for a genuine extension of the pinch map;
// inputs where n does not divide H0 cannot arise and are rejected.
long long lambda_of_extension(long long H0, long long n);

// Witness that the descriptor normalizes to Hopf invariant +-n: a unit u mod
// coefficient_modulus(k,n), an integer h divisible by hopf_image_stride(k),
// and a sign with u^2 * lambda_lift + n * h = sign, where lambda_lift is one
// of the two lifts {lambda, lambda + n} of lambda mod n to the coefficient
// modulus (both lifts are searched; exactly the classes with lambda mod n a
// +-unit square admit a witness). Realizes hopf_action(u^2*lambda*n, n, h) =
// sign * n.
struct HopfWitness {
    long long unit = 1;
    long long h = 0;
    long long sign = 1;
    long long lambda_lift = 0;
};
std::optional<HopfWitness> normalize_hopf(long long k, long long n, long long lambda);

// A normalized model is a genuine homology-sphere fiber iff |lambda| = 1.
bool sphere_fiber_check(long long k, long long lambda_final);

}  // namespace fiblab::serre
