#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fiblab/errors.hpp"

// Exact linear algebra over Z and finitely generated abelian groups.
//
// Groups are kept in canonical form: a free rank plus a chain of torsion
// coefficients d_1 | d_2 | ... | d_t with every d_i >= 2. All arithmetic is
// exact; intermediate products run through 128-bit checks and overflow is a
// hard error, never a wrap.

namespace fiblab::fgab {

long long checked_add(long long a, long long b);
long long checked_mul(long long a, long long b);

// Dense integer matrix, row-major.
//
// Text format (used by golden tests and the CLI): first line "rows cols",
// then the entries row-major, whitespace separated.
struct IntMatrix {
    long long rows = 0;
    long long cols = 0;
    std::vector<long long> a;

    IntMatrix() = default;
    IntMatrix(long long r, long long c) : rows(r), cols(c), a(static_cast<size_t>(r * c), 0) {
        if (r < 0 || c < 0) throw InvalidArgument("IntMatrix: negative dimensions");
    }

    long long& at(long long r, long long c) { return a[static_cast<size_t>(r * cols + c)]; }
    long long at(long long r, long long c) const { return a[static_cast<size_t>(r * cols + c)]; }

    static IntMatrix identity(long long n);

    bool operator==(const IntMatrix& o) const = default;

    std::string to_text() const;
    static IntMatrix from_text(const std::string& text);
};

IntMatrix matmul(const IntMatrix& a, const IntMatrix& b);
IntMatrix transpose(const IntMatrix& m);
// Exact determinant (fraction-free Gaussian elimination).
long long determinant(const IntMatrix& m);

// Finitely generated abelian group in canonical form.
struct AbGroup {
    long long free_rank = 0;
    std::vector<long long> torsion;  // divisibility chain, entries >= 2

    static AbGroup trivial() { return {}; }
    static AbGroup free_group(long long rank);
    static AbGroup cyclic(long long n);  // n >= 1; cyclic(1) is the trivial group
    // Canonicalize an arbitrary direct sum of cyclic groups. Orders must be
    // >= 0; an order of 0 contributes a free summand, an order of 1 nothing.
    static AbGroup from_cyclic_summands(const std::vector<long long>& orders, long long free_rank = 0);

    bool is_canonical() const;
    bool is_trivial() const { return free_rank == 0 && torsion.empty(); }
    bool is_finite() const { return free_rank == 0; }
    // Number of elements; nullopt when infinite. Throws OverflowError if the
    // order does not fit in 64 bits.
    std::optional<long long> order() const;
    long long generator_count() const { return free_rank + static_cast<long long>(torsion.size()); }
    // Order of generator i (torsion generators first), 0 meaning infinite.
    long long generator_order(long long i) const;

    bool operator==(const AbGroup& o) const = default;
    std::string to_string() const;  // e.g. "Z^2 + Z_2 + Z_12", "0" for trivial
};

AbGroup direct_sum(const AbGroup& a, const AbGroup& b);

// Primary decomposition: the multiset of prime-power cyclic summands.
// Conversion is exact in both directions.
struct PrimaryDecomposition {
    long long free_rank = 0;
    std::vector<std::pair<long long, int>> summands;  // (p, e) for a Z_{p^e} summand, sorted
};
PrimaryDecomposition primary_decomposition(const AbGroup& g);
AbGroup from_primary(const PrimaryDecomposition& pd);

// dim over F_p of p^{j-1}G / p^jG. Free summands contribute 1 at every
// layer j >= 1; a torsion summand Z_d contributes 1 exactly when p^j | d.
long long layer_dim(const AbGroup& g, long long p, int j);
// Same count restricted to the torsion part.
long long torsion_layer_dim(const AbGroup& g, long long p, int j);

// Smith normal form: u * m * v = d with u, v unimodular and d diagonal,
// diagonal entries nonnegative and forming a divisibility chain.
// Pivot choice: smallest nonzero absolute value, ties broken by lowest row
// then lowest column, so results are reproducible.
struct SnfResult {
    IntMatrix u, d, v;
    IntMatrix u_inv, v_inv;
};
SnfResult smith_normal_form(const IntMatrix& m);

// Cokernel of the relation matrix: generators are the columns of m, each row
// is a relation. Returns Z^cols / (row span of m) in canonical form.
AbGroup from_presentation(const IntMatrix& m);

// Basis for the integer kernel lattice {x : m x = 0}; basis vectors are the
// returned columns.
IntMatrix integer_kernel(const IntMatrix& m);
// Basis for the column-space lattice of m (columns of the result).
IntMatrix column_space_basis(const IntMatrix& m);

// Homomorphism between groups in canonical form. Column j of `matrix` is the
// image of domain generator j expressed in codomain generators; torsion
// generators come first on both sides.
struct Hom {
    AbGroup domain;
    AbGroup codomain;
    IntMatrix matrix;
};
bool is_valid_hom(const Hom& h);
Hom make_hom(AbGroup domain, AbGroup codomain, IntMatrix matrix);  // validates

AbGroup kernel(const Hom& h);
AbGroup image(const Hom& h);
AbGroup cokernel(const Hom& h);

// Decides whether some surjection A -> B exists, by the layered p-rank
// criterion: free_rank(B) <= free_rank(A) and, for every prime p and depth j,
// layer_dim(B, p, j) <= layer_dim(A, p, j).
bool exists_epimorphism(const AbGroup& a, const AbGroup& b);

// Independent check of exists_epimorphism by exhaustive search over
// generator images.
//
// For finite B the search walks generator assignments with subgroup-closure
// memoization, exact for any pair with |A|, |B| <= 4096. When B has free
// rank (at most 2 on either side), free generator images are probed over the
// coordinate box [-8, 8] and surjectivity is certified by presentation
// arithmetic; that branch is a best-effort probe, not a decision procedure.
// Instances outside these bounds throw OracleInapplicable. The optional
// callback is polled during long runs; returning true cancels the search
// (OracleCancelled).
bool brute_force_epi_oracle(const AbGroup& a, const AbGroup& b,
                            const std::function<bool()>& cancel = {});

}  // namespace fiblab::fgab
