#include "fiblab/fgab.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace fiblab::fgab {

namespace {

constexpr long long kMax = std::numeric_limits<long long>::max();
constexpr long long kMin = std::numeric_limits<long long>::min();

long long narrow(__int128 v, const char* ctx) {
    if (v > static_cast<__int128>(kMax) || v < static_cast<__int128>(kMin))
        throw OverflowError(std::string("integer overflow in ") + ctx);
    return static_cast<long long>(v);
}

}  // namespace

long long checked_add(long long a, long long b) {
    return narrow(static_cast<__int128>(a) + b, "add");
}

long long checked_mul(long long a, long long b) {
    return narrow(static_cast<__int128>(a) * b, "mul");
}

IntMatrix IntMatrix::identity(long long n) {
    IntMatrix m(n, n);
    for (long long i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

std::string IntMatrix::to_text() const {
    std::ostringstream os;
    os << rows << ' ' << cols << '\n';
    for (long long r = 0; r < rows; ++r) {
        for (long long c = 0; c < cols; ++c) {
            if (c) os << ' ';
            os << at(r, c);
        }
        os << '\n';
    }
    return os.str();
}

IntMatrix IntMatrix::from_text(const std::string& text) {
    std::istringstream is(text);
    long long r = 0, c = 0;
    if (!(is >> r >> c)) throw ParseError("matrix text: missing 'rows cols' header");
    if (r < 0 || c < 0) throw ParseError("matrix text: negative dimensions");
    IntMatrix m(r, c);
    for (long long i = 0; i < r * c; ++i) {
        long long v;
        if (!(is >> v)) throw ParseError("matrix text: expected " + std::to_string(r * c) + " entries");
        m.a[static_cast<size_t>(i)] = v;
    }
    long long extra;
    if (is >> extra) throw ParseError("matrix text: trailing data after entries");
    return m;
}

IntMatrix matmul(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols != b.rows) throw InvalidArgument("matmul: dimension mismatch");
    IntMatrix r(a.rows, b.cols);
    for (long long i = 0; i < a.rows; ++i)
        for (long long k = 0; k < a.cols; ++k) {
            long long aik = a.at(i, k);
            if (!aik) continue;
            for (long long j = 0; j < b.cols; ++j)
                r.at(i, j) = checked_add(r.at(i, j), checked_mul(aik, b.at(k, j)));
        }
    return r;
}

IntMatrix transpose(const IntMatrix& m) {
    IntMatrix r(m.cols, m.rows);
    for (long long i = 0; i < m.rows; ++i)
        for (long long j = 0; j < m.cols; ++j) r.at(j, i) = m.at(i, j);
    return r;
}

long long determinant(const IntMatrix& m) {
    if (m.rows != m.cols) throw InvalidArgument("determinant: matrix not square");
    long long n = m.rows;
    if (n == 0) return 1;
    // Bareiss fraction-free elimination in 128-bit lanes.
    std::vector<__int128> w(m.a.begin(), m.a.end());
    auto at = [&](long long r, long long c) -> __int128& { return w[static_cast<size_t>(r * n + c)]; };
    __int128 prev = 1;
    int sign = 1;
    for (long long k = 0; k + 1 < n; ++k) {
        if (at(k, k) == 0) {
            long long swap_row = -1;
            for (long long i = k + 1; i < n; ++i)
                if (at(i, k) != 0) { swap_row = i; break; }
            if (swap_row < 0) return 0;
            for (long long j = 0; j < n; ++j) std::swap(at(k, j), at(swap_row, j));
            sign = -sign;
        }
        for (long long i = k + 1; i < n; ++i)
            for (long long j = k + 1; j < n; ++j) {
                __int128 num = at(i, j) * at(k, k) - at(i, k) * at(k, j);
                at(i, j) = num / prev;  // exact by Bareiss
            }
        prev = at(k, k);
    }
    return narrow(sign * at(n - 1, n - 1), "determinant");
}

AbGroup AbGroup::free_group(long long rank) {
    if (rank < 0) throw InvalidArgument("free_group: negative rank");
    AbGroup g;
    g.free_rank = rank;
    return g;
}

AbGroup AbGroup::cyclic(long long n) {
    if (n < 1) throw InvalidArgument("cyclic: order must be >= 1");
    AbGroup g;
    if (n >= 2) g.torsion.push_back(n);
    return g;
}

bool AbGroup::is_canonical() const {
    if (free_rank < 0) return false;
    for (size_t i = 0; i < torsion.size(); ++i) {
        if (torsion[i] < 2) return false;
        if (i + 1 < torsion.size() && torsion[i + 1] % torsion[i] != 0) return false;
    }
    return true;
}

std::optional<long long> AbGroup::order() const {
    if (free_rank > 0) return std::nullopt;
    long long n = 1;
    for (long long d : torsion) n = checked_mul(n, d);
    return n;
}

long long AbGroup::generator_order(long long i) const {
    if (i < 0 || i >= generator_count()) throw InvalidArgument("generator_order: index out of range");
    if (i < static_cast<long long>(torsion.size())) return torsion[static_cast<size_t>(i)];
    return 0;
}

std::string AbGroup::to_string() const {
    if (is_trivial()) return "0";
    std::string s;
    auto append = [&](const std::string& part) {
        if (!s.empty()) s += " + ";
        s += part;
    };
    if (free_rank == 1) append("Z");
    if (free_rank > 1) append("Z^" + std::to_string(free_rank));
    for (long long d : torsion) append("Z_" + std::to_string(d));
    return s;
}

namespace {

std::vector<std::pair<long long, int>> factor_small(long long n) {
    std::vector<std::pair<long long, int>> out;
    for (long long p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

}  // namespace

AbGroup AbGroup::from_cyclic_summands(const std::vector<long long>& orders, long long free_rank) {
    if (free_rank < 0) throw InvalidArgument("from_cyclic_summands: negative free rank");
    PrimaryDecomposition pd;
    pd.free_rank = free_rank;
    for (long long d : orders) {
        if (d < 0) throw InvalidArgument("from_cyclic_summands: negative order");
        if (d == 0) { ++pd.free_rank; continue; }
        for (auto [p, e] : factor_small(d)) pd.summands.emplace_back(p, e);
    }
    std::sort(pd.summands.begin(), pd.summands.end());
    return from_primary(pd);
}

AbGroup direct_sum(const AbGroup& a, const AbGroup& b) {
    std::vector<long long> orders = a.torsion;
    orders.insert(orders.end(), b.torsion.begin(), b.torsion.end());
    return AbGroup::from_cyclic_summands(orders, a.free_rank + b.free_rank);
}

PrimaryDecomposition primary_decomposition(const AbGroup& g) {
    if (!g.is_canonical()) throw InvalidArgument("primary_decomposition: group not canonical");
    PrimaryDecomposition pd;
    pd.free_rank = g.free_rank;
    for (long long d : g.torsion)
        for (auto [p, e] : factor_small(d)) pd.summands.emplace_back(p, e);
    std::sort(pd.summands.begin(), pd.summands.end());
    return pd;
}

AbGroup from_primary(const PrimaryDecomposition& pd) {
    // Bucket exponents per prime, then peel off the largest exponent of every
    // prime to form the top invariant factor, and repeat.
    std::map<long long, std::vector<int>> buckets;
    for (auto [p, e] : pd.summands) {
        if (e <= 0) throw InvalidArgument("from_primary: exponent must be positive");
        buckets[p].push_back(e);
    }
    size_t levels = 0;
    for (auto& [p, es] : buckets) {
        std::sort(es.rbegin(), es.rend());
        levels = std::max(levels, es.size());
    }
    std::vector<long long> chain(levels, 1);
    for (auto& [p, es] : buckets)
        for (size_t i = 0; i < es.size(); ++i) {
            long long pe = 1;
            for (int t = 0; t < es[i]; ++t) pe = checked_mul(pe, p);
            chain[i] = checked_mul(chain[i], pe);
        }
    std::reverse(chain.begin(), chain.end());
    AbGroup g;
    g.free_rank = pd.free_rank;
    g.torsion = std::move(chain);
    return g;
}

long long layer_dim(const AbGroup& g, long long p, int j) {
    return g.free_rank + torsion_layer_dim(g, p, j);
}

long long torsion_layer_dim(const AbGroup& g, long long p, int j) {
    if (p < 2 || j < 1) throw InvalidArgument("layer_dim: need p >= 2, j >= 1");
    __int128 pj = 1;
    for (int t = 0; t < j; ++t) {
        pj *= p;
        if (pj > static_cast<__int128>(kMax)) return 0;  // deeper than any torsion coefficient
    }
    long long m = static_cast<long long>(pj);
    long long dim = 0;
    for (long long d : g.torsion)
        if (d % m == 0) ++dim;
    return dim;
}

// ---------------------------------------------------------------------------
// Smith normal form

namespace {

// Elementary operation bookkeeping. Invariants maintained:
//   u * m_orig * v == d,   u_inv == u^{-1},   v_inv == v^{-1}.
struct SnfWork {
    IntMatrix d, u, v, u_inv, v_inv;

    explicit SnfWork(const IntMatrix& m)
        : d(m),
          u(IntMatrix::identity(m.rows)),
          v(IntMatrix::identity(m.cols)),
          u_inv(IntMatrix::identity(m.rows)),
          v_inv(IntMatrix::identity(m.cols)) {}

    void row_swap(long long i, long long j) {
        if (i == j) return;
        for (long long c = 0; c < d.cols; ++c) std::swap(d.at(i, c), d.at(j, c));
        for (long long c = 0; c < u.cols; ++c) std::swap(u.at(i, c), u.at(j, c));
        for (long long r = 0; r < u_inv.rows; ++r) std::swap(u_inv.at(r, i), u_inv.at(r, j));
    }
    void col_swap(long long i, long long j) {
        if (i == j) return;
        for (long long r = 0; r < d.rows; ++r) std::swap(d.at(r, i), d.at(r, j));
        for (long long r = 0; r < v.rows; ++r) std::swap(v.at(r, i), v.at(r, j));
        for (long long c = 0; c < v_inv.cols; ++c) std::swap(v_inv.at(i, c), v_inv.at(j, c));
    }
    // row i += q * row t
    void row_addmul(long long i, long long t, long long q) {
        if (!q) return;
        for (long long c = 0; c < d.cols; ++c)
            d.at(i, c) = checked_add(d.at(i, c), checked_mul(q, d.at(t, c)));
        for (long long c = 0; c < u.cols; ++c)
            u.at(i, c) = checked_add(u.at(i, c), checked_mul(q, u.at(t, c)));
        for (long long r = 0; r < u_inv.rows; ++r)
            u_inv.at(r, t) = checked_add(u_inv.at(r, t), checked_mul(-q, u_inv.at(r, i)));
    }
    // col j += q * col t
    void col_addmul(long long j, long long t, long long q) {
        if (!q) return;
        for (long long r = 0; r < d.rows; ++r)
            d.at(r, j) = checked_add(d.at(r, j), checked_mul(q, d.at(r, t)));
        for (long long r = 0; r < v.rows; ++r)
            v.at(r, j) = checked_add(v.at(r, j), checked_mul(q, v.at(r, t)));
        for (long long c = 0; c < v_inv.cols; ++c)
            v_inv.at(t, c) = checked_add(v_inv.at(t, c), checked_mul(-q, v_inv.at(j, c)));
    }
    void row_negate(long long i) {
        for (long long c = 0; c < d.cols; ++c) d.at(i, c) = -d.at(i, c);
        for (long long c = 0; c < u.cols; ++c) u.at(i, c) = -u.at(i, c);
        for (long long r = 0; r < u_inv.rows; ++r) u_inv.at(r, i) = -u_inv.at(r, i);
    }
};

}  // namespace

SnfResult smith_normal_form(const IntMatrix& m) {
    SnfWork w(m);
    long long n = std::min(m.rows, m.cols);
    for (long long t = 0; t < n; ++t) {
        for (;;) {
            // Pivot: smallest nonzero absolute value in the trailing block,
            // ties broken by lowest row then lowest column.
            long long pi = -1, pj = -1;
            for (long long i = t; i < m.rows; ++i)
                for (long long j = t; j < m.cols; ++j) {
                    long long x = w.d.at(i, j);
                    if (!x) continue;
                    if (pi < 0 || std::llabs(x) < std::llabs(w.d.at(pi, pj))) { pi = i; pj = j; }
                }
            if (pi < 0) { t = n; break; }  // trailing block is zero
            w.row_swap(t, pi);
            w.col_swap(t, pj);

            bool clean = true;
            for (long long i = t + 1; i < m.rows; ++i) {
                long long q = w.d.at(i, t) / w.d.at(t, t);
                w.row_addmul(i, t, -q);
                if (w.d.at(i, t)) { clean = false; }
            }
            for (long long j = t + 1; j < m.cols; ++j) {
                long long q = w.d.at(t, j) / w.d.at(t, t);
                w.col_addmul(j, t, -q);
                if (w.d.at(t, j)) { clean = false; }
            }
            if (!clean) continue;  // smaller remainders exist; re-pick pivot

            // Row and column t are clear. Pull in any entry the pivot does
            // not divide, so the diagonal ends up a divisibility chain.
            long long bi = -1, bj = -1;
            for (long long i = t + 1; i < m.rows && bi < 0; ++i)
                for (long long j = t + 1; j < m.cols; ++j)
                    if (w.d.at(i, j) % w.d.at(t, t) != 0) { bi = i; bj = j; break; }
            if (bi < 0) break;
            w.row_addmul(t, bi, 1);
        }
        if (t >= n) break;
        if (w.d.at(t, t) < 0) w.row_negate(t);
    }
    return SnfResult{std::move(w.u), std::move(w.d), std::move(w.v),
                     std::move(w.u_inv), std::move(w.v_inv)};
}

namespace {

long long snf_rank(const IntMatrix& d) {
    long long r = 0;
    long long n = std::min(d.rows, d.cols);
    for (long long i = 0; i < n; ++i)
        if (d.at(i, i) != 0) ++r;
    return r;
}

}  // namespace

AbGroup from_presentation(const IntMatrix& m) {
    if (m.cols == 0) return AbGroup::trivial();
    if (m.rows == 0) return AbGroup::free_group(m.cols);
    SnfResult s = smith_normal_form(m);
    long long r = snf_rank(s.d);
    std::vector<long long> tors;
    for (long long i = 0; i < r; ++i) {
        long long di = s.d.at(i, i);
        if (di >= 2) tors.push_back(di);
    }
    AbGroup g;
    g.free_rank = m.cols - r;
    g.torsion = std::move(tors);
    return g;
}

IntMatrix integer_kernel(const IntMatrix& m) {
    SnfResult s = smith_normal_form(m);
    long long r = snf_rank(s.d);
    IntMatrix basis(m.cols, m.cols - r);
    for (long long j = r; j < m.cols; ++j)
        for (long long i = 0; i < m.cols; ++i) basis.at(i, j - r) = s.v.at(i, j);
    return basis;
}

IntMatrix column_space_basis(const IntMatrix& m) {
    SnfResult s = smith_normal_form(m);
    long long r = snf_rank(s.d);
    // column space of m = column space of u_inv * d; nonzero columns of that
    // product are d_i * (column i of u_inv).
    IntMatrix basis(m.rows, r);
    for (long long j = 0; j < r; ++j) {
        long long dj = s.d.at(j, j);
        for (long long i = 0; i < m.rows; ++i)
            basis.at(i, j) = checked_mul(dj, s.u_inv.at(i, j));
    }
    return basis;
}

// ---------------------------------------------------------------------------
// Homomorphisms

namespace {

// Relation columns of the canonical presentation: d_i * e_i per torsion
// generator.
IntMatrix relation_columns(const AbGroup& g) {
    long long gens = g.generator_count();
    long long t = static_cast<long long>(g.torsion.size());
    IntMatrix m(gens, t);
    for (long long i = 0; i < t; ++i) m.at(i, i) = g.torsion[static_cast<size_t>(i)];
    return m;
}

IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows != b.rows) throw InvalidArgument("hstack: row mismatch");
    IntMatrix r(a.rows, a.cols + b.cols);
    for (long long i = 0; i < a.rows; ++i) {
        for (long long j = 0; j < a.cols; ++j) r.at(i, j) = a.at(i, j);
        for (long long j = 0; j < b.cols; ++j) r.at(i, a.cols + j) = b.at(i, j);
    }
    return r;
}

IntMatrix vstack(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols != b.cols) throw InvalidArgument("vstack: column mismatch");
    IntMatrix r(a.rows + b.rows, a.cols);
    for (long long j = 0; j < a.cols; ++j) {
        for (long long i = 0; i < a.rows; ++i) r.at(i, j) = a.at(i, j);
        for (long long i = 0; i < b.rows; ++i) r.at(a.rows + i, j) = b.at(i, j);
    }
    return r;
}

// Solve basis * x = target for integer x; basis must have full column rank
// and target must lie in its column lattice.
std::vector<long long> solve_in_lattice(const SnfResult& s, long long basis_rows,
                                        long long basis_cols, const std::vector<long long>& target) {
    std::vector<long long> c(static_cast<size_t>(basis_rows), 0);
    for (long long i = 0; i < basis_rows; ++i) {
        __int128 acc = 0;
        for (long long j = 0; j < basis_rows; ++j)
            acc += static_cast<__int128>(s.u.at(i, j)) * target[static_cast<size_t>(j)];
        c[static_cast<size_t>(i)] = narrow(acc, "lattice solve");
    }
    std::vector<long long> y(static_cast<size_t>(basis_cols), 0);
    for (long long i = 0; i < basis_cols; ++i) {
        long long di = s.d.at(i, i);
        if (di == 0) {
            if (c[static_cast<size_t>(i)] != 0)
                throw InternalInconsistency("lattice solve: target outside lattice");
            continue;
        }
        if (c[static_cast<size_t>(i)] % di != 0)
            throw InternalInconsistency("lattice solve: target outside lattice");
        y[static_cast<size_t>(i)] = c[static_cast<size_t>(i)] / di;
    }
    for (long long i = basis_cols; i < basis_rows; ++i)
        if (c[static_cast<size_t>(i)] != 0)
            throw InternalInconsistency("lattice solve: target outside lattice");
    std::vector<long long> x(static_cast<size_t>(basis_cols), 0);
    for (long long i = 0; i < basis_cols; ++i) {
        __int128 acc = 0;
        for (long long j = 0; j < basis_cols; ++j)
            acc += static_cast<__int128>(s.v.at(i, j)) * y[static_cast<size_t>(j)];
        x[static_cast<size_t>(i)] = narrow(acc, "lattice solve");
    }
    return x;
}

// Isomorphism type of K / L for lattices L <= K <= Z^a, given generating
// columns for both.
AbGroup lattice_quotient(const IntMatrix& k_gens, const IntMatrix& l_gens) {
    IntMatrix basis = column_space_basis(k_gens);
    if (basis.cols == 0) return AbGroup::trivial();
    SnfResult s = smith_normal_form(basis);
    IntMatrix rel(l_gens.cols, basis.cols);
    for (long long g = 0; g < l_gens.cols; ++g) {
        std::vector<long long> target(static_cast<size_t>(l_gens.rows));
        for (long long i = 0; i < l_gens.rows; ++i) target[static_cast<size_t>(i)] = l_gens.at(i, g);
        std::vector<long long> x = solve_in_lattice(s, basis.rows, basis.cols, target);
        for (long long j = 0; j < basis.cols; ++j) rel.at(g, j) = x[static_cast<size_t>(j)];
    }
    return from_presentation(rel);
}

// Generating columns for the lattice {x in Z^dom_gens : M x lies in the
// relation lattice of the codomain}; always includes the domain relations.
IntMatrix preimage_lattice(const Hom& h) {
    IntMatrix rel_b = relation_columns(h.codomain);
    IntMatrix neg_rel_b = rel_b;
    for (auto& x : neg_rel_b.a) x = -x;
    IntMatrix w = hstack(h.matrix, neg_rel_b);
    IntMatrix ker = integer_kernel(w);
    long long a_gens = h.domain.generator_count();
    IntMatrix top(a_gens, ker.cols);
    for (long long i = 0; i < a_gens; ++i)
        for (long long j = 0; j < ker.cols; ++j) top.at(i, j) = ker.at(i, j);
    return hstack(top, relation_columns(h.domain));
}

}  // namespace

bool is_valid_hom(const Hom& h) {
    if (!h.domain.is_canonical() || !h.codomain.is_canonical()) return false;
    if (h.matrix.rows != h.codomain.generator_count()) return false;
    if (h.matrix.cols != h.domain.generator_count()) return false;
    long long tb = static_cast<long long>(h.codomain.torsion.size());
    for (long long j = 0; j < h.matrix.cols; ++j) {
        long long dj = h.domain.generator_order(j);
        if (dj == 0) continue;  // free generator, unconstrained
        for (long long i = 0; i < h.matrix.rows; ++i) {
            __int128 v = static_cast<__int128>(dj) * h.matrix.at(i, j);
            if (i < tb) {
                if (v % h.codomain.torsion[static_cast<size_t>(i)] != 0) return false;
            } else {
                if (v != 0) return false;
            }
        }
    }
    return true;
}

Hom make_hom(AbGroup domain, AbGroup codomain, IntMatrix matrix) {
    Hom h{std::move(domain), std::move(codomain), std::move(matrix)};
    if (!is_valid_hom(h)) throw InvalidArgument("make_hom: matrix does not respect torsion");
    return h;
}

AbGroup kernel(const Hom& h) {
    IntMatrix k = preimage_lattice(h);
    return lattice_quotient(k, relation_columns(h.domain));
}

AbGroup image(const Hom& h) {
    // image(h) = domain / kernel-lattice = Z^gens / preimage lattice
    IntMatrix k = preimage_lattice(h);
    return from_presentation(transpose(k));
}

AbGroup cokernel(const Hom& h) {
    IntMatrix rel_rows = transpose(relation_columns(h.codomain));
    return from_presentation(vstack(rel_rows, transpose(h.matrix)));
}

bool exists_epimorphism(const AbGroup& a, const AbGroup& b) {
    if (!a.is_canonical() || !b.is_canonical())
        throw InvalidArgument("exists_epimorphism: groups must be canonical");
    if (b.free_rank > a.free_rank) return false;
    std::set<long long> primes;
    for (auto [p, e] : primary_decomposition(b).summands) primes.insert(p);
    for (long long p : primes) {
        for (int j = 1;; ++j) {
            long long lb = layer_dim(b, p, j);
            if (lb == b.free_rank && layer_dim(a, p, j) >= lb) break;  // torsion exhausted on both sides
            if (lb > layer_dim(a, p, j)) return false;
            if (torsion_layer_dim(b, p, j) == 0) break;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Brute-force epimorphism oracle

namespace {

struct FiniteTable {
    std::vector<long long> orders;  // invariant factors of B
    long long size = 1;
    std::vector<long long> strides;

    explicit FiniteTable(const AbGroup& b) {
        orders = b.torsion;
        strides.resize(orders.size());
        for (size_t i = 0; i < orders.size(); ++i) {
            strides[i] = size;
            size = checked_mul(size, orders[i]);
        }
    }
    long long add(long long x, long long y) const {
        long long r = 0;
        for (size_t i = 0; i < orders.size(); ++i) {
            long long cx = (x / strides[i]) % orders[i];
            long long cy = (y / strides[i]) % orders[i];
            r += ((cx + cy) % orders[i]) * strides[i];
        }
        return r;
    }
    long long scale(long long m, long long x) const {
        long long r = 0;
        for (size_t i = 0; i < orders.size(); ++i) {
            long long cx = (x / strides[i]) % orders[i];
            r += static_cast<long long>((static_cast<__int128>(m) * cx) % orders[i]) * strides[i];
        }
        return r;
    }
};

struct Bitset {
    std::vector<uint64_t> w;
    explicit Bitset(long long n) : w(static_cast<size_t>((n + 63) / 64), 0) {}
    bool test(long long i) const { return (w[static_cast<size_t>(i >> 6)] >> (i & 63)) & 1; }
    void set(long long i) { w[static_cast<size_t>(i >> 6)] |= uint64_t(1) << (i & 63); }
    long long count() const {
        long long c = 0;
        for (uint64_t x : w) c += __builtin_popcountll(x);
        return c;
    }
    bool operator==(const Bitset& o) const { return w == o.w; }
};

struct BitsetHash {
    size_t operator()(const std::vector<uint64_t>& v) const {
        size_t h = v.size();
        for (uint64_t x : v) h = h * 1000003u ^ std::hash<uint64_t>()(x);
        return h;
    }
};

struct FiniteSearch {
    const FiniteTable& tab;
    std::vector<std::vector<long long>> candidates;  // per domain generator
    const std::function<bool()>& cancel;
    long long steps = 0;
    std::unordered_map<std::vector<uint64_t>, bool, BitsetHash> memo[64];

    FiniteSearch(const FiniteTable& t, const std::function<bool()>& c) : tab(t), cancel(c) {}

    void poll() {
        if (++steps % 4096 == 0 && cancel && cancel())
            throw OracleCancelled("epimorphism oracle cancelled");
    }

    Bitset closure_add(const Bitset& s, long long g) const {
        if (s.test(g)) return s;
        Bitset t = s;
        long long m = g;
        while (m != 0) {
            for (long long i = 0; i < tab.size; ++i)
                if (s.test(i)) t.set(tab.add(i, m));
            m = tab.add(m, g);
        }
        return t;
    }

    bool run(size_t depth, const Bitset& sub) {
        poll();
        if (sub.count() == tab.size) return true;
        if (depth == candidates.size()) return false;
        // Remaining generators can enlarge the subgroup by at most the
        // product of their image orders.
        __int128 cap = sub.count();
        for (size_t i = depth; i < candidates.size(); ++i) {
            cap *= static_cast<long long>(candidates[i].size());
            if (cap >= tab.size) break;
        }
        if (cap < tab.size) return false;
        auto& seen = memo[depth];
        auto it = seen.find(sub.w);
        if (it != seen.end()) return it->second;
        bool ok = false;
        for (long long img : candidates[depth]) {
            if (run(depth + 1, closure_add(sub, img))) { ok = true; break; }
        }
        seen.emplace(sub.w, ok);
        return ok;
    }
};

constexpr long long kFiniteOrderLimit = 4096;
constexpr long long kFreeProbeBox = 8;
constexpr long long kCandidateLimit = 1 << 20;

bool oracle_finite(const AbGroup& a, const AbGroup& b, const std::function<bool()>& cancel) {
    FiniteTable tab(b);
    FiniteSearch search(tab, cancel);
    // Candidate images per generator of A: elements annihilated by the
    // generator's order.
    for (long long j = 0; j < a.generator_count(); ++j) {
        long long d = a.generator_order(j);
        std::vector<long long> c;
        for (long long x = 0; x < tab.size; ++x)
            if (d == 0 || tab.scale(d, x) == 0) c.push_back(x);
        search.candidates.push_back(std::move(c));
    }
    if (search.candidates.size() >= 64)
        throw OracleInapplicable("epimorphism oracle: too many generators");
    Bitset zero(tab.size);
    zero.set(0);
    return search.run(0, zero);
}

bool images_surject(const AbGroup& b, const std::vector<std::vector<long long>>& images) {
    IntMatrix rel = transpose(relation_columns(b));
    IntMatrix img(static_cast<long long>(images.size()), b.generator_count());
    for (size_t i = 0; i < images.size(); ++i)
        for (long long j = 0; j < b.generator_count(); ++j)
            img.at(static_cast<long long>(i), j) = images[i][static_cast<size_t>(j)];
    return from_presentation(vstack(rel, img)).is_trivial();
}

bool oracle_with_free(const AbGroup& a, const AbGroup& b, const std::function<bool()>& cancel) {
    // Enumerate candidate image tuples; free generators of A probe torsion
    // coordinates fully and free coordinates over [-box, box].
    long long tb = static_cast<long long>(b.torsion.size());
    long long torsion_size = 1;
    for (long long d : b.torsion) torsion_size = checked_mul(torsion_size, d);

    std::vector<std::vector<std::vector<long long>>> candidates;  // per gen: list of coord vectors
    __int128 total = 1;
    for (long long j = 0; j < a.generator_count(); ++j) {
        long long d = a.generator_order(j);
        std::vector<std::vector<long long>> c;
        if (d != 0) {
            // torsion generator: free coordinates must vanish
            for (long long x = 0; x < torsion_size; ++x) {
                std::vector<long long> coords(static_cast<size_t>(b.generator_count()), 0);
                long long rem = x;
                bool ok = true;
                for (long long i = 0; i < tb; ++i) {
                    coords[static_cast<size_t>(i)] = rem % b.torsion[static_cast<size_t>(i)];
                    rem /= b.torsion[static_cast<size_t>(i)];
                    if ((static_cast<__int128>(d) * coords[static_cast<size_t>(i)]) %
                            b.torsion[static_cast<size_t>(i)] != 0)
                        ok = false;
                }
                if (ok) c.push_back(std::move(coords));
            }
        } else {
            long long box_size = 2 * kFreeProbeBox + 1;
            long long free_combos = 1;
            for (long long i = 0; i < b.free_rank; ++i) free_combos = checked_mul(free_combos, box_size);
            for (long long x = 0; x < torsion_size; ++x)
                for (long long f = 0; f < free_combos; ++f) {
                    std::vector<long long> coords(static_cast<size_t>(b.generator_count()), 0);
                    long long rem = x;
                    for (long long i = 0; i < tb; ++i) {
                        coords[static_cast<size_t>(i)] = rem % b.torsion[static_cast<size_t>(i)];
                        rem /= b.torsion[static_cast<size_t>(i)];
                    }
                    long long fr = f;
                    for (long long i = 0; i < b.free_rank; ++i) {
                        coords[static_cast<size_t>(tb + i)] = fr % box_size - kFreeProbeBox;
                        fr /= box_size;
                    }
                    c.push_back(std::move(coords));
                }
        }
        total *= static_cast<long long>(c.size());
        if (total > kCandidateLimit)
            throw OracleInapplicable("epimorphism oracle: candidate space exceeds limit");
        candidates.push_back(std::move(c));
    }

    std::vector<size_t> idx(candidates.size(), 0);
    std::vector<std::vector<long long>> picked(candidates.size());
    long long steps = 0;
    for (;;) {
        if (++steps % 1024 == 0 && cancel && cancel())
            throw OracleCancelled("epimorphism oracle cancelled");
        for (size_t i = 0; i < candidates.size(); ++i) picked[i] = candidates[i][idx[i]];
        if (images_surject(b, picked)) return true;
        size_t i = 0;
        for (; i < idx.size(); ++i) {
            if (++idx[i] < candidates[i].size()) break;
            idx[i] = 0;
        }
        if (i == idx.size()) return false;
        if (candidates.empty()) return false;
    }
}

}  // namespace

bool brute_force_epi_oracle(const AbGroup& a, const AbGroup& b, const std::function<bool()>& cancel) {
    if (!a.is_canonical() || !b.is_canonical())
        throw InvalidArgument("epimorphism oracle: groups must be canonical");
    if (b.is_trivial()) return true;
    if (a.is_trivial()) return false;
    if (a.free_rank > 2 || b.free_rank > 2)
        throw OracleInapplicable("epimorphism oracle: free rank above probe limit");
    if (b.is_finite() && a.is_finite()) {
        auto oa = a.order();
        auto ob = b.order();
        if (*oa > kFiniteOrderLimit || *ob > kFiniteOrderLimit)
            throw OracleInapplicable("epimorphism oracle: order above limit");
        return oracle_finite(a, b, cancel);
    }
    if (b.is_finite()) {
        // Finite target, domain has free generators: they may land anywhere
        // in B, so the finite search applies with unrestricted candidates.
        auto ob = b.order();
        if (*ob > kFiniteOrderLimit) throw OracleInapplicable("epimorphism oracle: order above limit");
        return oracle_finite(a, b, cancel);
    }
    return oracle_with_free(a, b, cancel);
}

}  // namespace fiblab::fgab
