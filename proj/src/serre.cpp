#include "fiblab/serre.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "fiblab/modring.hpp"
#include "fiblab/registry.hpp"

namespace fiblab::serre {

using fgab::AbGroup;
using fgab::IntMatrix;

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw InvalidArgument(msg);
}

AbGroup z_mod(long long lambda) {
    // Conventions: Z_0 = Z, Z_1 = 0, negatives by absolute value.
    lambda = std::llabs(lambda);
    if (lambda == 0) return AbGroup::free_group(1);
    return AbGroup::cyclic(lambda);
}

std::string matrix_brackets(const IntMatrix& m) {
    std::string s = "[";
    for (long long r = 0; r < m.rows; ++r) {
        if (r) s += ";";
        for (long long c = 0; c < m.cols; ++c) {
            if (c) s += ",";
            s += std::to_string(m.at(r, c));
        }
    }
    s += "]";
    return s;
}

void log_zero_continuation(BigradedPage& page, long long r, long long p, long long q,
                           long long src_gens) {
    long long p2 = p + r, q2 = q - r + 1;
    if (q2 < 0) return;  // no valid target position
    DifferentialRecord rec;
    rec.r = r;
    rec.p = p;
    rec.q = q;
    rec.p2 = p2;
    rec.q2 = q2;
    rec.matrix = IntMatrix(0, src_gens);
    page.differential_log.push_back(std::move(rec));
}

}  // namespace

std::string BigradedPage::to_dump() const {
    std::ostringstream os;
    for (const auto& [pq, entry] : entries) {
        os << pq.first << ' ' << pq.second << ' ' << entry.group.free_rank << ' ';
        if (entry.group.torsion.empty()) {
            os << '-';
        } else {
            for (size_t i = 0; i < entry.group.torsion.size(); ++i) {
                if (i) os << ',';
                os << entry.group.torsion[i];
            }
        }
        os << '\n';
    }
    for (const DifferentialRecord& rec : differential_log)
        os << "d " << rec.r << ": (" << rec.p << ',' << rec.q << ")->(" << rec.p2 << ','
           << rec.q2 << ") matrix=" << matrix_brackets(rec.matrix) << '\n';
    return os.str();
}

std::vector<std::pair<long long, AbGroup>> loop_cohomology(long long k, long long max_degree) {
    require(k >= 2, "loop_cohomology: k must be >= 2");
    std::vector<std::pair<long long, AbGroup>> out;
    for (long long q = 0; q <= max_degree; q += 2 * k - 1)
        out.emplace_back(q, AbGroup::free_group(1));
    return out;
}

BigradedPage build_E2(const FibrationModel& model, long long max_total_degree) {
    require(model.k >= 2, "build_E2: k must be >= 2");
    require(max_total_degree >= 0, "build_E2: negative truncation");
    BigradedPage page;
    page.page_index = 2;
    page.max_total_degree = max_total_degree;
    long long k = model.k;

    auto put = [&](long long p, long long q, const AbGroup& g) {
        if (g.is_trivial()) return;
        if (p + q > max_total_degree) return;
        page.entries[{p, q}] = PageEntry{g, 1};
    };

    switch (model.kind) {
        case ModelKind::LoopFiberOverX: {
            require(model.n >= 1, "build_E2: n must be >= 1");
            // Base columns {0, 2k, 4k-1} with Z, Z_n, Z; fiber degrees (2k-1)j.
            for (const auto& [q, zq] : loop_cohomology(k, max_total_degree)) {
                put(0, q, zq);
                put(2 * k, q, model.n == 1 ? AbGroup::trivial() : AbGroup::cyclic(model.n));
                put(4 * k - 1, q, zq);
            }
            break;
        }
        case ModelKind::LoopFiberOverTopSphere: {
            for (const auto& [q, zq] : loop_cohomology(k, max_total_degree)) {
                put(0, q, zq);
                put(4 * k - 1, q, zq);
            }
            break;
        }
        case ModelKind::FiberOverBaseSphere: {
            for (const auto& [deg, g] : model.fiber_data) {
                require(deg >= 0, "build_E2: negative fiber degree");
                put(0, deg, g);
                put(2 * k, deg, g);
            }
            break;
        }
    }
    return page;
}

BigradedPage apply_d2k(const BigradedPage& page, const FibrationModel& model) {
    require(model.kind == ModelKind::LoopFiberOverX,
            "apply_d2k: only the loop-fibration-over-X model has this differential");
    if (page.page_index != 2)
        throw InvalidArgument("apply_d2k: expected the E_2 page");
    long long k = model.k;
    long long r = 2 * k;
    BigradedPage next = page;
    next.page_index = 4 * k - 1;

    for (const auto& [pq, entry] : page.entries) {
        auto [p, q] = pq;
        if (p != 0 || q == 0) continue;
        // d_{2k}: (0, (2k-1)j) -> (2k, (2k-1)(j-1)), z_j -> y ox z_{j-1}.
        auto target = std::make_pair(2 * k, q - (2 * k - 1));
        auto it = next.entries.find(target);
        if (it == next.entries.end()) continue;  // n = 1 or truncated target

        DifferentialRecord rec;
        rec.r = r;
        rec.p = 0;
        rec.q = q;
        rec.p2 = target.first;
        rec.q2 = target.second;
        rec.matrix = IntMatrix(1, 1);
        rec.matrix.at(0, 0) = 1;
        next.differential_log.push_back(std::move(rec));

        // Epimorphism Z -> Z_n: kernel nZ survives, target dies.
        next.entries[pq].gen_scale = fgab::checked_mul(entry.gen_scale, model.n);
        next.entries.erase(it);
        // The killed target's outgoing d_{2k} continues by zero.
        log_zero_continuation(next, r, target.first, target.second, 1);
    }
    return next;
}

BigradedPage apply_d4k1(const BigradedPage& page, const FibrationModel& model,
                        long long lambda) {
    require(model.kind == ModelKind::LoopFiberOverX,
            "apply_d4k1: only the loop-fibration-over-X model has this differential");
    long long k = model.k;
    if (page.page_index != 4 * k - 1)
        throw InvalidArgument("apply_d4k1: expected the post-d_{2k} page");
    long long r = 4 * k - 1;
    BigradedPage next = page;
    next.page_index = 4 * k;

    std::vector<std::pair<long long, long long>> sources;
    for (const auto& [pq, entry] : page.entries)
        if (pq.first == 0 && pq.second >= 2 * (2 * k - 1)) sources.push_back(pq);

    for (auto pq : sources) {
        auto [p, q] = pq;
        auto target = std::make_pair(4 * k - 1, q - (4 * k - 2));
        auto it = next.entries.find(target);
        if (it == next.entries.end()) continue;  // truncated target

        DifferentialRecord rec;
        rec.r = r;
        rec.p = 0;
        rec.q = q;
        rec.p2 = target.first;
        rec.q2 = target.second;
        rec.matrix = IntMatrix(1, 1);
        rec.matrix.at(0, 0) = lambda;
        next.differential_log.push_back(std::move(rec));

        // n z_j -> lambda y' ox z_{j-2} on Z -> Z: kernel is 0 unless
        // lambda = 0; cokernel is Z_|lambda|.
        if (lambda != 0) next.entries.erase(pq);
        AbGroup coker = z_mod(lambda);
        if (coker.is_trivial()) {
            next.entries.erase(it);
        } else {
            it->second.group = coker;
        }
        log_zero_continuation(next, r, target.first, target.second, 1);
    }
    return next;
}

Transgression transgression_G(long long k, long long H_f) {
    require(k >= 2, "transgression_G: k must be >= 2");
    return Transgression{{0, 4 * k - 2}, {4 * k - 1, 0}, H_f};
}

std::vector<std::pair<long long, AbGroup>> fiber_homology(long long k, long long lambda,
                                                          long long max_degree) {
    require(k >= 2, "fiber_homology: k must be >= 2");
    std::vector<std::pair<long long, AbGroup>> out;
    if (2 * k - 1 <= max_degree) out.emplace_back(2 * k - 1, AbGroup::free_group(1));
    for (long long j = 2; (2 * k - 1) * j <= max_degree; ++j) {
        AbGroup g = z_mod(lambda);
        if (!g.is_trivial()) out.emplace_back((2 * k - 1) * j, g);
    }
    return out;
}

std::vector<std::pair<long long, AbGroup>> fiber_cohomology(long long k, long long lambda,
                                                            long long max_degree) {
    // Universal coefficients: H^i = free(H_i) + torsion(H_{i-1}).
    std::map<long long, AbGroup> homology;
    homology[0] = AbGroup::free_group(1);
    for (auto& [deg, g] : fiber_homology(k, lambda, max_degree)) homology[deg] = g;

    std::vector<std::pair<long long, AbGroup>> out;
    for (long long i = 0; i <= max_degree; ++i) {
        AbGroup h;
        auto hi = homology.find(i);
        if (hi != homology.end()) h.free_rank = hi->second.free_rank;
        auto lower = homology.find(i - 1);
        if (lower != homology.end()) h.torsion = lower->second.torsion;
        if (!h.is_trivial()) out.emplace_back(i, h);
    }
    return out;
}

std::map<long long, AbGroup> einf_cohomology(const BigradedPage& page) {
    std::map<long long, AbGroup> out;
    for (const auto& [pq, entry] : page.entries) {
        long long d = pq.first + pq.second;
        if (out.count(d))
            throw InternalInconsistency(
                "einf_cohomology: two entries on one anti-diagonal of a two-column page");
        out[d] = entry.group;
    }
    return out;
}

void check_dd_zero(const BigradedPage& page) {
    const auto& log = page.differential_log;
    for (const DifferentialRecord& a : log)
        for (const DifferentialRecord& b : log) {
            if (a.r != b.r) continue;
            if (a.p2 != b.p || a.q2 != b.q) continue;
            IntMatrix prod = fgab::matmul(b.matrix, a.matrix);
            for (long long x : prod.a)
                if (x != 0)
                    throw InternalInconsistency("check_dd_zero: nonzero composite differential");
        }
}

long long hopf_action(long long H0, long long n, long long Ha) {
    return fgab::checked_add(fgab::checked_mul(fgab::checked_mul(n, n), Ha), H0);
}

long long lambda_of_extension(long long H0, long long n) {
    require(n >= 1, "lambda_of_extension: n must be >= 1");
    if (H0 % n != 0)
        throw NotDivisible("lambda_of_extension: Hopf invariant " + std::to_string(H0) +
                           " is not a multiple of " + std::to_string(n));
    return H0 / n;
}

std::optional<HopfWitness> normalize_hopf(long long k, long long n, long long lambda) {
    require(k >= 2, "normalize_hopf: k must be >= 2");
    require(n >= 1, "normalize_hopf: n must be >= 1");
    long long n2 = registry::coefficient_modulus(k, n);
    long long stride = registry::hopf_image_stride(k);
    // Coefficient modulus 1: every class is the zero class and h = sign
    // solves the witness equation outright (stride is 1 whenever n2 is).
    if (n2 == 1) return HopfWitness{1, 1, 1, 0};

    long long base = modring::mod_reduce(lambda, n2);
    std::vector<long long> lifts = {base};
    long long other = modring::mod_reduce(base + n, n2);
    if (other != base) lifts.push_back(other);

    for (long long lift : lifts)
        for (long long u = 1; u < n2; ++u) {
            if (std::gcd(u, n2) != 1) continue;
            for (long long sign : {1ll, -1ll}) {
                long long lhs = fgab::checked_mul(fgab::checked_mul(u, u), lift);
                long long num = fgab::checked_add(sign, -lhs);
                if (num % n != 0) continue;
                long long h = num / n;
                if (stride != 1 && h % stride != 0) continue;
                return HopfWitness{u, h, sign, lift};
            }
        }
    return std::nullopt;
}

bool sphere_fiber_check(long long, long long lambda_final) {
    return std::llabs(lambda_final) == 1;
}

}  // namespace fiblab::serre
