// fiblab: command-line front end for the fibration classification toolkit.
//
// Output is a human table on a terminal, JSON when piped or with --json, CSV
// with --csv. Registry precedence: --registry flag, then FIBLAB_REGISTRY
// environment variable, then the bundled default. Exit codes: 0 success,
// 1 self-check or data failure, 2 usage error, 3 internal inconsistency.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fiblab/bundlecmp.hpp"
#include "fiblab/classifier.hpp"
#include "fiblab/errors.hpp"
#include "fiblab/fgab.hpp"
#include "fiblab/modring.hpp"
#include "fiblab/registry.hpp"
#include "fiblab/report.hpp"
#include "fiblab/serre.hpp"

using json = nlohmann::json;
using fiblab::report::Report;

namespace {

enum class OutMode { Human, Json, Csv };

struct CommandOutput {
    Report report;
    std::string human;
    std::vector<std::string> csv_header;
    std::vector<std::vector<std::string>> csv_rows;
    int exit_code = 0;
};

std::string resolve_registry_path(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("FIBLAB_REGISTRY"); env && *env) return env;
    return FIBLAB_DEFAULT_REGISTRY;
}

void print_csv(std::ostream& os, const CommandOutput& out) {
    auto join = [&](const std::vector<std::string>& cells) {
        std::string line;
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) line += ',';
            line += cells[i];
        }
        return line;
    };
    os << join(out.csv_header) << "\n";
    for (const auto& row : out.csv_rows) os << join(row) << "\n";
}

void emit(const CommandOutput& out, OutMode mode) {
    switch (mode) {
        case OutMode::Json:
            std::cout << fiblab::report::to_json(out.report).dump(2) << "\n";
            break;
        case OutMode::Csv: print_csv(std::cout, out); break;
        case OutMode::Human: std::cout << out.human; break;
    }
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

// ---------------------------------------------------------------- classify

CommandOutput cmd_classify(long long k, long long n, long long a, bool gamma_flag) {
    auto f = fiblab::classifier::make_attaching_class(k, n, a);
    auto m = fiblab::classifier::whitehead_coefficient(f);
    bool realizable = fiblab::classifier::is_fibration(f);
    bool cond1 = fiblab::classifier::condition_I(f);
    bool cond2 = fiblab::classifier::condition_II(fiblab::classifier::linking_form_of(f));
    long long lambda = fiblab::modring::mod_reduce(m.value, n);
    auto witness = fiblab::serre::normalize_hopf(k, n, lambda);

    bool agree = (realizable == (cond1 && cond2)) && (realizable == witness.has_value());
    if (!agree)
        throw fiblab::InternalInconsistency(
            "classify: decision paths disagree at k=" + std::to_string(k) +
            " n=" + std::to_string(n) + " a=" + std::to_string(a) +
            ": is_fibration=" + bool_str(realizable) +
            " conditions=" + bool_str(cond1 && cond2) +
            " witness=" + bool_str(witness.has_value()));

    CommandOutput out;
    out.report.command = "classify";
    out.report.params = {{"k", k}, {"n", n}, {"a", a}, {"gamma", gamma_flag}};
    json w = nullptr;
    if (witness)
        w = {{"unit", witness->unit},
             {"h", witness->h},
             {"sign", witness->sign},
             {"lambda_lift", witness->lambda_lift}};
    out.report.result = {{"k", k},
                         {"n", n},
                         {"a", a},
                         {"coefficient", {{"value", m.value}, {"modulus", m.modulus}}},
                         {"realizable", realizable},
                         {"condition_I", cond1},
                         {"condition_II", cond2},
                         {"hopf_witness", w},
                         {"paths_agree", true}};
    if (gamma_flag)
        out.report.result["gamma_independent"] = true;
    out.report.citations = {fiblab::registry::attaching_kernel_image(k, n).source};

    out.csv_header = {"k", "n", "a", "m", "m_modulus", "realizable"};
    out.csv_rows = {{std::to_string(k), std::to_string(n), std::to_string(a),
                     std::to_string(m.value), std::to_string(m.modulus),
                     bool_str(realizable)}};

    std::ostringstream h;
    h << "classify k=" << k << " n=" << n << " a=" << a << "\n"
      << "  coefficient m = " << m.value << " (mod " << m.modulus << ")\n"
      << "  realizable as a fibration: " << bool_str(realizable) << "\n"
      << "  condition I: " << bool_str(cond1) << "   condition II: " << bool_str(cond2)
      << "\n";
    if (witness)
        h << "  hopf witness: unit=" << witness->unit << " h=" << witness->h
          << " sign=" << (witness->sign > 0 ? "+" : "-")
          << " lift=" << witness->lambda_lift << "\n";
    else
        h << "  hopf witness: none\n";
    if (gamma_flag)
        h << "  gamma component: ignored by the decision (provably independent)\n";
    h << "  all three decision paths agree\n";
    out.human = h.str();
    return out;
}

// ------------------------------------------------------------------ gtable

CommandOutput cmd_gtable(long long k, long long n_min, long long n_max) {
    if (n_min < 1 || n_min > n_max)
        throw fiblab::InvalidArgument("gtable: need 1 <= n-min <= n-max");
    CommandOutput out;
    out.report.command = "gtable";
    out.report.params = {{"k", k}, {"n_min", n_min}, {"n_max", n_max}};
    out.csv_header = {"n", "gcd", "star", "count"};

    json rows = json::array();
    for (long long n = n_min; n <= n_max; ++n) {
        auto row = fiblab::classifier::homotopy_type_count(k, n);
        json jr = {{"n", n}, {"gcd", row.gcd_value}, {"star", row.star}};
        std::string count_text;
        if (row.count) {
            jr["count"] = *row.count;
            count_text = std::to_string(*row.count);
        } else {
            jr["count"] = nullptr;
            jr["uncovered_reason"] = row.uncovered_reason;
            count_text = "Uncovered";
        }
        rows.push_back(jr);
        out.csv_rows.push_back({std::to_string(n), std::to_string(row.gcd_value),
                                bool_str(row.star), count_text});
    }
    std::ostringstream h;
    h << "homotopy-type counts, k=" << k << "\n";
    h << "     n   gcd  star  count\n";
    for (const auto& jr : rows) {
        char line[128];
        std::string count_text = jr["count"].is_null()
                                     ? std::string("Uncovered")
                                     : std::to_string(jr["count"].get<long long>());
        std::snprintf(line, sizeof line, "  %4lld  %4lld  %4s  %s\n",
                      jr["n"].get<long long>(), jr["gcd"].get<long long>(),
                      jr["star"].get<bool>() ? "yes" : "no", count_text.c_str());
        h << line;
    }
    out.human = h.str();

    out.report.result = {{"k", k}, {"rows", rows}};
    out.report.citations = {
        "homotopy-type counting table keyed by gcd(c_k, n) and the star condition"};
    return out;
}

// -------------------------------------------------------- count-realizable

CommandOutput cmd_count_realizable(long long k, long long n) {
    long long count = fiblab::classifier::count_realizable(k, n);
    long long modulus = fiblab::registry::coefficient_modulus(k, n);
    CommandOutput out;
    out.report.command = "count-realizable";
    out.report.params = {{"k", k}, {"n", n}};
    out.report.result = {{"k", k}, {"n", n}, {"modulus", modulus}, {"count", count}};
    out.report.citations = {fiblab::registry::attaching_kernel_image(k, n).source};
    out.csv_header = {"k", "n", "modulus", "count"};
    out.csv_rows = {{std::to_string(k), std::to_string(n), std::to_string(modulus),
                     std::to_string(count)}};
    std::ostringstream h;
    h << "count-realizable k=" << k << " n=" << n << "\n"
      << "  realizable a-coordinates mod " << modulus << ": " << count << "\n";
    out.human = h.str();
    return out;
}

// -------------------------------------------------------------------- star

CommandOutput cmd_star(long long n_min, long long n_max) {
    if (n_min < 1 || n_min > n_max)
        throw fiblab::InvalidArgument("star: need 1 <= n-min <= n-max");
    CommandOutput out;
    out.report.command = "star";
    out.report.params = {{"n_min", n_min}, {"n_max", n_max}};
    out.csv_header = {"n", "star"};
    json rows = json::array();
    std::ostringstream h;
    h << "star condition (4 does not divide n; every odd prime factor is 1 mod 4)\n";
    for (long long n = n_min; n <= n_max; ++n) {
        bool s = fiblab::classifier::star_condition(n);
        rows.push_back({{"n", n}, {"star", s}});
        out.csv_rows.push_back({std::to_string(n), bool_str(s)});
        h << "  n=" << n << ": " << bool_str(s) << "\n";
    }
    out.report.result = {{"rows", rows}};
    out.report.citations = {
        "star condition is equivalent to -1 being a unit square mod n"};
    out.human = h.str();
    return out;
}

// ------------------------------------------------------------------- fiber

CommandOutput cmd_fiber(long long k, long long lambda, long long max_degree) {
    auto hom = fiblab::serre::fiber_homology(k, lambda, max_degree);
    bool sphere = fiblab::serre::sphere_fiber_check(k, lambda);
    CommandOutput out;
    out.report.command = "fiber";
    out.report.params = {{"k", k}, {"lambda", lambda}, {"max_degree", max_degree}};
    json rows = json::array();
    out.csv_header = {"degree", "group"};
    std::ostringstream h;
    h << "reduced fiber homology, k=" << k << " lambda=" << lambda << " (degrees <= "
      << max_degree << ")\n";
    for (const auto& [deg, g] : hom) {
        rows.push_back({{"degree", deg}, {"group", fiblab::report::group_json(g)}});
        out.csv_rows.push_back({std::to_string(deg), g.to_string()});
        h << "  degree " << deg << ": " << g.to_string() << "\n";
    }
    h << "  homology (2k-1)-sphere: " << bool_str(sphere) << "\n";
    out.report.result = {{"homology", rows}, {"sphere_fiber", sphere}};
    out.report.citations = {
        "two-column spectral sequence of the loop fibration over the three-cell base"};
    out.human = h.str();
    return out;
}

// ----------------------------------------------------------------- ss-page

CommandOutput cmd_ss_page(const std::string& model_name, long long k, long long n,
                          long long lambda, long long hopf, long long max_degree,
                          const std::string& page_name) {
    fiblab::serre::FibrationModel model;
    model.k = k;
    model.n = n;
    model.hopf = hopf;
    if (model_name == "loop-x") {
        model.kind = fiblab::serre::ModelKind::LoopFiberOverX;
    } else if (model_name == "loop-top") {
        model.kind = fiblab::serre::ModelKind::LoopFiberOverTopSphere;
    } else if (model_name == "fiber-base") {
        model.kind = fiblab::serre::ModelKind::FiberOverBaseSphere;
        model.fiber_data = fiblab::serre::fiber_cohomology(k, lambda, max_degree);
    } else {
        throw fiblab::InvalidArgument("ss-page: unknown model '" + model_name + "'");
    }

    fiblab::serre::BigradedPage page = fiblab::serre::build_E2(model, max_degree);
    if (page_name != "2" && model.kind != fiblab::serre::ModelKind::LoopFiberOverX)
        throw fiblab::InvalidArgument(
            "ss-page: differentials are applied only for the loop-x model; "
            "use --page 2 for this model");
    if (page_name == "mid" || page_name == "infinity")
        page = fiblab::serre::apply_d2k(page, model);
    if (page_name == "infinity")
        page = fiblab::serre::apply_d4k1(page, model, lambda);
    else if (page_name != "2" && page_name != "mid")
        throw fiblab::InvalidArgument("ss-page: --page must be 2, mid or infinity");
    fiblab::serre::check_dd_zero(page);

    CommandOutput out;
    out.report.command = "ss-page";
    out.report.params = {{"model", model_name}, {"k", k},     {"n", n},
                         {"lambda", lambda},    {"hopf", hopf}, {"max", max_degree},
                         {"page", page_name}};
    json entries = json::array();
    out.csv_header = {"p", "q", "group", "gen_scale"};
    for (const auto& [pq, entry] : page.entries) {
        entries.push_back({{"p", pq.first},
                           {"q", pq.second},
                           {"group", fiblab::report::group_json(entry.group)},
                           {"gen_scale", entry.gen_scale}});
        out.csv_rows.push_back({std::to_string(pq.first), std::to_string(pq.second),
                                entry.group.to_string(),
                                std::to_string(entry.gen_scale)});
    }
    json diffs = json::array();
    for (const auto& d : page.differential_log)
        diffs.push_back({{"r", d.r},
                         {"p", d.p},
                         {"q", d.q},
                         {"p2", d.p2},
                         {"q2", d.q2},
                         {"matrix", d.matrix.to_text()}});
    out.report.result = {{"page_index", page.page_index},
                         {"entries", entries},
                         {"differentials", diffs},
                         {"dump", page.to_dump()}};
    if (page_name == "infinity") {
        json coh = json::array();
        for (const auto& [deg, g] : fiblab::serre::einf_cohomology(page))
            coh.push_back({{"degree", deg}, {"group", fiblab::report::group_json(g)}});
        out.report.result["cohomology_by_degree"] = coh;
    }
    if (model.kind == fiblab::serre::ModelKind::LoopFiberOverTopSphere) {
        auto t = fiblab::serre::transgression_G(k, hopf);
        out.report.result["transgression"] = {
            {"source", {t.source.first, t.source.second}},
            {"target", {t.target.first, t.target.second}},
            {"multiplier", t.multiplier}};
    }
    out.report.citations = {
        "two-column spectral sequence with multiplication-type and transgressive "
        "differentials"};

    std::ostringstream h;
    h << "spectral sequence page " << page.page_index << " (model " << model_name
      << ", k=" << k << ", n=" << n << ", lambda=" << lambda << ", total degree <= "
      << max_degree << ")\n"
      << page.to_dump();
    out.human = h.str();
    return out;
}

// --------------------------------------------------------------- bundlecmp

CommandOutput cmd_bundlecmp(long long k, const std::string& registry_path) {
    auto reg = fiblab::registry::Registry::load_file(registry_path);
    auto v = fiblab::bundlecmp::j_verdict(k, reg);
    CommandOutput out;
    out.report.command = "bundlecmp";
    out.report.params = {{"k", k}};
    out.report.result = {{"k", v.k},
                         {"verdict", fiblab::bundlecmp::to_string(v.verdict)},
                         {"obstruction_prime",
                          v.obstruction_prime ? json(*v.obstruction_prime) : json(nullptr)},
                         {"detail", v.detail},
                         {"notes", v.notes}};
    out.report.citations = v.citations;
    out.csv_header = {"k", "verdict", "obstruction_prime", "detail"};
    out.csv_rows = {{std::to_string(k), fiblab::bundlecmp::to_string(v.verdict),
                     v.obstruction_prime ? std::to_string(*v.obstruction_prime) : "",
                     v.detail}};
    std::ostringstream h;
    h << "bundle comparison, k=" << k << "\n  verdict: "
      << fiblab::bundlecmp::to_string(v.verdict) << "\n";
    if (v.obstruction_prime) h << "  obstruction prime: " << *v.obstruction_prime << "\n";
    h << "  " << v.detail << "\n";
    for (const auto& note : v.notes) h << "  - " << note << "\n";
    for (const auto& c : v.citations) h << "  cite: " << c << "\n";
    out.human = h.str();
    return out;
}

// --------------------------------------------------------------- selfcheck

struct SuiteResult {
    std::string name;
    long long cases = 0;
    bool ok = true;
    std::string detail;
};

void enumerate_torsion_groups(long long max_order, std::vector<fiblab::fgab::AbGroup>& out) {
    // All finite abelian groups of order 2..max_order: per prime, a partition
    // of the exponent; combine multiplicatively.
    for (long long m = 2; m <= max_order; ++m) {
        auto f = fiblab::modring::factorize(m);
        std::vector<std::vector<std::vector<int>>> parts_per_prime;
        for (auto [p, e] : f) {
            std::vector<std::vector<int>> parts;
            std::vector<int> cur;
            // partitions of e into nonincreasing positive parts
            std::function<void(int, int)> rec = [&](int rest, int max_part) {
                if (rest == 0) {
                    parts.push_back(cur);
                    return;
                }
                for (int part = std::min(rest, max_part); part >= 1; --part) {
                    cur.push_back(part);
                    rec(rest - part, part);
                    cur.pop_back();
                }
            };
            rec(e, e);
            parts_per_prime.push_back(parts);
        }
        std::vector<size_t> idx(parts_per_prime.size(), 0);
        while (true) {
            std::vector<long long> summands;
            for (size_t i = 0; i < parts_per_prime.size(); ++i) {
                long long p = f[i].first;
                for (int e : parts_per_prime[i][idx[i]]) {
                    long long pe = 1;
                    for (int t = 0; t < e; ++t) pe *= p;
                    summands.push_back(pe);
                }
            }
            out.push_back(fiblab::fgab::AbGroup::from_cyclic_summands(summands));
            size_t i = 0;
            for (; i < idx.size(); ++i) {
                if (++idx[i] < parts_per_prime[i].size()) break;
                idx[i] = 0;
            }
            if (i == idx.size()) break;
        }
    }
}

std::map<long long, fiblab::fgab::AbGroup> expected_final_cohomology(long long k,
                                                                     long long lambda,
                                                                     long long max) {
    // Survivors of the two differentials: Z in degrees 0 and 2k-1; the
    // transgressive cokernel Z_|lambda| one degree above each fiber torsion
    // degree; for lambda = 0 the untouched sources stay as well.
    std::map<long long, fiblab::fgab::AbGroup> out;
    using fiblab::fgab::AbGroup;
    out[0] = AbGroup::free_group(1);
    long long c = 2 * k - 1;
    if (c <= max) out[c] = AbGroup::free_group(1);
    for (long long j = 2; c * j + 1 <= max; ++j) {
        if (lambda == 0)
            out[c * j + 1] = AbGroup::free_group(1);
        else if (std::llabs(lambda) > 1)
            out[c * j + 1] = AbGroup::cyclic(std::llabs(lambda));
    }
    if (lambda == 0)
        for (long long j = 2; c * j <= max; ++j) out[c * j] = AbGroup::free_group(1);
    return out;
}

bool spectral_replay_case(long long k, long long n, long long lambda,
                          std::string& detail) {
    using namespace fiblab::serre;
    long long max = (2 * k - 1) * 4 + 2;
    FibrationModel model{ModelKind::LoopFiberOverX, k, n, 0, {}};
    BigradedPage page = build_E2(model, max);
    page = apply_d2k(page, model);
    page = apply_d4k1(page, model, lambda);
    check_dd_zero(page);

    auto got = einf_cohomology(page);
    auto want = expected_final_cohomology(k, lambda, max);
    // Truncation guard: entries at total degree max may lack an applied
    // outgoing differential, so compare below it.
    auto restrict_below = [&](std::map<long long, fiblab::fgab::AbGroup>& m) {
        for (auto it = m.begin(); it != m.end();)
            it = (it->first >= max) ? m.erase(it) : std::next(it);
    };
    restrict_below(got);
    restrict_below(want);
    if (got != want) {
        detail = "E_infinity mismatch at k=" + std::to_string(k) +
                 " n=" + std::to_string(n) + " lambda=" + std::to_string(lambda);
        return false;
    }
    if (lambda != 0) {
        // For nonzero lambda the survivor set is exactly the universal
        // coefficient dual of the fiber homology.
        std::map<long long, fiblab::fgab::AbGroup> uct;
        for (const auto& [deg, g] : fiber_cohomology(k, lambda, max))
            uct[deg] = g;
        restrict_below(uct);
        if (uct != want) {
            detail = "fiber cohomology mismatch at k=" + std::to_string(k) +
                     " lambda=" + std::to_string(lambda);
            return false;
        }
    }
    return true;
}

CommandOutput cmd_selfcheck(long long budget_seconds, const std::string& registry_path) {
    CommandOutput out;
    out.report.command = "selfcheck";
    out.report.params = {{"budget_seconds", budget_seconds}};
    out.report.citations = {"oracle-agreement suites; see README for the suite list"};
    out.csv_header = {"suite", "cases", "status"};

    if (budget_seconds <= 0) {
        out.report.result = {{"skipped", true},
                             {"warning", "budget is zero; all suites skipped"}};
        out.csv_rows = {{"(all)", "0", "skipped"}};
        out.human = "selfcheck: skipped (budget 0)\n";
        return out;
    }

    bool full = budget_seconds >= 20;
    auto t0 = std::chrono::steady_clock::now();
    std::vector<SuiteResult> suites;

    {
        SuiteResult s{"registry_and_bundle_verdicts"};
        try {
            auto reg = fiblab::registry::Registry::load_file(registry_path);
            for (long long k = 2; k <= 6; ++k) {
                auto v = fiblab::bundlecmp::j_verdict(k, reg);
                ++s.cases;
                if (v.verdict == fiblab::bundlecmp::Verdict::Inconclusive) {
                    s.ok = false;
                    s.detail = "k=" + std::to_string(k) + ": " + v.detail;
                    break;
                }
            }
        } catch (const fiblab::Error& e) {
            s.ok = false;
            s.detail = e.what();
        }
        suites.push_back(s);
    }

    {
        SuiteResult s{"pm_unit_squares_crt"};
        long long limit = full ? 1500 : 400;
        for (long long n = 1; n <= limit && s.ok; ++n) {
            auto set = fiblab::modring::pm_unit_squares(n);
            for (long long v = 0; v < n; ++v) {
                bool brute = set.contains(v);
                bool fast =
                    fiblab::modring::is_pm_unit_square(fiblab::modring::make_residue(v, n));
                ++s.cases;
                if (brute != fast) {
                    s.ok = false;
                    s.detail = "disagreement at n=" + std::to_string(n) +
                               " v=" + std::to_string(v);
                    break;
                }
            }
        }
        suites.push_back(s);
    }

    {
        SuiteResult s{"condition_II_oracle"};
        long long limit = full ? 120 : 60;
        for (long long n = 1; n <= limit && s.ok; ++n)
            for (long long v = 0; v < n; ++v) {
                fiblab::classifier::LinkingFormClass form{
                    n, fiblab::modring::make_residue(v, n), true};
                bool fast = fiblab::classifier::condition_II(form);
                bool slow = fiblab::classifier::condition_II_oracle(form);
                ++s.cases;
                if (fast != slow) {
                    s.ok = false;
                    s.detail = "disagreement at n=" + std::to_string(n) +
                               " v=" + std::to_string(v);
                    break;
                }
            }
        suites.push_back(s);
    }

    {
        SuiteResult s{"epi_oracle"};
        long long limit = full ? 32 : 20;
        std::vector<fiblab::fgab::AbGroup> groups;
        enumerate_torsion_groups(limit, groups);
        for (const auto& a : groups) {
            for (const auto& b : groups) {
                bool fast = fiblab::fgab::exists_epimorphism(a, b);
                bool slow = fiblab::fgab::brute_force_epi_oracle(a, b);
                ++s.cases;
                if (fast != slow) {
                    s.ok = false;
                    s.detail = "disagreement at A=" + a.to_string() +
                               " B=" + b.to_string();
                    break;
                }
            }
            if (!s.ok) break;
        }
        suites.push_back(s);
    }

    {
        SuiteResult s{"triple_agreement"};
        long long limit = full ? 120 : 40;
        for (long long k = 2; k <= 6 && s.ok; ++k)
            for (long long n = 1; n <= limit && s.ok; ++n) {
                long long n2 = fiblab::registry::coefficient_modulus(k, n);
                for (long long a = 0; a < n2; ++a) {
                    auto f = fiblab::classifier::make_attaching_class(k, n, a);
                    bool r1 = fiblab::classifier::is_fibration(f);
                    bool r2 = fiblab::classifier::condition_I(f) &&
                              fiblab::classifier::condition_II(
                                  fiblab::classifier::linking_form_of(f));
                    auto m = fiblab::classifier::whitehead_coefficient(f);
                    bool r3 = fiblab::serre::normalize_hopf(
                                  k, n, fiblab::modring::mod_reduce(m.value, n))
                                  .has_value();
                    ++s.cases;
                    if (r1 != r2 || r1 != r3) {
                        s.ok = false;
                        s.detail = "disagreement at k=" + std::to_string(k) +
                                   " n=" + std::to_string(n) + " a=" + std::to_string(a);
                        break;
                    }
                }
            }
        suites.push_back(s);
    }

    {
        SuiteResult s{"spectral_replay"};
        for (long long k : {2, 3})
            for (long long n : {2, 3, 4})
                for (long long lambda = 0; lambda <= 3 && s.ok; ++lambda) {
                    ++s.cases;
                    std::string detail;
                    if (!spectral_replay_case(k, n, lambda, detail)) {
                        s.ok = false;
                        s.detail = detail;
                    }
                }
        suites.push_back(s);
    }

    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - t0)
                       .count();

    bool all_ok = true;
    json jsuites = json::array();
    std::ostringstream h;
    h << "selfcheck (budget " << budget_seconds << "s, "
      << (full ? "full" : "small") << " tier)\n";
    for (const auto& s : suites) {
        all_ok = all_ok && s.ok;
        json js = {{"name", s.name}, {"cases", s.cases}, {"status", s.ok ? "ok" : "fail"}};
        if (!s.ok) js["detail"] = s.detail;
        jsuites.push_back(js);
        out.csv_rows.push_back({s.name, std::to_string(s.cases), s.ok ? "ok" : "fail"});
        h << "  " << s.name << ": " << (s.ok ? "ok" : ("FAIL - " + s.detail)) << " ("
          << s.cases << " cases)\n";
    }
    h << "  elapsed: " << elapsed << " ms\n";
    out.report.result = {{"skipped", false},
                         {"suites", jsuites},
                         {"elapsed_ms", elapsed},
                         {"ok", all_ok}};
    out.human = h.str();
    out.exit_code = all_ok ? 0 : 1;
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fiblab: arithmetic classification of odd-sphere fibrations over "
                 "even spheres"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string registry_flag;
    bool force_json = false, force_csv = false;
    app.add_option("--registry", registry_flag,
                   "registry data file (default: FIBLAB_REGISTRY, then bundled)");
    auto* jflag = app.add_flag("--json", force_json, "emit JSON");
    auto* cflag = app.add_flag("--csv", force_csv, "emit CSV");
    jflag->excludes(cflag);

    long long k = 2, n = 1, a = 0, gamma_n = 0;
    bool gamma_flag = false;
    long long n_min = -1, n_max = -1;
    long long lambda = 0, hopf = 0, max_degree = -1, budget = 30;
    std::string model_name = "loop-x", page_name = "infinity";

    auto* classify = app.add_subcommand("classify", "decide realizability of a descriptor");
    classify->add_option("--k", k, "half-dimension parameter, 2..6")->required();
    classify->add_option("--n", n, "Moore-space order, >= 1")->required();
    classify->add_option("--a", a, "descriptor coordinate")->required();
    classify->add_flag("--gamma", gamma_flag,
                       "note that a torsion component is present (decision-independent)");

    auto* gtable = app.add_subcommand("gtable", "homotopy-type counting table");
    gtable->add_option("--k", k)->required();
    gtable->add_option("--n", gamma_n, "single n (shorthand for --n-min = --n-max)");
    gtable->add_option("--n-min", n_min);
    gtable->add_option("--n-max", n_max);

    auto* countr = app.add_subcommand("count-realizable", "count realizable coordinates");
    countr->add_option("--k", k)->required();
    countr->add_option("--n", n)->required();

    auto* star = app.add_subcommand("star", "star condition for n or a range");
    star->add_option("--n", gamma_n, "single n");
    star->add_option("--n-min", n_min);
    star->add_option("--n-max", n_max);

    auto* fiber = app.add_subcommand("fiber", "reduced fiber homology table");
    fiber->add_option("--k", k)->required();
    fiber->add_option("--lambda", lambda)->required();
    fiber->add_option("--max", max_degree, "maximum degree (default 4(2k-1)+1)");

    auto* sspage = app.add_subcommand("ss-page", "spectral sequence page dump");
    sspage->add_option("--k", k)->required();
    sspage->add_option("--n", n, "Moore-space order (loop-x model)");
    sspage->add_option("--lambda", lambda, "transgression multiplier");
    sspage->add_option("--hopf", hopf, "Hopf invariant (loop-top transgression)");
    sspage->add_option("--max", max_degree, "maximum total degree (default 4(2k-1)+2)");
    sspage->add_option("--model", model_name, "loop-x | loop-top | fiber-base");
    sspage->add_option("--page", page_name, "2 | mid | infinity");

    auto* bundle = app.add_subcommand("bundlecmp", "bundle-versus-fibration verdict");
    bundle->add_option("--k", k)->required();

    auto* selfcheck = app.add_subcommand("selfcheck", "run oracle-agreement suites");
    selfcheck->add_option("--budget", budget, "time budget in seconds (0 skips)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    OutMode mode = OutMode::Human;
    if (force_json)
        mode = OutMode::Json;
    else if (force_csv)
        mode = OutMode::Csv;
    else if (!isatty(fileno(stdout)))
        mode = OutMode::Json;

    try {
        CommandOutput out;
        if (app.got_subcommand(classify)) {
            out = cmd_classify(k, n, a, gamma_flag);
        } else if (app.got_subcommand(gtable)) {
            if (gtable->count("--n")) n_min = n_max = gamma_n;
            if (n_min < 0 && n_max < 0) { n_min = 2; n_max = 20; }
            if (n_min < 0) n_min = 2;
            if (n_max < 0) throw fiblab::InvalidArgument("gtable: missing --n-max");
            out = cmd_gtable(k, n_min, n_max);
        } else if (app.got_subcommand(countr)) {
            out = cmd_count_realizable(k, n);
        } else if (app.got_subcommand(star)) {
            if (star->count("--n")) n_min = n_max = gamma_n;
            if (n_min < 0 || n_max < 0)
                throw fiblab::InvalidArgument("star: need --n or --n-min/--n-max");
            out = cmd_star(n_min, n_max);
        } else if (app.got_subcommand(fiber)) {
            if (max_degree < 0) max_degree = 4 * (2 * k - 1) + 1;
            out = cmd_fiber(k, lambda, max_degree);
        } else if (app.got_subcommand(sspage)) {
            if (max_degree < 0) max_degree = 4 * (2 * k - 1) + 2;
            out = cmd_ss_page(model_name, k, n, lambda, hopf, max_degree, page_name);
        } else if (app.got_subcommand(bundle)) {
            out = cmd_bundlecmp(k, resolve_registry_path(registry_flag));
        } else if (app.got_subcommand(selfcheck)) {
            out = cmd_selfcheck(budget, resolve_registry_path(registry_flag));
        }
        emit(out, mode);
        return out.exit_code;
    } catch (const fiblab::InvalidArgument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const fiblab::NotDivisible& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const fiblab::InternalInconsistency& e) {
        std::cerr << "internal inconsistency: " << e.what() << "\n";
        return 3;
    } catch (const fiblab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
