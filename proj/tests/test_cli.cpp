#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

#include "fiblab/report.hpp"

using json = nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args, const std::string& env_prefix = "") {
    std::string cmd = env_prefix + " \"" + std::string(FIBLAB_CLI_PATH) + "\" " + args +
                      " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

json parse_report(const RunResult& r) {
    REQUIRE_MESSAGE(!r.out.empty(), "no output");
    json j = json::parse(r.out);
    // wire shape survives a full decode/encode cycle
    CHECK(fiblab::report::to_json(fiblab::report::from_json(j)) == j);
    CHECK(j["tool_version"] == "fiblab 0.1.0");
    return j;
}

std::string temp_file(const std::string& name, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    out.close();
    return path.string();
}

}  // namespace

TEST_CASE("classify: piped output is a JSON report") {
    RunResult r = run("classify --k 2 --n 12 --a 1");
    CHECK(r.exit_code == 0);
    json j = parse_report(r);
    CHECK(j["command"] == "classify");
    CHECK(j["params"]["k"] == 2);
    CHECK(j["result"]["realizable"] == true);
    CHECK(j["result"]["condition_I"] == true);
    CHECK(j["result"]["condition_II"] == true);
    CHECK(j["result"]["paths_agree"] == true);
    CHECK(!j["result"]["hopf_witness"].is_null());
    CHECK(j["citations"].size() == 1);
}

TEST_CASE("classify: negative and unit cases") {
    json no = parse_report(run("classify --k 3 --n 3 --a 0"));
    CHECK(no["result"]["realizable"] == false);
    CHECK(no["result"]["hopf_witness"].is_null());

    json yes = parse_report(run("classify --k 2 --n 1 --a 0"));
    CHECK(yes["result"]["realizable"] == true);

    json gamma = parse_report(run("classify --k 2 --n 12 --a 1 --gamma"));
    CHECK(gamma["result"]["gamma_independent"] == true);
    CHECK(gamma["result"]["realizable"] == true);
}

TEST_CASE("classify: csv") {
    RunResult r = run("classify --k 2 --n 12 --a 1 --csv");
    CHECK(r.exit_code == 0);
    CHECK(r.out.substr(0, r.out.find('\n')) == "k,n,a,m,m_modulus,realizable");
    CHECK(r.out.find("2,12,1,1,12,true") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run("classify --k 2 --n 12 --a 1 --json --csv").exit_code == 2);
    CHECK(run("classify --k 2").exit_code == 2);              // missing required
    CHECK(run("classify --k 1 --n 3 --a 0").exit_code == 2);  // bad k
    CHECK(run("nonsense").exit_code == 2);
    CHECK(run("gtable --k 2 --n 0").exit_code == 2);
    CHECK(run("bundlecmp --k 7").exit_code == 2);
    CHECK(run("ss-page --k 2 --model fiber-base --page infinity").exit_code == 2);
    CHECK(run("ss-page --k 2 --model no-such-model").exit_code == 2);
}

TEST_CASE("gtable rows and uncovered cells") {
    json j = parse_report(run("gtable --k 3 --n-min 2 --n-max 10"));
    auto rows = j["result"]["rows"];
    REQUIRE(rows.size() == 9);
    bool saw8 = false;
    for (const auto& row : rows)
        if (row["n"] == 8) {
            saw8 = true;
            CHECK(row["count"] == 2);
        }
    CHECK(saw8);

    json un = parse_report(run("gtable --k 2 --n 4"));
    auto urows = un["result"]["rows"];
    REQUIRE(urows.size() == 1);
    CHECK(urows[0]["count"].is_null());
    CHECK(!urows[0]["uncovered_reason"].get<std::string>().empty());

    RunResult csv = run("gtable --k 2 --n 4 --csv");
    CHECK(csv.out.find("Uncovered") != std::string::npos);
}

TEST_CASE("count-realizable and star") {
    json c = parse_report(run("count-realizable --k 3 --n 3"));
    CHECK(c["result"]["count"] == 4);
    CHECK(c["result"]["modulus"] == 6);

    json s = parse_report(run("star --n-min 2 --n-max 6"));
    auto rows = s["result"]["rows"];
    REQUIRE(rows.size() == 5);
    CHECK(rows[0]["star"] == true);   // 2
    CHECK(rows[1]["star"] == false);  // 3
    CHECK(rows[2]["star"] == false);  // 4
    CHECK(rows[3]["star"] == true);   // 5
    CHECK(rows[4]["star"] == false);  // 6

    CHECK(parse_report(run("star --n 13"))["result"]["rows"][0]["star"] == true);
}

TEST_CASE("fiber tables") {
    json j = parse_report(run("fiber --k 3 --lambda 4 --max 15"));
    auto rows = j["result"]["homology"];
    REQUIRE(rows.size() == 3);
    CHECK(rows[0]["degree"] == 5);
    CHECK(rows[0]["group"]["free_rank"] == 1);
    CHECK(rows[1]["degree"] == 10);
    CHECK(rows[1]["group"]["torsion"][0] == 4);
    CHECK(rows[2]["degree"] == 15);
    CHECK(j["result"]["sphere_fiber"] == false);

    CHECK(parse_report(run("fiber --k 2 --lambda 1"))["result"]["sphere_fiber"] == true);
}

TEST_CASE("spectral sequence pages") {
    json e2 = parse_report(run("ss-page --k 2 --n 3 --max 8 --page 2"));
    CHECK(e2["result"]["page_index"] == 2);
    bool middle = false;
    for (const auto& e : e2["result"]["entries"])
        if (e["p"] == 4 && e["q"] == 0) {
            middle = true;
            CHECK(e["group"]["torsion"][0] == 3);
        }
    CHECK(middle);

    json inf = parse_report(run("ss-page --k 2 --n 2 --lambda 2 --max 8 --page infinity"));
    CHECK(inf["result"]["page_index"] == 8);
    bool deg7 = false;
    for (const auto& c : inf["result"]["cohomology_by_degree"])
        if (c["degree"] == 7) {
            deg7 = true;
            CHECK(c["group"]["torsion"][0] == 2);
        }
    CHECK(deg7);

    json top = parse_report(run("ss-page --k 3 --model loop-top --page 2 --hopf 6"));
    CHECK(top["result"]["transgression"]["multiplier"] == 6);
    CHECK(top["result"]["transgression"]["source"][1] == 10);

    json fb = parse_report(run("ss-page --k 2 --model fiber-base --page 2 --lambda 3 --max 10"));
    CHECK(fb["result"]["page_index"] == 2);
}

TEST_CASE("bundlecmp verdicts and exit codes") {
    json epi = parse_report(run("bundlecmp --k 4"));
    CHECK(epi["result"]["verdict"] == "EpiByCitedArgument");
    CHECK(epi["result"]["obstruction_prime"].is_null());

    RunResult r5 = run("bundlecmp --k 5");
    CHECK(r5.exit_code == 0);
    json not_epi = parse_report(r5);
    CHECK(not_epi["result"]["verdict"] == "NotEpiByRankObstruction");
    CHECK(not_epi["result"]["obstruction_prime"] == 2);
    CHECK(!not_epi["citations"].empty());
}

TEST_CASE("registry precedence") {
    std::string bad = temp_file("fiblab_bad_registry.txt", "broken line\n");
    std::string good = FIBLAB_DEFAULT_REGISTRY;

    // environment variable is honored
    CHECK(run("bundlecmp --k 2", "FIBLAB_REGISTRY=" + bad).exit_code == 1);
    // the flag overrides the environment
    RunResult r = run("bundlecmp --k 2 --registry \"" + good + "\"",
                      "FIBLAB_REGISTRY=" + bad);
    CHECK(r.exit_code == 0);
    // missing file is a data error, not a crash
    CHECK(run("bundlecmp --k 2 --registry /no/such/file.txt").exit_code == 1);
}

TEST_CASE("selfcheck") {
    RunResult skipped = run("selfcheck --budget 0");
    CHECK(skipped.exit_code == 0);
    json js = json::parse(skipped.out);
    CHECK(js["result"]["skipped"] == true);
    CHECK(!js["result"]["warning"].get<std::string>().empty());

    RunResult small = run("selfcheck --budget 1");
    CHECK(small.exit_code == 0);
    json jr = parse_report(small);
    CHECK(jr["result"]["skipped"] == false);
    CHECK(jr["result"]["ok"] == true);
    for (const auto& suite : jr["result"]["suites"])
        CHECK_MESSAGE(suite["status"] == "ok", suite.dump());
}
