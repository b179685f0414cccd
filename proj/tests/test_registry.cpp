#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>
#include <string>

#include "fiblab/registry.hpp"

using namespace fiblab::registry;
using fiblab::fgab::AbGroup;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), "cannot open ", path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// True when the text constructs a group from a literal first argument,
// e.g. "cyclic(24" or "from_cyclic_summands({2", skipping whitespace.
bool has_literal_group_construction(const std::string& text) {
    auto digit_after = [&](size_t pos, bool brace) {
        size_t i = pos;
        while (i < text.size() && (text[i] == ' ' || text[i] == '\n')) ++i;
        if (brace) {
            if (i >= text.size() || text[i] != '{') return false;
            ++i;
            while (i < text.size() && (text[i] == ' ' || text[i] == '\n')) ++i;
        }
        return i < text.size() && text[i] >= '0' && text[i] <= '9';
    };
    for (size_t p = text.find("cyclic("); p != std::string::npos;
         p = text.find("cyclic(", p + 1))
        if (digit_after(p + 7, false)) return true;
    for (size_t p = text.find("from_cyclic_summands("); p != std::string::npos;
         p = text.find("from_cyclic_summands(", p + 1))
        if (digit_after(p + 21, true)) return true;
    return false;
}

}  // namespace

TEST_CASE("parse and lookup") {
    std::string text =
        "# comment line\n"
        "\n"
        "alpha | k=2 | 1 | 12 | gen_a;gen_b | Handbook A (1.2)\n"
        "beta  | - | 0 | 8,9,7 | - | Handbook B\n"
        "scalar fact | k=2,value=5 | 0 | - | - | Table IV\n";
    Registry reg = Registry::parse(text, "inline");
    CHECK(reg.size() == 3);

    GroupCitation a = reg.lookup("alpha", {{"k", 2}});
    CHECK(a.group == AbGroup::from_cyclic_summands({12}, 1));
    CHECK(a.generator_labels == std::vector<std::string>{"gen_a", "gen_b"});
    CHECK(a.source == "Handbook A (1.2)");

    // torsion canonicalization on load
    CHECK(reg.lookup("beta").group == AbGroup::cyclic(504));

    // payload params participate in subset matching
    GroupCitation s = reg.lookup("scalar fact", {{"k", 2}});
    CHECK(s.param("value") == 5);
    CHECK(s.has_param("value"));
    CHECK(!s.has_param("missing"));
    CHECK_THROWS_AS(s.param("missing"), fiblab::UnknownKey);

    CHECK(reg.has("alpha"));
    CHECK(reg.has("alpha", {{"k", 2}}));
    CHECK(!reg.has("alpha", {{"k", 3}}));
    CHECK(!reg.has("delta"));
    CHECK_THROWS_AS(reg.lookup("delta"), fiblab::UnknownKey);
    CHECK_THROWS_AS(reg.lookup("alpha", {{"k", 3}}), fiblab::UnknownKey);
}

TEST_CASE("ambiguous subset lookups are rejected") {
    std::string text =
        "key | k=2,j=1 | 0 | 2 | - | src one\n"
        "key | k=2,j=2 | 0 | 4 | - | src two\n";
    Registry reg = Registry::parse(text, "inline");
    CHECK(reg.lookup("key", {{"j", 1}}).group == AbGroup::cyclic(2));
    CHECK_THROWS_AS(reg.lookup("key", {{"k", 2}}), fiblab::InvalidArgument);
    CHECK_THROWS_AS(reg.lookup("key"), fiblab::InvalidArgument);
}

TEST_CASE("parse errors name the offending line") {
    auto check_throws_with = [](const std::string& text, const std::string& needle) {
        try {
            Registry::parse(text, "bad.txt");
            FAIL_CHECK("expected ParseError for: ", text);
        } catch (const fiblab::ParseError& e) {
            std::string what = e.what();
            CHECK_MESSAGE(what.find("bad.txt:") != std::string::npos, what);
            CHECK_MESSAGE(what.find(needle) != std::string::npos, what);
        }
    };
    check_throws_with("only | three | fields\n", "field");
    check_throws_with("k | - | x | - | - | src\n", "integer");
    check_throws_with("k | p | 0 | - | - | src\n", "param");
    check_throws_with("k | - | 0 | 1 | - | src\n", "torsion");
    check_throws_with("k | - | 0 | - | - | \n", "source");
    // duplicate (key, params)
    check_throws_with(
        "k | a=1 | 0 | 2 | - | s1\n"
        "k | a=1 | 0 | 4 | - | s2\n",
        "duplicate");
}

TEST_CASE("bundled registry loads") {
    Registry reg = Registry::load_file(FIBLAB_DEFAULT_REGISTRY);
    CHECK(reg.size() >= 25);
    CHECK(reg.lookup("pi_18(S^9)").group == AbGroup::from_cyclic_summands({2, 2, 2, 2}));
    CHECK(reg.lookup("pi_22(S^11)").group == AbGroup::cyclic(504));
    CHECK(reg.lookup("stable stem", {{"k", 2}}).group == AbGroup::cyclic(24));
    CHECK(reg.lookup("O inclusion multiplier", {{"k", 4}}).param("value") == 2);
    for (const auto& rec : reg.records()) {
        CHECK(!rec.source.empty());
        CHECK(rec.group.is_canonical());
    }
}

TEST_CASE("attaching kernel image") {
    CHECK(attaching_kernel_image_group(2, 7) == AbGroup::cyclic(7));
    CHECK(attaching_kernel_image_group(4, 7) == AbGroup::cyclic(7));
    CHECK(attaching_kernel_image_group(3, 4) == AbGroup::cyclic(8));
    CHECK(attaching_kernel_image_group(3, 5) == AbGroup::cyclic(5));
    CHECK(attaching_kernel_image_group(6, 1) == AbGroup::trivial());

    GroupCitation odd = attaching_kernel_image(3, 5);
    REQUIRE(odd.generator_labels.size() == 1);
    CHECK(odd.generator_labels[0].substr(0, 2) == "2[");  // doubled generator
    CHECK(!odd.source.empty());
    GroupCitation even = attaching_kernel_image(3, 4);
    CHECK(even.generator_labels[0].substr(0, 1) == "[");

    // the routing key reaches the same records through lookup
    Registry reg;
    CHECK(reg.lookup("i_*(K)", {{"k", 3}, {"n", 4}}).group == AbGroup::cyclic(8));
    CHECK(reg.has("i_*(K)", {{"k", 2}, {"n", 9}}));
    CHECK_THROWS_AS(reg.lookup("i_*(K)", {{"k", 2}}), fiblab::UnknownKey);
}

TEST_CASE("coefficient modulus and stride") {
    CHECK(coefficient_modulus(2, 5) == 5);
    CHECK(coefficient_modulus(4, 5) == 5);
    CHECK(coefficient_modulus(3, 5) == 10);
    CHECK(coefficient_modulus(5, 2) == 4);
    CHECK(coefficient_modulus(6, 1) == 2);
    CHECK(coefficient_modulus(2, 1) == 1);
    CHECK(hopf_image_stride(2) == 1);
    CHECK(hopf_image_stride(4) == 1);
    CHECK(hopf_image_stride(3) == 2);
    CHECK(hopf_image_stride(5) == 2);
    CHECK(hopf_image_stride(6) == 2);
    CHECK_THROWS_AS(coefficient_modulus(1, 5), fiblab::InvalidArgument);
}

TEST_CASE("decision modules build groups from data, not literals") {
    // Group constants belong in the registry file; the decision modules may
    // only assemble groups from records or computed values.
    for (const char* rel : {"/src/classifier.cpp", "/src/serre.cpp", "/src/bundlecmp.cpp"}) {
        std::string text = slurp(std::string(FIBLAB_SOURCE_DIR) + rel);
        CHECK_MESSAGE(!has_literal_group_construction(text), rel);
    }
    // the scanner itself recognizes offending patterns
    CHECK(has_literal_group_construction("auto g = AbGroup::cyclic(24);"));
    CHECK(has_literal_group_construction("from_cyclic_summands({ 2, 2 })"));
    CHECK(!has_literal_group_construction("AbGroup::cyclic(n)"));
    CHECK(!has_literal_group_construction("from_cyclic_summands(orders)"));
}
