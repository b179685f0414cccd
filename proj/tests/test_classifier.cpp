#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>

#include "fiblab/classifier.hpp"
#include "fiblab/serre.hpp"

using namespace fiblab::classifier;
using fiblab::fgab::AbGroup;
using fiblab::modring::make_residue;

namespace {

TorsionInput synthetic_home(long long k, const AbGroup& g) {
    return TorsionInput{k, g, "synthetic test input"};
}

}  // namespace

TEST_CASE("attaching class validation") {
    AttachingClass f = make_attaching_class(2, 12, 13);
    CHECK(f.a.value == 1);  // reduced mod coefficient_modulus(2,12) = 12
    CHECK(f.a.modulus == 12);
    AttachingClass g = make_attaching_class(3, 5, 11);
    CHECK(g.a.modulus == 10);
    CHECK(g.a.value == 1);

    CHECK_THROWS_AS(make_attaching_class(1, 5, 0), fiblab::InvalidArgument);
    CHECK_THROWS_AS(make_attaching_class(2, 0, 0), fiblab::InvalidArgument);
    // nonzero gamma needs a declared home
    CHECK_THROWS_AS(make_attaching_class(2, 5, 0, 1), fiblab::InvalidArgument);
    // gamma index must lie inside T/nT
    TorsionInput home = synthetic_home(2, AbGroup::cyclic(12));
    CHECK(gamma_quotient_order(home, 4) == 4);
    CHECK_NOTHROW(make_attaching_class(2, 4, 0, 3, home));
    CHECK_THROWS_AS(make_attaching_class(2, 4, 0, 4, home), fiblab::InvalidArgument);
    // an empty source is never accepted
    TorsionInput no_source{2, AbGroup::cyclic(12), ""};
    CHECK_THROWS_AS(make_attaching_class(2, 4, 0, 1, no_source), fiblab::InvalidArgument);
    // mismatched k is rejected
    CHECK_THROWS_AS(make_attaching_class(3, 4, 0, 1, synthetic_home(2, AbGroup::cyclic(4))),
                    fiblab::InvalidArgument);
}

TEST_CASE("whitehead coefficient case split") {
    // k in {2,4}: m = a mod n
    CHECK(whitehead_coefficient(make_attaching_class(2, 12, 1)).value == 1);
    CHECK(whitehead_coefficient(make_attaching_class(2, 12, 1)).modulus == 12);
    CHECK(whitehead_coefficient(make_attaching_class(4, 7, 3)).value == 3);
    // k not in {2,4}, n even: m = a mod 2n
    auto m32 = whitehead_coefficient(make_attaching_class(3, 2, 3));
    CHECK(m32.modulus == 4);
    CHECK(m32.value == 3);
    // k not in {2,4}, n odd: the generator is doubled, m = 2a mod n
    auto m33 = whitehead_coefficient(make_attaching_class(3, 3, 1));
    CHECK(m33.modulus == 3);
    CHECK(m33.value == 2);
    auto m57 = whitehead_coefficient(make_attaching_class(5, 7, 3));
    CHECK(m57.modulus == 7);
    CHECK(m57.value == 6);
}

TEST_CASE("realizability examples") {
    CHECK(is_fibration(make_attaching_class(2, 12, 1)));
    CHECK(!is_fibration(make_attaching_class(2, 12, 2)));   // 2 not in {1,11} mod 12
    CHECK(is_fibration(make_attaching_class(2, 12, 11)));
    CHECK(!is_fibration(make_attaching_class(3, 3, 0)));    // m = 0
    CHECK(is_fibration(make_attaching_class(3, 3, 1)));     // m = 2 = -1 mod 3
    CHECK(is_fibration(make_attaching_class(2, 1, 0)));     // n = 1: everything
    CHECK(is_fibration(make_attaching_class(5, 1, 1)));
    CHECK(is_fibration(make_attaching_class(2, 5, 4)));     // 4 = -1 mod 5
}

TEST_CASE("gamma never affects the decision") {
    TorsionInput home = synthetic_home(3, AbGroup::from_cyclic_summands({4, 12}));
    for (long long n : {2, 3, 4, 6}) {
        long long q = gamma_quotient_order(home, n);
        long long n2 = fiblab::registry::coefficient_modulus(3, n);
        for (long long a = 0; a < n2; ++a) {
            AttachingClass plain = make_attaching_class(3, n, a);
            bool base = is_fibration(plain);
            auto base_m = whitehead_coefficient(plain);
            for (long long g = 0; g < q; ++g) {
                AttachingClass f = make_attaching_class(3, n, a, g, home);
                CHECK(is_fibration(f) == base);
                CHECK(whitehead_coefficient(f).value == base_m.value);
            }
        }
    }
}

TEST_CASE("condition I holds for well-formed descriptors") {
    CHECK(condition_I(make_attaching_class(2, 5, 3)));
    CHECK(condition_I(make_attaching_class(6, 9, 0)));
}

TEST_CASE("linking form and condition II") {
    LinkingFormClass form = linking_form_of(make_attaching_class(2, 5, 4));
    CHECK(form.n == 5);
    CHECK(form.value.value == 4);
    CHECK(form.sign_ambiguous);
    CHECK(condition_II(form));

    CHECK(condition_II(LinkingFormClass{4, make_residue(3, 4), true}));   // -1 mod 4
    CHECK(!condition_II(LinkingFormClass{12, make_residue(5, 12), true}));
    CHECK(!condition_II(LinkingFormClass{8, make_residue(3, 8), true}));
    CHECK(condition_II(LinkingFormClass{13, make_residue(12, 13), true}));

    // fixed orientation distinguishes +-: 11 = -1 mod 12 is not a square
    CHECK(!condition_II(LinkingFormClass{12, make_residue(11, 12), false}));
    CHECK(condition_II(LinkingFormClass{12, make_residue(1, 12), false}));
}

TEST_CASE("condition II agrees with the exhaustive oracle") {
    for (long long n = 1; n <= 150; ++n)
        for (long long v = 0; v < n; ++v) {
            LinkingFormClass both{n, make_residue(v, n), true};
            CHECK_MESSAGE(condition_II(both) == condition_II_oracle(both),
                          "ambiguous n=", n, " v=", v);
            LinkingFormClass fixed{n, make_residue(v, n), false};
            CHECK_MESSAGE(condition_II(fixed) == condition_II_oracle(fixed),
                          "fixed n=", n, " v=", v);
        }
    CHECK_THROWS_AS(condition_II_oracle(LinkingFormClass{20000, make_residue(1, 20000), true}),
                    fiblab::OracleInapplicable);
}

TEST_CASE("james addition invariant") {
    for (long long n : {3, 4, 5, 12})
        for (long long a1 = 0; a1 < n; ++a1)
            for (long long a2 = 0; a2 < n; ++a2) {
                auto f1 = make_attaching_class(2, n, a1);
                auto f2 = make_attaching_class(2, n, a2);
                auto sum = james_h(f1, f2);
                long long expect = (whitehead_coefficient(f1).value +
                                    whitehead_coefficient(f2).value) % n;
                CHECK(sum.value == expect);
                CHECK(sum.modulus == n);
            }
    CHECK_THROWS_AS(james_h(make_attaching_class(2, 3, 0), make_attaching_class(3, 3, 0)),
                    fiblab::InvalidArgument);
}

TEST_CASE("star condition") {
    CHECK(star_condition(2));
    CHECK(star_condition(5));
    CHECK(star_condition(10));
    CHECK(star_condition(13));
    CHECK(star_condition(26));
    CHECK(!star_condition(4));
    CHECK(!star_condition(3));
    CHECK(!star_condition(8));
    CHECK(!star_condition(12));
    CHECK(!star_condition(15));
    CHECK_THROWS_AS(star_condition(1), fiblab::InvalidArgument);

    // equivalent characterization: -1 is a unit square mod n
    for (long long n = 2; n <= 3000; ++n)
        CHECK_MESSAGE(star_condition(n) ==
                          fiblab::modring::is_unit_square(make_residue(n - 1, n)),
                      "n=", n);
}

TEST_CASE("homotopy type counts: examples") {
    auto count = [](long long k, long long n) {
        auto r = homotopy_type_count(k, n);
        REQUIRE_MESSAGE(r.count.has_value(), "k=", k, " n=", n, ": ", r.uncovered_reason);
        return *r.count;
    };
    CHECK(count(3, 8) == 2);    // gcd(8,8) = 8
    CHECK(count(3, 12) == 1);   // gcd = 4
    CHECK(count(3, 2) == 1);
    CHECK(count(3, 5) == 2);    // gcd = 1 still 2 for k=3
    CHECK(count(4, 5) == 2);    // star column
    CHECK(count(4, 10) == 3);   // star column
    CHECK(count(5, 7) == 1);    // gcd(8,7) = 1
    CHECK(count(5, 2) == 8);    // gcd = 2 with star
    CHECK(count(5, 8) == 8);    // gcd = 8
    CHECK(count(5, 4) == 16);   // gcd = 4
    CHECK(count(5, 6) == 16);   // gcd = 2 without star
    CHECK(count(6, 2) == 2);    // star column
    CHECK(count(2, 2) == 1);    // star column for k=2
    CHECK(count(2, 3) == 2);

    auto un = homotopy_type_count(2, 4);
    CHECK(!un.count.has_value());
    CHECK(!un.uncovered_reason.empty());
    for (long long n = 4; n <= 200; n += 4) {
        auto r = homotopy_type_count(2, n);
        CHECK_MESSAGE(!r.count.has_value(), "n=", n);
    }

    CHECK_THROWS_AS(homotopy_type_count(7, 5), fiblab::InvalidArgument);
    CHECK_THROWS_AS(homotopy_type_count(2, 1), fiblab::InvalidArgument);
}

TEST_CASE("homotopy type count is a function of (gcd, star)") {
    for (long long k = 2; k <= 6; ++k) {
        std::map<std::pair<long long, bool>, std::optional<long long>> seen;
        for (long long n = 2; n <= 2000; ++n) {
            auto r = homotopy_type_count(k, n);
            auto key = std::make_pair(r.gcd_value, r.star);
            auto it = seen.find(key);
            if (it == seen.end())
                seen.emplace(key, r.count);
            else
                CHECK_MESSAGE(it->second == r.count, "k=", k, " n=", n);
        }
    }
}

TEST_CASE("count of realizable coordinates") {
    CHECK(count_realizable(2, 1) == 1);
    CHECK(count_realizable(2, 12) == 2);   // a in {1, 11}
    CHECK(count_realizable(3, 3) == 4);    // a in {1,2,4,5} of [0,6)
    CHECK(count_realizable(2, 5) == 2);    // a in {1, 4}: the squares, closed under -1
    CHECK(count_realizable(4, 5) == 2);

    // realizable count equals n2/n times the size of the +-square set, since
    // m traverses each residue class the same number of times
    for (long long k : {2, 3})
        for (long long n = 1; n <= 40; ++n) {
            long long n2 = fiblab::registry::coefficient_modulus(k, n);
            long long direct = 0;
            for (long long a = 0; a < n2; ++a)
                if (is_fibration(make_attaching_class(k, n, a))) ++direct;
            CHECK(direct == count_realizable(k, n));
        }
}

TEST_CASE("three decision paths agree") {
    for (long long k = 2; k <= 6; ++k)
        for (long long n = 1; n <= 60; ++n) {
            long long n2 = fiblab::registry::coefficient_modulus(k, n);
            for (long long a = 0; a < n2; ++a) {
                AttachingClass f = make_attaching_class(k, n, a);
                bool direct = is_fibration(f);
                bool conds = condition_I(f) && condition_II(linking_form_of(f));
                auto m = whitehead_coefficient(f);
                bool witness =
                    fiblab::serre::normalize_hopf(
                        k, n, fiblab::modring::mod_reduce(m.value, n))
                        .has_value();
                CHECK_MESSAGE(direct == conds, "k=", k, " n=", n, " a=", a);
                CHECK_MESSAGE(direct == witness, "k=", k, " n=", n, " a=", a);
            }
        }
}
