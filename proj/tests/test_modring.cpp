#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "fiblab/modring.hpp"

using namespace fiblab::modring;
using fiblab::fgab::AbGroup;

TEST_CASE("factorization") {
    CHECK(factorize(1).empty());
    CHECK(factorize(504) == Factorization{{2, 3}, {3, 2}, {7, 1}});
    CHECK(factorize(240) == Factorization{{2, 4}, {3, 1}, {5, 1}});
    CHECK(factorize(97) == Factorization{{97, 1}});
    CHECK(factorize(1000000007LL) == Factorization{{1000000007LL, 1}});
    CHECK(factorize((1LL << 40) * 9) == Factorization{{2, 40}, {3, 2}});
    CHECK_THROWS_AS(factorize(0), fiblab::InvalidArgument);
    CHECK_THROWS_AS(factorize(-6), fiblab::InvalidArgument);
}

TEST_CASE("euler phi and modular helpers") {
    CHECK(euler_phi(1) == 1);
    CHECK(euler_phi(12) == 4);
    CHECK(euler_phi(97) == 96);
    CHECK(mod_reduce(-1, 5) == 4);
    CHECK(mod_reduce(17, 5) == 2);
    CHECK(mod_mul(123456789, 987654321, 1000000007) ==
          (__int128(123456789) * 987654321 % 1000000007));
    CHECK(mod_pow(2, 10, 1000) == 24);
    CHECK(mod_inverse(3, 7) == 5);
    CHECK_THROWS_AS(mod_inverse(2, 4), fiblab::InvalidArgument);
}

TEST_CASE("pm unit squares: examples") {
    CHECK(pm_unit_squares(1).members == std::vector<long long>{0});
    CHECK(pm_unit_squares(2).members == std::vector<long long>{1});
    CHECK(pm_unit_squares(12).members == std::vector<long long>{1, 11});
    CHECK(pm_unit_squares(5).members == std::vector<long long>{1, 4});
    CHECK(pm_unit_squares(3).members == std::vector<long long>{1, 2});
    // mod 8: units {1,3,5,7}, squares {1}, +- gives {1,7}
    CHECK(pm_unit_squares(8).members == std::vector<long long>{1, 7});
}

TEST_CASE("pm unit squares: invariants") {
    for (long long n = 2; n <= 300; ++n) {
        ResidueSet s = pm_unit_squares(n);
        CHECK(s.modulus == n);
        CHECK(s.contains(1));
        CHECK(std::is_sorted(s.members.begin(), s.members.end()));
        for (long long v : s.members) {
            CHECK(gcd_ll(v, n) == 1);                 // members are units
            CHECK(s.contains(mod_reduce(-v, n)));     // closed under negation
            // closed under multiplication by a unit square
            CHECK(s.contains(mod_mul(v, mod_mul(v, v, n), n)));
        }
    }
}

TEST_CASE("pm unit squares: membership agrees with the set") {
    for (long long n = 1; n <= 300; ++n) {
        ResidueSet s = pm_unit_squares(n);
        for (long long v = 0; v < n; ++v)
            CHECK_MESSAGE(s.contains(v) == is_pm_unit_square(make_residue(v, n)),
                          "n=", n, " v=", v);
    }
    // spot checks at larger prime-power moduli
    CHECK(is_pm_unit_square(make_residue(1, 1LL << 30)));
    // -1 is always -(1^2)
    CHECK(is_pm_unit_square(make_residue((1LL << 30) - 1, 1LL << 30)));
    CHECK(!is_pm_unit_square(make_residue(3, 1LL << 30)));
}

TEST_CASE("single sign unit squares") {
    // mod 12 the squares of units are {1}; with signs {1, 11}
    CHECK(is_unit_square(make_residue(1, 12)));
    CHECK(!is_unit_square(make_residue(11, 12)));
    CHECK(is_pm_unit_square(make_residue(11, 12)));
    // mod 5: squares {1, 4}; -1 = 4 is already a square
    CHECK(is_unit_square(make_residue(4, 5)));
    CHECK(is_unit_square(make_residue(0, 1)));
    for (long long n = 2; n <= 200; ++n) {
        for (long long v = 0; v < n; ++v) {
            bool brute = false;
            for (long long t = 1; t < n && !brute; ++t)
                if (gcd_ll(t, n) == 1 && mod_mul(t, t, n) == v) brute = true;
            CHECK_MESSAGE(brute == is_unit_square(make_residue(v, n)), "n=", n, " v=", v);
        }
    }
}

TEST_CASE("unit group structure") {
    CHECK(unit_group_structure(1) == AbGroup::trivial());
    CHECK(unit_group_structure(2) == AbGroup::trivial());
    CHECK(unit_group_structure(4) == AbGroup::cyclic(2));
    CHECK(unit_group_structure(8) == AbGroup::from_cyclic_summands({2, 2}));
    CHECK(unit_group_structure(16) == AbGroup::from_cyclic_summands({2, 4}));
    CHECK(unit_group_structure(5) == AbGroup::cyclic(4));
    CHECK(unit_group_structure(15) == AbGroup::from_cyclic_summands({2, 4}));
    CHECK(unit_group_structure(9) == AbGroup::cyclic(6));
    for (long long n = 1; n <= 500; ++n)
        CHECK(*unit_group_structure(n).order() == euler_phi(n));
}

TEST_CASE("crt split and combine") {
    Factorization f = factorize(360);
    Residue r = make_residue(123, 360);
    auto parts = crt_split(r, f);
    REQUIRE(parts.size() == 3);
    CHECK(parts[0].modulus == 8);
    CHECK(parts[0].value == 123 % 8);
    CHECK(parts[1].modulus == 9);
    CHECK(parts[2].modulus == 5);
    Residue back = crt_combine(parts);
    CHECK(back.value == r.value);
    CHECK(back.modulus == r.modulus);

    for (long long v = 0; v < 60; ++v) {
        Residue x = make_residue(v, 60);
        Residue y = crt_combine(crt_split(x, factorize(60)));
        CHECK(y.value == x.value);
    }
    CHECK_THROWS_AS(crt_split(make_residue(1, 6), factorize(12)), fiblab::InvalidArgument);
    CHECK_THROWS_AS(crt_combine({make_residue(1, 4), make_residue(1, 6)}),
                    fiblab::InvalidArgument);
}

TEST_CASE("residue normalization") {
    CHECK(make_residue(-3, 5).value == 2);
    CHECK(make_residue(12, 5).value == 2);
    CHECK(make_residue(0, 1).value == 0);
    CHECK_THROWS_AS(make_residue(1, 0), fiblab::InvalidArgument);
}
