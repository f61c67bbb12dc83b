#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "saq/bounds.hpp"
#include "saq/errors.hpp"

#include <algorithm>
#include <random>

using namespace saq;
using namespace saq::bounds;

TEST_CASE("chi base cases and hand-unrolled value") {
    CHECK(chi(3, DegreeSequence{}) == 4);
    CHECK(chi(2, DegreeSequence{{2, 3}}) == 6);
    // chi(3,[4]) = 4*chi(2,[]) - 3*chi(2,[4]) = 4*3 - 3*(3*4 - 16) = 24
    CHECK(chi(3, DegreeSequence{{4}}) == 24);
    CHECK_THROWS_AS(chi(1, DegreeSequence{{2, 2}}), PreconditionError);
}

TEST_CASE("chi against the classical closed forms") {
    for (int d = 1; d <= 10; ++d)
        CHECK(chi(2, DegreeSequence{{d}}) == Integer(3 * d - d * d));
    for (int d = 1; d <= 6; ++d)
        CHECK(chi(3, DegreeSequence{{d}}) == Integer(d * d * d - 4 * d * d + 6 * d));
    CHECK(chi(3, DegreeSequence{{1}}) == 3);
    CHECK(chi(3, DegreeSequence{{2}}) == 4);
    CHECK(chi(3, DegreeSequence{{3}}) == 9);
}

TEST_CASE("chi is invariant under degree permutations") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 60; ++trial) {
        int k = 2 + static_cast<int>(rng() % 5); // k <= 6
        int m = 1 + static_cast<int>(rng() % std::min(4, k));
        std::vector<int> degs;
        for (int i = 0; i < m; ++i) degs.push_back(1 + static_cast<int>(rng() % 6));
        Integer canonical = chi(k, DegreeSequence{degs});
        for (int p = 0; p < 3; ++p) {
            std::shuffle(degs.begin(), degs.end(), rng);
            CHECK(chi_unsorted(k, degs) == canonical);
        }
    }
}

TEST_CASE("chi magnitude bound on random ascending sequences") {
    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 500; ++trial) {
        int k = 1 + static_cast<int>(rng() % 8);
        int m = static_cast<int>(rng() % (k + 1));
        std::vector<int> degs;
        for (int i = 0; i < m; ++i) degs.push_back(1 + static_cast<int>(rng() % 9));
        DegreeSequence seq{degs};
        CHECK(abs(chi(k, seq)) <= chi_abs_bound(k, seq));
    }
}

TEST_CASE("chi_abs_bound and beta_bound fixtures") {
    CHECK(chi_abs_bound(3, DegreeSequence{{4}}) == 384); // C(4,2)*4^3
    CHECK(beta_bound(3, DegreeSequence{{4}}) == 390);    // 384 + 2*(3-1+1)
}

TEST_CASE("F at kprime = 0 collapses to the variety term") {
    for (int k = 1; k <= 6; ++k)
        for (int d0 = 1; d0 <= 3; ++d0) {
            Integer expect = int_pow(Integer(2 * d0), static_cast<unsigned long>(k)) + Integer(2 * (k + 1));
            CHECK(F(5, d0, k, 0, 0) == expect);
        }
    CHECK_THROWS_AS(F(2, 1, 2, 3, 0), PreconditionError);
    CHECK_THROWS_AS(F(2, 1, 2, 1, 2), PreconditionError);
}

TEST_CASE("main bound fixtures") {
    // j=0: C(2,1)*2^0*1*max(2,2)^1 + 2*2 = 8; j=1: 4*C(3,1)*(C(2,2)*2*1 + 2) = 48.
    CHECK(main_bound_uniform(2, 2, 1, 1, 1) == 56);
    // Census comparison: {x, x^2-1} realizes 7 components, well below.
    CHECK(main_bound_uniform(2, 2, 1, 1, 1) >= 7);
}

TEST_CASE("list and uniform statements cross-check") {
    for (int s = 1; s <= 4; ++s)
        for (int k = 1; k <= 3; ++k)
            for (int kp = 0; kp <= k; ++kp)
                for (int d = 1; d <= 4; ++d)
                    for (int d0 = 1; d0 <= 2; ++d0) {
                        CrossCheck cc = cross_check_main_bounds(s, d, d0, k, kp);
                        CHECK(cc.listValue > 0);
                        CHECK(cc.uniformValue > 0);
                        if (!cc.equal) CHECK_FALSE(cc.note.empty());
                    }
    CHECK_THROWS_AS(main_bound_list(std::vector<int>(25, 2), 1, 3, 2), ResourceCapError);
}

TEST_CASE("bpr8 comparison bound") {
    CHECK(bpr8_bound(2, 2, 1, 1) == 16); // C(2,1)*4*2*(2*2-1)^0
    // Monotone in s and d.
    for (int s = 1; s <= 5; ++s)
        for (int d = 1; d <= 5; ++d) {
            CHECK(bpr8_bound(s + 1, d, 2, 1) >= bpr8_bound(s, d, 2, 1));
            CHECK(bpr8_bound(s, d + 1, 2, 1) >= bpr8_bound(s, d, 2, 1));
        }
}

TEST_CASE("geometric permutations bound") {
    BoundReport r = geometric_permutations_bound(3, 2, 1);
    CHECK(r.value == 6); // (1*C(2,1)*C(3,2))^1
    REQUIRE(r.annotations.size() == 1);
    CHECK(r.annotations[0] == "*O(1)^4");
    CHECK_THROWS_AS(geometric_permutations_bound(1, 2, 1), PreconditionError);

    // Polynomial growth in n: value(n) = (kt C(2^{kt+1}-2,kt) C(n,kt+1))^e,
    // so value(n+1) * C(n,kt+1)^e == value(n) * C(n+1,kt+1)^e exactly.
    int kt = 1, d = 3;
    unsigned long e = static_cast<unsigned long>(kt * (d - kt));
    for (int n = 2; n <= 8; ++n) {
        Integer vn = geometric_permutations_bound(n, d, kt).value;
        Integer vn1 = geometric_permutations_bound(n + 1, d, kt).value;
        Integer cn = binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(kt + 1));
        Integer cn1 = binomial(static_cast<unsigned long>(n + 1), static_cast<unsigned long>(kt + 1));
        CHECK(vn1 * int_pow(cn, e) == vn * int_pow(cn1, e));
    }
}

TEST_CASE("join format by substitution") {
    for (long long a = 0; a <= 5; ++a)
        for (int s = 0; s <= 5; ++s) {
            JoinFormat jf = join_format(1, 1, a, s, 2);
            CHECK(jf.M == Integer(static_cast<long>(2 * a + 8)));
            CHECK(jf.Mprime == Integer(2 * s + 10));
            CHECK(jf.N == 5);
        }
    // N at p = k+1 equals (k+2)(k+1) + C(k+2,2).
    for (int k = 1; k <= 6; ++k) {
        JoinFormat jf = join_format(k + 1, k, 0, 0, 0);
        Integer expect = Integer(k + 2) * Integer(k + 1) +
                         binomial(static_cast<unsigned long>(k + 2), 2);
        CHECK(jf.N == expect);
    }
}

TEST_CASE("star format and the small-square inequality") {
    for (int p = 1; p <= 10; ++p)
        for (int k = 1; k <= 10; ++k)
            for (long long a = 0; a <= 10; ++a) {
                StarFormat sf = star_format(p, k, a);
                CHECK(sf.smallSquareCheck);
                CHECK(sf.Mprime <= Integer(5) * sf.M * sf.M);
            }
}

TEST_CASE("homotopy exponent reports") {
    BoundReport r = homotopy_exponents(2, 3);
    CHECK(r.value == 390625); // (2+3)^8
    bool flagged = false;
    for (const auto& a : r.annotations)
        if (a.find("constant unspecified") != std::string::npos) flagged = true;
    CHECK(flagged);

    BoundReport small = homotopy_exponents(1, 0);
    CHECK(small.annotations[1].find("(k(k^2+a))^8 = 1 ") != std::string::npos);

    // Monotone in both arguments.
    for (int k = 0; k <= 4; ++k)
        for (long long a = 0; a <= 4; ++a) {
            CHECK(homotopy_exponents(k + 1, a).value >= homotopy_exponents(k, a).value);
            CHECK(homotopy_exponents(k, a + 1).value >= homotopy_exponents(k, a).value);
        }
}

TEST_CASE("tight example count") {
    for (int d0 = 1; d0 <= 4; ++d0) CHECK(tight_example_count(3, 2, d0, 1) == d0);
    CHECK(tight_example_count(2, 3, 2, 2) == 14); // 2*(C(6,0)+C(6,1))
    // Lower-bound witness stays below the upper bound when 2 d0 <= d.
    for (int k = 1; k <= 3; ++k)
        for (int s = 1; s <= 4; ++s)
            for (int d = 1; d <= 4; ++d)
                for (int d0 = 1; d0 <= 3; ++d0) {
                    if (2 * d0 > d) continue;
                    CHECK(tight_example_count(s, d, d0, k) <= main_bound_uniform(s, d, d0, k, k));
                }
}

TEST_CASE("bound report serialization") {
    BoundReport r;
    r.formulaName = "chi";
    r.value = 24;
    r.parameters = {{"k", "3"}, {"d", "4"}};
    CHECK(r.toJson() == "{\"formula\":\"chi\",\"value\":\"24\",\"params\":{\"d\":\"4\",\"k\":\"3\"},"
                        "\"annotations\":[]}");
}

TEST_CASE("bound values are non-negative and monotone on grids") {
    for (int s = 1; s <= 4; ++s)
        for (int d = 1; d <= 4; ++d)
            for (int d0 = 1; d0 <= 3; ++d0) {
                CHECK(main_bound_uniform(s, d, d0, 2, 1) >= 0);
                CHECK(main_bound_uniform(s + 1, d, d0, 2, 1) >= main_bound_uniform(s, d, d0, 2, 1));
                CHECK(main_bound_uniform(s, d + 1, d0, 2, 1) >= main_bound_uniform(s, d, d0, 2, 1));
                CHECK(main_bound_uniform(s, d, d0 + 1, 2, 1) >= main_bound_uniform(s, d, d0, 2, 1));
            }
}
