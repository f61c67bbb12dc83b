#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "saq/errors.hpp"
#include "saq/formula.hpp"
#include "test_util.hpp"

using namespace saq;
using testutil::Rng;

namespace {

Formula F(const std::string& text, int k = -1) { return parse_formula(text, k); }

} // namespace

TEST_CASE("formula evaluation") {
    CHECK(eval_formula(F("[x1^2+x2^2-1 <= 0]"), {Rational(3, 5), Rational(4, 5)}));
    CHECK_FALSE(eval_formula(F("![x1 > 0]"), {Rational(1)}));
    CHECK(eval_formula(F("[x1 > 0] | [x1 < 0]"), {Rational(-2)}));
    CHECK_THROWS_AS(eval_formula(F("[x1 > 0]"), {Rational(1), Rational(2)}), PreconditionError);
}

TEST_CASE("dense format counts distinct polynomials") {
    DenseFormat f = dense_format(F("[x1 = 0] & [x1 > 0]"));
    CHECK(f.s == 1);
    CHECK(f.d == 1);
    CHECK(f.k == 1);

    DenseFormat g = dense_format(F("[x1^2+x2^2-1 = 0] | ([x1^2+x2^2-1 > 0] & [x2 = 0])"));
    CHECK(g.s == 2);
    CHECK(g.d == 2);
    CHECK(g.k == 2);
}

TEST_CASE("DNF atoms and De Morgan") {
    Formula atom = F("[x1 > 0]");
    CHECK(to_dnf(atom) == atom);

    Formula neg = F("!([x1 > 0] & [x2 <= 0])");
    Formula dnf = to_dnf(neg);
    CHECK(dnf == F("[x1 <= 0] | [x2 > 0]"));

    Formula eqNeg = to_dnf(F("![x1 = 0]"));
    CHECK(eqNeg == F("[x1 > 0] | [x1 < 0]"));
}

TEST_CASE("DNF preserves semantics on random formulas") {
    Rng rng(29);
    for (int trial = 0; trial < 12; ++trial) {
        int k = 1 + static_cast<int>(rng() % 3);
        Formula f = testutil::random_formula(rng, k, 4);
        Formula dnf = to_dnf(f, 100000);
        CHECK(dense_format(dnf).s <= dense_format(f).s);
        CHECK(dense_format(dnf).d == dense_format(f).d);
        for (int i = 0; i < 200; ++i) {
            auto x = testutil::random_point(rng, k, 6, 5);
            CHECK(eval_formula(f, x) == eval_formula(dnf, x));
        }
    }
}

TEST_CASE("DNF clause cap") {
    // (a1 | b1) & ... & (a12 | b12) has 2^12 clauses.
    std::vector<Formula> conj;
    for (int i = 0; i < 12; ++i) {
        conj.push_back(Formula::mkOr({Formula::atom(parse_polynomial("x1-" + std::to_string(i), 1), Rel::Gt),
                                      Formula::atom(parse_polynomial("x1+" + std::to_string(i), 1), Rel::Lt)}));
    }
    Formula f = Formula::mkAnd(std::move(conj));
    CHECK_THROWS_AS(to_dnf(f, 1000), ResourceCapError);
}

TEST_CASE("p-closed detection") {
    CHECK(is_p_closed(F("[x1 >= 0] & [x2 = 0]")));
    CHECK_FALSE(is_p_closed(F("[x1 > 0]")));
    CHECK_FALSE(is_p_closed(F("![x1 <= 0]")));
    Rng rng(31);
    for (int i = 0; i < 10; ++i) {
        Formula f = testutil::random_formula(rng, 2, 3);
        if (is_p_closed(f)) CHECK(is_p_closed(to_dnf(f, 100000)));
    }
}

TEST_CASE("sign condition formulas") {
    Polynomial x1 = parse_polynomial("x1");
    Polynomial q = parse_polynomial("x1^2-1");
    SignCondition sigma{{x1, 1}, {q, -1}};
    Formula f = sign_condition_formula(sigma);
    CHECK(eval_formula(f, {Rational(1, 2)}));
    CHECK_FALSE(eval_formula(f, {Rational(2)}));
    CHECK_FALSE(eval_formula(f, {Rational(-1, 2)}));

    SignCondition zero{{q, 0}};
    CHECK(sign_condition_formula(zero) == F("[x1^2 - 1 = 0]"));
}

TEST_CASE("sign condition formula matches exact signs everywhere") {
    Rng rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        SignCondition sigma;
        int s = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < s; ++i)
            sigma[testutil::random_nonzero_polynomial(rng, 2, 3, 3)] = static_cast<int>(rng() % 3) - 1;
        Formula f = sign_condition_formula(sigma);
        for (int i = 0; i < 50; ++i) {
            auto x = testutil::random_point(rng, 2, 6, 5);
            bool expected = true;
            for (const auto& [p, s2] : sigma)
                if (sign(p.eval(x)) != s2) expected = false;
            CHECK(eval_formula(f, x) == expected);
        }
    }
}

TEST_CASE("all 3^s sign conditions enumerate without duplicates") {
    Polynomial p1 = parse_polynomial("x1", 2);
    Polynomial p2 = parse_polynomial("x2", 2);
    std::set<std::string> seen;
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b) {
            SignCondition sigma{{p1, a}, {p2, b}};
            seen.insert(sign_condition_formula(sigma).str());
        }
    CHECK(seen.size() == 9);
}

TEST_CASE("relaxed sign condition") {
    Polynomial p = parse_polynomial("x1");
    SignCondition sigma{{p, 1}};
    Formula f = relaxed_sign_condition(sigma, Rational(1, 100));
    CHECK(f == F("[x1^2 - 100 <= 0] & [x1 - 1/100 >= 0]"));
    // Relaxed realization implies the strict condition.
    for (int i = 0; i <= 20; ++i) {
        Rational x(i - 10, 1);
        if (eval_formula(f, {x})) CHECK(eval_formula(sign_condition_formula(sigma), {x}));
    }
    SignCondition zero{{p, 0}};
    CHECK(relaxed_sign_condition(zero, Rational(1, 4)) == F("[x1^2 - 4 <= 0] & [x1 = 0]"));
    CHECK_THROWS_AS(relaxed_sign_condition(sigma, Rational(0)), PreconditionError);
}

TEST_CASE("nonstrict to strict replacement") {
    Polynomial p = parse_polynomial("x1");
    SignCondition zero{{p, 0}};
    Formula f = nonstrict_to_strict(zero, Rational(1, 10), Rational(1, 8), Rational(4));
    CHECK(f == F("[x1 + 1/8 > 0] & [x1 - 1/8 < 0] & [x1^2 - 16 < 0]"));

    SignCondition plus{{p, 1}};
    Formula g = nonstrict_to_strict(plus, Rational(1, 10), Rational(1, 8), Rational(4));
    CHECK(g == F("[x1 - 1/10 > 0] & [x1^2 - 16 < 0]"));

    // A point satisfying the output satisfies the weak version of sigma.
    Rng rng(41);
    for (int i = 0; i < 100; ++i) {
        Rational x = testutil::random_rational(rng, 20, 5);
        if (eval_formula(g, {x})) CHECK(x > 0);
        if (eval_formula(f, {x})) CHECK(abs(x) < Rational(1, 8));
    }
    CHECK_THROWS_AS(nonstrict_to_strict(zero, Rational(0), Rational(1), Rational(1)), PreconditionError);
}

TEST_CASE("formula text grammar") {
    Formula f = F("([x1 >= 0] & [x1 - 1 < 0]) | ![x2 = 0]");
    CHECK(f.ambientDimension() == 2);
    CHECK(parse_formula(f.str()) == f);
    CHECK_THROWS_AS(parse_formula("[x1 > 1]"), ParseError);
    CHECK_THROWS_AS(parse_formula("[x1 >< 0]"), ParseError);
    CHECK_THROWS_AS(parse_formula("[x1 > 0] &"), ParseError);
    CHECK_THROWS_AS(parse_formula("(x1 > 0)"), ParseError);
}
