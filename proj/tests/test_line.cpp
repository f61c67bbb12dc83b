#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "saq/bounds.hpp"
#include "saq/errors.hpp"
#include "saq/line.hpp"
#include "test_util.hpp"

#include <set>

using namespace saq;
using namespace saq::line;
using testutil::Rng;

namespace {

Formula F(const std::string& text) { return parse_formula(text, 1); }
Polynomial P(const std::string& text) { return parse_polynomial(text, 1); }

IntervalSet random_interval_set(Rng& rng, int maxBreaks = 4) {
    int m = static_cast<int>(rng() % static_cast<unsigned>(maxBreaks + 1));
    std::set<Rational> cuts;
    while (static_cast<int>(cuts.size()) < m) cuts.insert(testutil::random_rational(rng, 8, 4));
    std::vector<PointRef> bounds;
    for (const Rational& c : cuts) bounds.push_back(AlgebraicPoint::fromRational(c));
    std::vector<bool> pIn, iIn;
    for (int i = 0; i < m; ++i) pIn.push_back(rng() % 2 == 0);
    for (int i = 0; i <= m; ++i) iIn.push_back(rng() % 2 == 0);
    return IntervalSet::fromDecomposition(std::move(bounds), std::move(pIn), std::move(iIn));
}

// [0, 1) as an interval set.
IntervalSet zero_one_half_open() {
    std::vector<PointRef> bounds{AlgebraicPoint::fromRational(Rational(0)),
                                 AlgebraicPoint::fromRational(Rational(1))};
    return IntervalSet::fromDecomposition(bounds, {true, false}, {false, true, false});
}

} // namespace

TEST_CASE("sturm root counting") {
    CHECK(sturm_count(P("x1^2-2"), ExtendedRational::negInf(), ExtendedRational::posInf()) == 2);
    CHECK(sturm_count(P("x1^2+1"), ExtendedRational::negInf(), ExtendedRational::posInf()) == 0);
    // Multiplicities collapse through the square-free part.
    CHECK(sturm_count(P("x1^3 - 3*x1 + 2"), ExtendedRational::negInf(), ExtendedRational::posInf()) == 2);
    CHECK(sturm_count(P("x1^2-2"), ExtendedRational::finite(Rational(0)),
                      ExtendedRational::finite(Rational(2))) == 1);
    CHECK_THROWS_AS(sturm_count(Polynomial(1), ExtendedRational::negInf(), ExtendedRational::posInf()),
                    PreconditionError);
}

TEST_CASE("root isolation") {
    auto roots = isolate_roots(P("x1^2-2"));
    REQUIRE(roots.size() == 2);
    CHECK_FALSE(roots[0]->isRational());
    CHECK_FALSE(roots[1]->isRational());
    CHECK(compare_points(roots[0], roots[1]) < 0);
    CHECK(sign_at(P("x1"), roots[0]) < 0);
    CHECK(sign_at(P("x1"), roots[1]) > 0);

    CHECK(isolate_roots(P("x1^2+1")).empty());

    // (x-1)^2 (x+2) has root set {1, -2}.
    auto collapsed = isolate_roots(P("x1^3 - 3*x1 + 2"));
    REQUIRE(collapsed.size() == 2);
    CHECK(collapsed[0]->isRational());
    CHECK(collapsed[0]->rationalValue() == -2);
    CHECK(collapsed[1]->isRational());
    CHECK(collapsed[1]->rationalValue() == 1);

    // Rational roots with denominators: (2x-1)(3x+5).
    auto rationals = isolate_roots(P("6*x1^2 + 7*x1 - 5"));
    REQUIRE(rationals.size() == 2);
    CHECK(rationals[0]->rationalValue() == Rational(-5, 3));
    CHECK(rationals[1]->rationalValue() == Rational(1, 2));
}

TEST_CASE("point comparison across different polynomials") {
    // sqrt(2) from x^2-2 and from x^4-4 compare equal.
    auto a = isolate_roots(P("x1^2-2"))[1];
    auto b = isolate_roots(P("x1^4-4"))[1];
    CHECK(compare_points(a, b) == 0);
    // sqrt(2) < sqrt(3), and rationals interleave correctly.
    auto c = isolate_roots(P("x1^2-3"))[1];
    CHECK(compare_points(a, c) < 0);
    auto mid = AlgebraicPoint::fromRational(Rational(3, 2));
    CHECK(compare_points(a, mid) < 0);
    CHECK(compare_points(c, mid) > 0);
}

TEST_CASE("exact signs at algebraic points") {
    auto sqrt2 = isolate_roots(P("x1^2-2"))[1];
    CHECK(sign_at(P("x1^2-2"), sqrt2) == 0);
    CHECK(sign_at(P("x1^4-4"), sqrt2) == 0);     // shared factor
    CHECK(sign_at(P("x1-2"), sqrt2) < 0);
    CHECK(sign_at(P("x1-1"), sqrt2) > 0);
    CHECK(sign_at(P("x1^2-3"), sqrt2) < 0);
    CHECK(sign_at(Polynomial(1), sqrt2) == 0);
}

TEST_CASE("realization of the half-open example") {
    IntervalSet s = realize_univariate(F("[x1 >= 0] & [x1^2 - 1 < 0]"));
    CHECK(s.str() == "{[pt 0], (0,1)}");
    CHECK(set_equal(s, zero_one_half_open()));

    CHECK(realize_univariate(F("[x1^2 + 1 <= 0]")).isEmpty());

    IntervalSet two = realize_univariate(F("[x1^2 - 2 = 0]"));
    auto pieces = two.pieces();
    REQUIRE(pieces.size() == 2);
    CHECK(pieces[0].isPoint);
    CHECK(pieces[1].isPoint);
    CHECK_FALSE(pieces[0].point->isRational());

    // Constant atoms fold.
    CHECK(realize_univariate(F("[x1 >= 0] & [1 > 0]")).str() == "{[pt 0], (0,inf)}");
    CHECK(realize_univariate(F("[1 < 0]")).isEmpty());
}

TEST_CASE("canonical pieces merge across interior points") {
    // x(x^2-1) != 0 union {0} keeps three pieces; (x^2-1) != 0 with 0 kept merges.
    IntervalSet s = realize_univariate(F("[x1^2 - 1 < 0] & ([x1 = 0] | [x1 > 0] | [x1 < 0])"));
    CHECK(s.str() == "{(-1,1)}");
    IntervalSet t = realize_univariate(F("[x1^2 - 1 <= 0]"));
    CHECK(t.str() == "{[pt -1], (-1,1), [pt 1]}");
}

TEST_CASE("realization agrees with direct evaluation") {
    Rng rng(89);
    int checks = 0;
    while (checks < 500) {
        Formula f = testutil::random_formula(rng, 1, 3, 3, 3);
        IntervalSet s = realize_univariate(f);
        for (int i = 0; i < 10; ++i, ++checks) {
            Rational x = testutil::random_rational(rng, 10, 6);
            CHECK(s.containsRational(x) == eval_formula(f, {x}));
        }
    }
}

TEST_CASE("endpoints of the half-open interval") {
    auto e = endpoints(zero_one_half_open());
    REQUIRE(e.size() == 2);
    CHECK(e[0]->rationalValue() == 0);
    CHECK(e[1]->rationalValue() == 1);

    // Endpoints of a full line and of a single point.
    CHECK(endpoints(IntervalSet::all()).empty());
    IntervalSet pt = IntervalSet::fromDecomposition({AlgebraicPoint::fromRational(Rational(5))},
                                                    {true}, {false, false});
    auto ep = endpoints(pt);
    REQUIRE(ep.size() == 1);
    CHECK(ep[0]->rationalValue() == 5);
}

TEST_CASE("endpoint subadditivity on random tuples") {
    Rng rng(97);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + static_cast<int>(rng() % 3);
        std::vector<IntervalSet> sets;
        for (int i = 0; i < n; ++i) sets.push_back(random_interval_set(rng));
        IntervalSet u = sets[0];
        for (int i = 1; i < n; ++i) u = set_union(u, sets[i]);
        std::vector<std::vector<PointRef>> groups;
        for (const auto& s : sets) groups.push_back(endpoints(s));
        std::vector<PointRef> rhs = merge_points(groups);
        for (const PointRef& e : endpoints(u)) {
            bool found = false;
            for (const PointRef& r : rhs)
                if (compare_points(e, r) == 0) found = true;
            CHECK(found);
        }
    }
}

TEST_CASE("common refinement of the book example") {
    LinePartition part = common_refinement({zero_one_half_open()});
    CHECK(part.cellCount() == 5);
    auto cells = part.cellStrings();
    REQUIRE(cells.size() == 5);
    CHECK(cells[0] == "{(-inf,0)}");
    CHECK(cells[1] == "{[pt 0]}");
    CHECK(cells[2] == "{(0,1)}");
    CHECK(cells[3] == "{[pt 1]}");
    CHECK(cells[4] == "{(1,inf)}");
}

TEST_CASE("basic boolean algebra of the book example") {
    auto basics = basic_boolean_algebra({zero_one_half_open()});
    REQUIRE(basics.size() == 2);
    // A({}) = (-inf,0) union [1,inf); A({0}) = [0,1).
    const BasicSet* empty = nullptr;
    const BasicSet* full = nullptr;
    for (const auto& b : basics) {
        if (b.indexSet.empty()) empty = &b;
        else full = &b;
    }
    REQUIRE(empty != nullptr);
    REQUIRE(full != nullptr);
    CHECK(set_equal(full->set, zero_one_half_open()));
    CHECK(full->components.size() == 1);
    CHECK(empty->components.size() == 2);
    // B([0,1)) = {(-inf,0), [0,1), [1,inf)}.
    std::vector<std::string> componentStrings;
    for (const auto& b : basics)
        for (const auto& c : b.components) componentStrings.push_back(c.str());
    std::sort(componentStrings.begin(), componentStrings.end());
    std::vector<std::string> expected{"{(-inf,0)}", "{[pt 0], (0,1)}", "{[pt 1], (1,inf)}"};
    std::sort(expected.begin(), expected.end());
    CHECK(componentStrings == expected);
}

TEST_CASE("boolean algebra is an adapted partition and is coarsest") {
    Rng rng(101);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 1 + static_cast<int>(rng() % 3);
        std::vector<IntervalSet> sets;
        for (int i = 0; i < n; ++i) sets.push_back(random_interval_set(rng, 3));
        auto basics = basic_boolean_algebra(sets);
        std::vector<IntervalSet> parts;
        for (const auto& b : basics) parts.push_back(b.set);
        CHECK(is_partition_of_line(parts));
        CHECK(is_adapted(parts, sets));
        // Coarsest: merging two distinct basic sets breaks adaptedness.
        for (std::size_t i = 0; i < parts.size(); ++i)
            for (std::size_t j = i + 1; j < parts.size(); ++j) {
                std::vector<IntervalSet> merged;
                for (std::size_t t = 0; t < parts.size(); ++t) {
                    if (t == j) continue;
                    merged.push_back(t == i ? set_union(parts[i], parts[j]) : parts[t]);
                }
                CHECK_FALSE(is_adapted(merged, sets));
            }
    }
}

TEST_CASE("adaptedness and cdd of the line") {
    IntervalSet target = zero_one_half_open();
    LinePartition cdd = cdd_line({target});
    CHECK(is_adapted(cdd.cells(), {target}));
    CHECK(cdd.cellCount() == 5);

    // The boolean algebra is adapted but its cells are not all cylindrical.
    auto basics = basic_boolean_algebra({target});
    bool allCylindrical = true;
    for (const auto& b : basics)
        for (const auto& c : b.components)
            if (!is_cylindrical_cell(c)) allCylindrical = false;
    CHECK_FALSE(allCylindrical);
    for (const auto& cell : cdd.cells()) CHECK(is_cylindrical_cell(cell));

    CHECK_THROWS_AS(is_adapted({target}, {target}), PreconditionError);
}

TEST_CASE("cdd cell count is bounded by the endpoint count") {
    Rng rng(103);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 1 + static_cast<int>(rng() % 4);
        std::vector<IntervalSet> targets;
        std::size_t totalEndpoints = 0;
        for (int i = 0; i < n; ++i) {
            targets.push_back(random_interval_set(rng));
            totalEndpoints += endpoints(targets.back()).size();
        }
        LinePartition cdd = cdd_line(targets);
        CHECK(cdd.cellCount() <= 2 * totalEndpoints + 1);
    }
}

TEST_CASE("census of the worked families") {
    Census c = sign_condition_census({P("x1"), P("x1^2-1")});
    CHECK(c.totalB0 == 7);
    CHECK(c.rows.size() == 7);
    for (const auto& row : c.rows) CHECK(row.b0 == 1);

    Census single = sign_condition_census({P("x1")});
    CHECK(single.totalB0 == 3);
    CHECK(single.rows.size() == 3);

    // x^2-1 alone: sign + occurs twice.
    Census sq = sign_condition_census({P("x1^2-1")});
    CHECK(sq.totalB0 == 5);
    CHECK(sq.rows.size() == 3);
    for (const auto& row : sq.rows) {
        if (row.sigma[0] != -1) CHECK(row.b0 == 2);
        else CHECK(row.b0 == 1);
    }

    CHECK_THROWS_AS(sign_condition_census({Polynomial(1)}), PreconditionError);
}

TEST_CASE("census consistency with the refinement cell count") {
    Rng rng(107);
    for (int trial = 0; trial < 40; ++trial) {
        int s = 1 + static_cast<int>(rng() % 4);
        std::vector<Polynomial> family;
        for (int i = 0; i < s; ++i) family.push_back(testutil::random_nonzero_polynomial(rng, 1, 5, 4));
        Census c = sign_condition_census(family);
        std::vector<std::vector<PointRef>> groups;
        for (const auto& p : family)
            if (!p.isConstant()) groups.push_back(isolate_roots(p));
        std::size_t cells = 2 * merge_points(groups).size() + 1;
        CHECK(c.totalB0 == Integer(static_cast<unsigned long>(cells)));
    }
}

TEST_CASE("shared roots never split signs") {
    Rng rng(109);
    for (int trial = 0; trial < 30; ++trial) {
        Polynomial common = testutil::random_nonzero_polynomial(rng, 1, 2, 2);
        if (common.isConstant()) continue;
        Polynomial p = common * testutil::random_nonzero_polynomial(rng, 1, 2, 2);
        Polynomial q = common * testutil::random_nonzero_polynomial(rng, 1, 2, 2);
        if (p.isZero() || q.isZero()) continue;
        // At every shared root both entries must be zero simultaneously.
        for (const PointRef& r : isolate_roots(common)) {
            CHECK(sign_at(p, r) == 0);
            CHECK(sign_at(q, r) == 0);
        }
        Census c = sign_condition_census({p, q, common});
        for (const auto& row : c.rows) {
            if (row.sigma[2] == 0) {
                // common = 0 forces p = q = 0 there.
                CHECK(row.sigma[0] == 0);
                CHECK(row.sigma[1] == 0);
            }
        }
    }
}

TEST_CASE("census stays below the chapter bounds") {
    Rng rng(113);
    for (int trial = 0; trial < 50; ++trial) {
        int s = 1 + static_cast<int>(rng() % 5);
        int d = 1;
        std::vector<Polynomial> family;
        for (int i = 0; i < s; ++i) {
            Polynomial p = testutil::random_nonzero_polynomial(rng, 1, 6, 4);
            family.push_back(p);
            d = std::max(d, p.totalDegree());
        }
        Census c = sign_condition_census(family);
        CHECK(c.totalB0 <= bounds::bpr8_bound(s, d, 1, 1));
        CHECK(c.totalB0 <= bounds::main_bound_uniform(s, d, 1, 1, 1));
    }
}

TEST_CASE("linear growth of the refinement across subfamilies") {
    // Fixed family; refining over n of its realizations grows at most
    // linearly in n.
    std::vector<Formula> formulas{F("[x1^2 - 2 <= 0]"), F("[x1^3 - x1 > 0]"),
                                  F("[x1^2 - 3*x1 + 2 = 0]"), F("[x1 + 2 >= 0]")};
    std::vector<IntervalSet> sets;
    std::size_t maxSingle = 1;
    for (const auto& f : formulas) {
        sets.push_back(realize_univariate(f));
        maxSingle = std::max(maxSingle, cdd_line({sets.back()}).cellCount());
    }
    for (std::size_t n = 1; n <= sets.size(); ++n) {
        std::vector<IntervalSet> prefix(sets.begin(), sets.begin() + static_cast<long>(n));
        CHECK(cdd_line(prefix).cellCount() <= n * maxSingle);
    }
}

TEST_CASE("interval set serialization with algebraic endpoints") {
    IntervalSet s = realize_univariate(F("[x1^2 - 2 < 0]"));
    CHECK(s.str().find("alg x^2 - 2 in (") != std::string::npos);
    CHECK(s.str().front() == '{');
    auto pieces = s.pieces();
    REQUIRE(pieces.size() == 1);
    CHECK_FALSE(pieces[0].isPoint);
    CHECK(pieces[0].leftPt != nullptr);
    CHECK_FALSE(pieces[0].leftPt->isRational());
}
