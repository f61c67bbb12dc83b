#ifndef SAQ_LINE_HPP
#define SAQ_LINE_HPP

#include "saq/formula.hpp"
#include "saq/polynomial.hpp"
#include "saq/rational.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace saq {
namespace line {

struct ExtendedRational {
    int inf = 0; // -1 below every rational, +1 above, 0 finite
    Rational value;

    static ExtendedRational negInf() { return {-1, Rational(0)}; }
    static ExtendedRational posInf() { return {+1, Rational(0)}; }
    static ExtendedRational finite(const Rational& q) { return {0, q}; }
};
int compare(const ExtendedRational& a, const ExtendedRational& b);

// An exact point of the line: either a rational, or the unique root of a
// square-free polynomial in an open isolating interval whose endpoints
// are not roots. Refinement narrows the interval in place.
class AlgebraicPoint;
using PointRef = std::shared_ptr<AlgebraicPoint>;

class AlgebraicPoint {
public:
    static PointRef fromRational(const Rational& q);
    // coeffs[i] is the coefficient of x^i; the polynomial must be
    // square-free with exactly one root in (lo, hi) and non-root endpoints.
    static PointRef fromAlgebraic(std::vector<Rational> coeffs, const Rational& lo, const Rational& hi);

    bool isRational() const { return exact_.has_value(); }
    const Rational& rationalValue() const;
    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }
    Polynomial definingPolynomial() const; // univariate, variable count 1
    const std::vector<Rational>& definingCoeffs() const { return coeffs_; }

    void refineStep(); // halve the isolating interval
    std::string str() const;

private:
    friend int compare_points(const PointRef& a, const PointRef& b);
    friend int sign_at(const Polynomial& q, const PointRef& pt);

    std::vector<Rational> coeffs_;
    Rational lo_, hi_;
    std::optional<Rational> exact_;
    std::shared_ptr<const std::vector<std::vector<Rational>>> sturm_; // lazy

    const std::vector<std::vector<Rational>>& sturmSeq();
};

int compare_points(const PointRef& a, const PointRef& b);
// Exact sign of q at the point (shared roots detected through gcd).
int sign_at(const Polynomial& q, const PointRef& pt);

// Distinct real roots of p in (lo, hi]; the square-free part is taken
// internally. p must be a nonzero univariate polynomial.
int sturm_count(const Polynomial& p, const ExtendedRational& lo, const ExtendedRational& hi);

// All real roots, sorted increasing; rational roots are pinned exactly.
std::vector<PointRef> isolate_roots(const Polynomial& p);

// Sorts and deduplicates points drawn from different polynomials.
std::vector<PointRef> merge_points(const std::vector<std::vector<PointRef>>& groups);

// Canonical finite union of points and open intervals, stored as a cell
// decomposition over its boundary points.
class IntervalSet {
public:
    IntervalSet() : intervalIn_{false} {}

    static IntervalSet empty() { return IntervalSet(); }
    static IntervalSet all();
    // bounds sorted and distinct; pointIn has size bounds, intervalIn has
    // size bounds + 1 (leftmost cell first).
    static IntervalSet fromDecomposition(std::vector<PointRef> bounds, std::vector<bool> pointIn,
                                         std::vector<bool> intervalIn);

    bool isEmpty() const;
    bool isAllR() const;
    const std::vector<PointRef>& bounds() const { return bounds_; }
    const std::vector<bool>& pointFlags() const { return pointIn_; }
    const std::vector<bool>& intervalFlags() const { return intervalIn_; }

    bool containsPoint(const PointRef& pt) const;
    bool containsRational(const Rational& q) const;

    // Canonical piece list: points and maximal open intervals with no
    // mergeable adjacency.
    struct Piece {
        bool isPoint = false;
        PointRef point;          // point piece
        ExtendedRational left;   // open piece bounds; algebraic bounds are
        ExtendedRational right;  // carried via leftPt/rightPt when set
        PointRef leftPt, rightPt;
    };
    std::vector<Piece> pieces() const;
    std::string str() const;

    std::vector<IntervalSet> components() const;

private:
    std::vector<PointRef> bounds_;
    std::vector<bool> pointIn_;
    std::vector<bool> intervalIn_;
};

IntervalSet set_union(const IntervalSet& a, const IntervalSet& b);
IntervalSet set_intersection(const IntervalSet& a, const IntervalSet& b);
IntervalSet set_difference(const IntervalSet& a, const IntervalSet& b);
bool set_equal(const IntervalSet& a, const IntervalSet& b);
bool set_subset(const IntervalSet& a, const IntervalSet& b);
bool set_disjoint(const IntervalSet& a, const IntervalSet& b);

// Exact realization of a univariate formula.
IntervalSet realize_univariate(const Formula& f);

// clos(S) \ int(S), as exact points.
std::vector<PointRef> endpoints(const IntervalSet& s);

// A cdd of the line: marked points plus the maximal open intervals of
// their complement.
struct LinePartition {
    std::vector<PointRef> points;

    std::size_t cellCount() const { return points.empty() ? 1 : 2 * points.size() + 1; }
    std::vector<IntervalSet> cells() const;
    std::vector<std::string> cellStrings() const;
};

LinePartition common_refinement(const std::vector<IntervalSet>& sets);

struct BasicSet {
    std::vector<int> indexSet; // subset I of {0..n-1} this basic set realizes
    IntervalSet set;
    std::vector<IntervalSet> components;
};

// Nonempty basic sets A(I) of the arrangement plus their connected
// components.
std::vector<BasicSet> basic_boolean_algebra(const std::vector<IntervalSet>& sets);

bool is_adapted(const std::vector<IntervalSet>& partition, const std::vector<IntervalSet>& targets);
bool is_partition_of_line(const std::vector<IntervalSet>& cells);
// True when the set is a single point or a single open interval.
bool is_cylindrical_cell(const IntervalSet& s);

LinePartition cdd_line(const std::vector<IntervalSet>& targets);

struct CensusRow {
    std::vector<int> sigma; // aligned with the family order
    Integer b0{0};
};

struct Census {
    std::vector<Polynomial> family;
    std::vector<CensusRow> rows; // realizable conditions only
    Integer totalB0{0};

    std::string toJson() const;
};

// Exact per-sign-condition component counts over the family's
// sign-invariant cells.
Census sign_condition_census(const std::vector<Polynomial>& family);

} // namespace line
} // namespace saq

#endif
