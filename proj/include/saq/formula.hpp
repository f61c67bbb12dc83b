#ifndef SAQ_FORMULA_HPP
#define SAQ_FORMULA_HPP

#include "saq/polynomial.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace saq {

enum class Rel { Eq, Gt, Lt, Ge, Le };

std::string rel_string(Rel r);
Rel flip_rel(Rel r); // logical negation for strict/weak pairs; Eq has no single flip

struct Atom {
    Polynomial poly;
    Rel rel = Rel::Eq;

    bool holds(const std::vector<Rational>& point) const;
    bool holdsForSign(int s) const; // decides the relation from sign(poly(x))
    bool operator==(const Atom& o) const { return rel == o.rel && poly == o.poly; }
};

// Quantifier-free boolean combination of polynomial sign atoms.
// Immutable tree with value semantics; And/Or are n-ary.
class Formula {
public:
    enum class Kind { Leaf, And, Or, Not };

    Formula() = default;

    static Formula atom(Polynomial p, Rel r);
    static Formula mkAnd(std::vector<Formula> children);
    static Formula mkOr(std::vector<Formula> children);
    static Formula mkNot(Formula f);

    bool valid() const { return node_ != nullptr; }
    Kind kind() const;
    const Atom& leaf() const;
    const std::vector<Formula>& children() const;
    int ambientDimension() const;

    // Extends every atom into a larger ambient; mapping as in
    // Polynomial::remapVariables. Identity-prefix padding when mapping is empty.
    Formula remapVariables(int newVariableCount, const std::vector<int>& mapping = {}) const;

    void collectAtoms(std::vector<Atom>& out) const;
    // Distinct atom polynomials in first-occurrence order.
    std::vector<Polynomial> distinctPolynomials() const;

    bool operator==(const Formula& o) const;
    std::string str() const;

private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct DenseFormat {
    int s = 0; // distinct atom polynomials
    int d = 0; // max total degree
    int k = 0; // ambient dimension
};

struct AdditiveFormat {
    long long a = 0;
    int k = 0;
};

DenseFormat dense_format(const Formula& f);

bool eval_formula(const Formula& f, const std::vector<Rational>& point);

// Disjunctive normal form; negations pushed to atoms by relation
// flipping (a negated equality splits into the two strict atoms).
Formula to_dnf(const Formula& f, std::size_t clauseLimit = 10000);

bool is_p_closed(const Formula& f);

// sigma in {-1,0,+1}^P over a finite family, keyed in canonical order.
using SignCondition = std::map<Polynomial, int>;

Formula sign_condition_formula(const SignCondition& sigma);

// Closed-and-bounded relaxation: ball sum(x_i^2) <= 1/delta, equalities
// kept, sign -1 goes to P <= -delta, sign +1 to P >= delta.
Formula relaxed_sign_condition(const SignCondition& sigma, const Rational& delta);

// Strict-inequality replacement: sign 0 becomes -delta < P < delta,
// sign +1 becomes P > eps, sign -1 becomes P < -eps, plus |X|^2 < Omega^2.
// The variety conjunct Q = 0 is left to the caller.
Formula nonstrict_to_strict(const SignCondition& sigma, const Rational& eps, const Rational& delta,
                            const Rational& omega);

// Pins the last variable of every atom to a value, dropping one dimension.
Formula substitute_last(const Formula& f, const Rational& value);

// Atom grammar `[ poly REL ]` with REL in {=0, >0, <0, >=0, <=0};
// connectives &, |, !, parentheses; precedence ! > & > |.
Formula parse_formula(const std::string& text, int variableCount = -1);

} // namespace saq

#endif
