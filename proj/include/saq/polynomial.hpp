#ifndef SAQ_POLYNOMIAL_HPP
#define SAQ_POLYNOMIAL_HPP

#include "saq/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace saq {

// Dense exponent vector over x1..xk. Ordered graded-lexicographically:
// lower total degree first, ties broken by comparing exponents from the
// first variable (a larger exponent on an earlier variable is larger).
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(std::vector<int> exponents);

    static Monomial one(int variableCount) { return Monomial(std::vector<int>(variableCount, 0)); }
    static Monomial variable(int index, int variableCount);

    int variableCount() const { return static_cast<int>(exps_.size()); }
    int exponent(int i) const { return exps_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& exponents() const { return exps_; }
    int totalDegree() const;

    Monomial operator*(const Monomial& other) const;
    bool operator==(const Monomial& other) const { return exps_ == other.exps_; }
    bool operator<(const Monomial& other) const;

private:
    std::vector<int> exps_;
};

// Sparse multivariate polynomial with exact rational coefficients.
// Invariants: no stored coefficient is zero; every key has length
// variableCount(); the term map is kept in graded-lex order.
class Polynomial {
public:
    Polynomial() : vars_(0) {}
    explicit Polynomial(int variableCount) : vars_(variableCount) {}

    static Polynomial constant(const Rational& c, int variableCount);
    // 0-based variable index; prints as x{index+1}.
    static Polynomial variable(int index, int variableCount);
    static Polynomial monomial(const Rational& c, const Monomial& m);

    int variableCount() const { return vars_; }
    bool isZero() const { return terms_.empty(); }
    bool isConstant() const;
    Rational constantValue() const; // 0 for the zero polynomial
    std::size_t termCount() const { return terms_.size(); }
    const std::map<Monomial, Rational>& terms() const { return terms_; }

    void addTerm(const Monomial& m, const Rational& c);

    Polynomial operator+(const Polynomial& q) const;
    Polynomial operator-(const Polynomial& q) const;
    Polynomial operator-() const;
    Polynomial operator*(const Polynomial& q) const;
    Polynomial operator*(const Rational& c) const;
    bool operator==(const Polynomial& q) const { return vars_ == q.vars_ && terms_ == q.terms_; }
    bool operator!=(const Polynomial& q) const { return !(*this == q); }
    bool operator<(const Polynomial& q) const;

    Rational eval(const std::vector<Rational>& point) const;
    int totalDegree() const; // 0 for constants and for the zero polynomial
    int degreeIn(int var) const;

    // Remaps into an ambient with newVariableCount variables; mapping[i]
    // is the new index of old variable i.
    Polynomial remapVariables(int newVariableCount, const std::vector<int>& mapping) const;

    std::string str() const;          // variables named x1..xk
    std::string strHomogeneous() const; // variables named x0..xk (after homogenize)

private:
    int vars_;
    std::map<Monomial, Rational> terms_;
};

Polynomial add(const Polynomial& p, const Polynomial& q);
Polynomial mul(const Polynomial& p, const Polynomial& q);
Polynomial pow(const Polynomial& p, int e);

Rational eval(const Polynomial& p, const std::vector<Rational>& point);

// Formal partial derivative with respect to variable i, 1-based.
Polynomial partial_derivative(const Polynomial& p, int i);

int total_degree(const Polynomial& p);

// Prepends a fresh variable of index 0 and pads every term up to the
// total degree. homogenize(0) is an error (degree undefined).
Polynomial homogenize(const Polynomial& p);

// Substitutes 1 for variable 0 and drops it; inverse of homogenize.
Polynomial dehomogenize(const Polynomial& p);

// Pins the last variable to a value, dropping one dimension.
Polynomial substitute_last(const Polynomial& p, const Rational& value);

// Text grammar: poly := term (('+'|'-') term)* ;
//               term := coeff('*' factor)* | factor('*' factor)* ;
//               factor := 'x'INT('^'INT)? ; coeff := INT('/'INT)?
// Variables are x1..xk. If variableCount < 0 the ambient dimension is
// inferred from the largest index present.
Polynomial parse_polynomial(const std::string& text, int variableCount = -1);

std::vector<Rational> parse_point(const std::string& text);

} // namespace saq

#endif
