#ifndef SAQ_SLP_HPP
#define SAQ_SLP_HPP

#include "saq/formula.hpp"
#include "saq/polynomial.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace saq {

// One addition step Q_j = u * X^alpha * prod Q_i^gamma_i
//                       + v * X^beta  * prod Q_i^delta_i.
struct AdditiveStep {
    Rational u;
    std::vector<int> alpha; // length k, >= 0
    std::vector<int> gamma; // length j-1, >= 0
    Rational v;
    std::vector<int> beta;  // length k, >= 0
    std::vector<int> delta; // length j-1, >= 0
};

// Straight-line program witnessing additive complexity. Division-free
// when every final exponent is >= 0; otherwise the program is in normal
// form, where negative exponents are permitted only in the final step.
struct AdditiveRepresentation {
    int variableCount = 0;
    std::vector<AdditiveStep> steps;
    Rational finalCoeff{1};
    std::vector<int> finalVarExponents;  // zeta, length k
    std::vector<int> finalStepExponents; // eta, length = steps.size()

    int length() const { return static_cast<int>(steps.size()); }
    bool isDivisionFree() const;
};

struct ValidationReport {
    bool ok = true;
    std::string message; // names the first offending step/field on failure
};

ValidationReport validate(const AdditiveRepresentation& rep, bool divisionFree);

// Division-free expansion; throws ResourceCapError if an intermediate or
// the final product exceeds termLimit terms.
Polynomial expand(const AdditiveRepresentation& rep, std::size_t termLimit = 1000000);

// Normal-form expansion as an exact quotient numerator/denominator.
std::pair<Polynomial, Polynomial> expand_quotient(const AdditiveRepresentation& rep,
                                                  std::size_t termLimit = 1000000);

// Splits a normal-form program into division-free numerator and
// denominator programs. Requires the steps feeding positive final
// exponents and those feeding negative ones to be disjoint (the lemma
// behind the normal form is existential; no normalization is attempted).
std::pair<AdditiveRepresentation, AdditiveRepresentation>
split_quotient(const AdditiveRepresentation& rep);

using RepMap = std::map<Polynomial, AdditiveRepresentation>;

struct FewnomialSystem {
    int baseVariableCount = 0;    // k
    int ambientVariableCount = 0; // k + sum a_i
    std::vector<Polynomial> trinomialEquations; // in the ambient variables
    Formula rewrittenFormula;                   // trinomials = 0 conjoined with the rewritten atoms
    // Distinct atom polynomials in first-occurrence order with their programs.
    std::vector<std::pair<Polynomial, AdditiveRepresentation>> atomPrograms;
};

// Rewrites a formula over SLP-defined polynomials as a fewnomial system:
// one fresh variable per addition step, one trinomial equation per step,
// and each atom P * 0 replaced by its final-step monomial form.
// Atoms must use relations in {=0, >0, <0} and every atom polynomial
// needs a division-free representation in reps.
FewnomialSystem fewnomial_reduce(const Formula& formula, const RepMap& reps);

// Appends the step values Q_ij(x) for every program, in system order.
std::vector<Rational> lift_point(const std::vector<Rational>& x, const FewnomialSystem& system);
std::vector<Rational> project_point(const std::vector<Rational>& lifted, int k);

// (a, k) with a the sum of representation lengths over the list; a
// polynomial without a representation falls back to monomials - 1.
AdditiveFormat additive_format_of(const std::vector<Polynomial>& polys, const RepMap& reps);

// Measured additive format of a formula: distinct atom polynomials fed
// through additive_format_of.
AdditiveFormat additive_format(const Formula& f, const RepMap& reps = {});

// SLP line format, one program per file:
//   VARS k
//   STEP u ; a1,...,ak ; g1,...,g_{j-1} ; v ; b1,...,bk ; d1,...,d_{j-1}
//   FINAL c ; z1,...,zk ; e1,...,ea
AdditiveRepresentation parse_slp(const std::string& text);
std::string slp_to_string(const AdditiveRepresentation& rep);

} // namespace saq

#endif
