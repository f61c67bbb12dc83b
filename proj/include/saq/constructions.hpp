#ifndef SAQ_CONSTRUCTIONS_HPP
#define SAQ_CONSTRUCTIONS_HPP

#include "saq/formula.hpp"
#include "saq/polynomial.hpp"
#include "saq/slp.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace saq {
namespace construct {

// Polynomial map R^k -> R^m, one component per output coordinate.
struct PolyMap {
    std::vector<Polynomial> components;

    int sourceDimension() const;
    static PolyMap coordinateProjection(int sourceDim, int firstCoords);
};

// Named positive parameters with a declared order; later entries play the
// role of parameters infinitesimal relative to earlier ones.
class ParamEnv {
public:
    void set(const std::string& name, const Rational& value);
    const Rational& get(const std::string& name) const;
    bool has(const std::string& name) const;
    const std::vector<std::pair<std::string, Rational>>& entries() const { return entries_; }

private:
    std::vector<std::pair<std::string, Rational>> entries_;
};

// Halves env[name] until predicate(value) holds twice in a row, up to
// maxHalvings times; the testable surrogate for "for all small enough".
Rational halve_until(ParamEnv& env, const std::string& name,
                     const std::function<bool(const Rational&)>& predicate, int maxHalvings = 60);

// Variable layout of the join constructions: blocks X^0..X^p of k
// variables, then T_0..T_p, then A_{ij} for 0 <= i < j <= p in
// lexicographic order.
struct JoinLayout {
    int p = 0;
    int k = 0;

    int pairCount() const { return (p + 1) * p / 2; }
    int ambient() const { return (p + 1) * (k + 1) + pairCount(); }
    int xVar(int block, int coord) const { return block * k + coord; }
    int tVar(int block) const { return (p + 1) * k + block; }
    int aVar(int i, int j) const;
};

// A formula together with division-free programs for the atom
// polynomials the construction knows good programs for.
struct BuiltFormula {
    Formula formula;
    RepMap reps;
};

BuiltFormula omega_R(int p, int k, const Rational& R);
BuiltFormula theta1(int p, int k);
BuiltFormula theta1_eps(int p, int k, const Rational& eps);
BuiltFormula theta2(const Formula& phi, int p, const RepMap& phiReps = {});
BuiltFormula theta3(const PolyMap& f, int p);
BuiltFormula upsilon(int p, int k);

BuiltFormula join(const Formula& phi, int p, const Rational& R, const RepMap& phiReps = {});
BuiltFormula fibered_join(const Formula& phi, const PolyMap& f, int p, const Rational& R,
                          const RepMap& phiReps = {});
BuiltFormula thickened_fibered_join(const Formula& phi, const PolyMap& f, int p, const Rational& R,
                                    const Rational& eps, const RepMap& phiReps = {});
BuiltFormula thickened_diagonal(const Formula& phi, int p, const Rational& R, const Rational& eps,
                                const RepMap& phiReps = {});

// Slack-squared transform of a P-closed formula: F <= 0 becomes
// F - V_i^2 = 0, F >= 0 becomes -F - V_i^2 = 0, equalities are kept.
// One V per distinct atom polynomial, appended in first-occurrence order.
Formula dagger(const Formula& phi);
// dagger plus U1^2 + |X|^2 - R^2 = 0 and U2^2 + |V|^2 - R'^2 = 0 with
// fresh U1, U2 appended last.
Formula dagger_RRprime(const Formula& phi, const Rational& R, const Rational& Rprime);
Formula phi_R(const Formula& phi, const Rational& R);

// Omega^R /\ bar(Theta_1 /\ Theta_2^{dagger} /\ Theta_3^{projection}) /\ U > 0,
// with last variable U. env must supply R and Rprime.
Formula star_formula(const Formula& phi, int p, const ParamEnv& env);

// { P^2 <= t (Q^2 - t^N) } /\ { |x|^2 <= R^2 } /\ { t > 0 } in k+1
// variables with t last and N = 2 deg(Q) + 1.
Formula deformation_tube(const Polynomial& P, const Polynomial& Q, const Rational& R);
Formula tube_at(const Formula& tube, const Rational& t);

struct QuotientPair {
    Polynomial num; // P_i with F_i Q_i = P_i
    Polynomial den; // Q_i
};

// Replaces every atom F_i = 0 of a negation-free equality-only formula
// by bar(P_i)^2 - U (bar(Q)^2 - U^N) <= 0 with bar(P_i) = P_i prod_{j != i} Q_j,
// bar(Q) = prod_j Q_j, N = 2 deg(bar Q) + 1; conjoins per-block balls and
// U > 0. Missing pairs default to (F_i, 1). blockRadii lists (size, radius)
// block by block and must cover the ambient.
Formula level1_bar(const Formula& phi, const std::map<Polynomial, QuotientPair>& pairs,
                   const std::vector<std::pair<int, Rational>>& blockRadii);

Polynomial def_poly(const Polynomial& Q, const Polynomial& H, const Rational& zeta);
// { H, dH/dX_1, ..., dH/dX_p }
std::vector<Polynomial> cr_system(const Polynomial& H, int p);
std::vector<Polynomial> cr_system_homogenized(const Polynomial& H, int p);
Polynomial g_poly(int k, const Rational& omega);

// (sum X_i^2)^{d/2} + sum c_i X_i^d with small positive pseudo-random
// rational c_i; d must be even. Genericity is not verified.
Polynomial default_positive_poly(int k, int d, unsigned long seed);

} // namespace construct
} // namespace saq

#endif
