#include "saq/constructions.hpp"

#include "saq/errors.hpp"

#include <algorithm>
#include <random>

namespace saq {
namespace construct {

int PolyMap::sourceDimension() const {
    if (components.empty()) throw PreconditionError("empty polynomial map");
    int k = components[0].variableCount();
    for (const auto& c : components)
        if (c.variableCount() != k) throw PreconditionError("polynomial map components disagree on dimension");
    return k;
}

PolyMap PolyMap::coordinateProjection(int sourceDim, int firstCoords) {
    if (firstCoords < 1 || firstCoords > sourceDim)
        throw PreconditionError("coordinate projection range out of bounds");
    PolyMap f;
    for (int i = 0; i < firstCoords; ++i) f.components.push_back(Polynomial::variable(i, sourceDim));
    return f;
}

void ParamEnv::set(const std::string& name, const Rational& value) {
    if (value <= 0) throw PreconditionError("parameter '" + name + "' must be positive");
    for (auto& [n, v] : entries_) {
        if (n == name) {
            v = value;
            return;
        }
    }
    entries_.emplace_back(name, value);
}

const Rational& ParamEnv::get(const std::string& name) const {
    for (const auto& [n, v] : entries_)
        if (n == name) return v;
    throw PreconditionError("parameter '" + name + "' is not set");
}

bool ParamEnv::has(const std::string& name) const {
    for (const auto& [n, v] : entries_)
        if (n == name) return true;
    return false;
}

Rational halve_until(ParamEnv& env, const std::string& name,
                     const std::function<bool(const Rational&)>& predicate, int maxHalvings) {
    Rational value = env.get(name);
    int stableRuns = 0;
    for (int i = 0; i <= maxHalvings; ++i) {
        if (predicate(value)) {
            ++stableRuns;
            if (stableRuns >= 2) {
                env.set(name, value);
                return value;
            }
        } else {
            stableRuns = 0;
        }
        value /= 2;
    }
    throw PreconditionError("parameter '" + name + "' did not stabilize within " +
                            std::to_string(maxHalvings) + " halvings");
}

int JoinLayout::aVar(int i, int j) const {
    if (!(0 <= i && i < j && j <= p)) throw PreconditionError("A-variable index out of range");
    // Rank of (i,j) in lexicographic order over 0 <= i < j <= p.
    int rank = 0;
    for (int r = 0; r < i; ++r) rank += p - r;
    rank += j - i - 1;
    return (p + 1) * (k + 1) + rank;
}

namespace {

// Program for sum_{v in vars} X_v^(power) - c in an `ambient`-variable space.
AdditiveRepresentation rep_power_sum(const std::vector<int>& vars, int power, const Rational& c,
                                     int ambient) {
    AdditiveRepresentation rep;
    rep.variableCount = ambient;
    auto unit = [&](int var) {
        std::vector<int> e(static_cast<std::size_t>(ambient), 0);
        e[static_cast<std::size_t>(var)] = power;
        return e;
    };
    std::vector<int> zerosVars(static_cast<std::size_t>(ambient), 0);
    if (vars.empty()) throw PreconditionError("empty variable list for sum program");
    if (vars.size() == 1 && c == 0) {
        rep.finalVarExponents = unit(vars[0]);
        rep.finalStepExponents = {};
        return rep;
    }
    int made = 0;
    auto stepGamma = [&](int idx) {
        std::vector<int> g(static_cast<std::size_t>(made), 0);
        if (idx >= 0) g[static_cast<std::size_t>(idx)] = 1;
        return g;
    };
    // Fold the variables pairwise; the constant rides on the first step
    // when there is only one variable.
    int accIndex = -1;
    std::size_t i = 0;
    if (vars.size() == 1) {
        AdditiveStep s;
        s.u = 1;
        s.alpha = unit(vars[0]);
        s.gamma = stepGamma(-1);
        s.v = -c;
        s.beta = zerosVars;
        s.delta = stepGamma(-1);
        rep.steps.push_back(std::move(s));
        accIndex = made++;
        i = 1;
    } else {
        AdditiveStep s;
        s.u = 1;
        s.alpha = unit(vars[0]);
        s.gamma = stepGamma(-1);
        s.v = 1;
        s.beta = unit(vars[1]);
        s.delta = stepGamma(-1);
        rep.steps.push_back(std::move(s));
        accIndex = made++;
        i = 2;
        for (; i < vars.size(); ++i) {
            AdditiveStep t;
            t.u = 1;
            t.alpha = zerosVars;
            t.gamma = stepGamma(accIndex);
            t.v = 1;
            t.beta = unit(vars[i]);
            t.delta = stepGamma(-1);
            rep.steps.push_back(std::move(t));
            accIndex = made++;
        }
        if (c != 0) {
            AdditiveStep t;
            t.u = 1;
            t.alpha = zerosVars;
            t.gamma = stepGamma(accIndex);
            t.v = -c;
            t.beta = zerosVars;
            t.delta = stepGamma(-1);
            rep.steps.push_back(std::move(t));
            accIndex = made++;
        }
    }
    rep.finalVarExponents = zerosVars;
    rep.finalStepExponents.assign(static_cast<std::size_t>(made), 0);
    rep.finalStepExponents[static_cast<std::size_t>(accIndex)] = 1;
    return rep;
}

// Program for sum_l (X_{ai+l} - X_{bj+l})^2 - X_aVar, length 2k.
AdditiveRepresentation rep_block_distance(const JoinLayout& L, int blockI, int blockJ, int aVar) {
    AdditiveRepresentation rep;
    int ambient = L.ambient();
    rep.variableCount = ambient;
    std::vector<int> zerosVars(static_cast<std::size_t>(ambient), 0);
    auto unit = [&](int var, int power) {
        std::vector<int> e(static_cast<std::size_t>(ambient), 0);
        e[static_cast<std::size_t>(var)] = power;
        return e;
    };
    int made = 0;
    auto gammaOf = [&](std::initializer_list<std::pair<int, int>> entries) {
        std::vector<int> g(static_cast<std::size_t>(made), 0);
        for (auto [idx, e] : entries) g[static_cast<std::size_t>(idx)] = e;
        return g;
    };
    // D_l = X^i_l - X^j_l
    for (int l = 0; l < L.k; ++l) {
        AdditiveStep s;
        s.u = 1;
        s.alpha = unit(L.xVar(blockI, l), 1);
        s.gamma = gammaOf({});
        s.v = -1;
        s.beta = unit(L.xVar(blockJ, l), 1);
        s.delta = gammaOf({});
        rep.steps.push_back(std::move(s));
        ++made;
    }
    // Accumulate D_1^2 + ... + D_k^2.
    int acc = 0; // index of D_1; reused as accumulator index below
    if (L.k >= 2) {
        AdditiveStep s;
        s.u = 1;
        s.alpha = zerosVars;
        s.gamma = gammaOf({{0, 2}});
        s.v = 1;
        s.beta = zerosVars;
        s.delta = gammaOf({{1, 2}});
        rep.steps.push_back(std::move(s));
        acc = made++;
        for (int l = 2; l < L.k; ++l) {
            AdditiveStep t;
            t.u = 1;
            t.alpha = zerosVars;
            t.gamma = gammaOf({{acc, 1}});
            t.v = 1;
            t.beta = zerosVars;
            t.delta = gammaOf({{l, 2}});
            rep.steps.push_back(std::move(t));
            acc = made++;
        }
    }
    // Subtract the A variable.
    {
        AdditiveStep s;
        s.u = 1;
        s.alpha = zerosVars;
        s.gamma = L.k >= 2 ? gammaOf({{acc, 1}}) : gammaOf({{0, 2}});
        s.v = -1;
        s.beta = unit(aVar, 1);
        s.delta = gammaOf({});
        rep.steps.push_back(std::move(s));
        acc = made++;
    }
    rep.finalVarExponents = zerosVars;
    rep.finalStepExponents.assign(static_cast<std::size_t>(made), 0);
    rep.finalStepExponents[static_cast<std::size_t>(acc)] = 1;
    return rep;
}

AdditiveRepresentation remap_rep(const AdditiveRepresentation& rep, int ambient,
                                 const std::vector<int>& mapping) {
    AdditiveRepresentation out = rep;
    out.variableCount = ambient;
    auto remapVec = [&](const std::vector<int>& v) {
        std::vector<int> e(static_cast<std::size_t>(ambient), 0);
        for (std::size_t i = 0; i < v.size(); ++i)
            e[static_cast<std::size_t>(mapping[i])] += v[i];
        return e;
    };
    for (auto& s : out.steps) {
        s.alpha = remapVec(s.alpha);
        s.beta = remapVec(s.beta);
    }
    out.finalVarExponents = remapVec(out.finalVarExponents);
    return out;
}

Polynomial sum_of_powers(const std::vector<int>& vars, int power, const Rational& c, int ambient) {
    Polynomial out(ambient);
    for (int v : vars) {
        std::vector<int> e(static_cast<std::size_t>(ambient), 0);
        e[static_cast<std::size_t>(v)] = power;
        out.addTerm(Monomial(std::move(e)), Rational(1));
    }
    if (c != 0) out.addTerm(Monomial::one(ambient), -c);
    return out;
}

std::vector<int> block_vars(const JoinLayout& L, int block) {
    std::vector<int> vars;
    vars.reserve(static_cast<std::size_t>(L.k));
    for (int l = 0; l < L.k; ++l) vars.push_back(L.xVar(block, l));
    return vars;
}

std::vector<int> t_vars(const JoinLayout& L) {
    std::vector<int> vars;
    for (int i = 0; i <= L.p; ++i) vars.push_back(L.tVar(i));
    return vars;
}

std::vector<int> a_vars(const JoinLayout& L) {
    std::vector<int> vars;
    for (int i = 0; i < L.p; ++i)
        for (int j = i + 1; j <= L.p; ++j) vars.push_back(L.aVar(i, j));
    return vars;
}

void add_rep(RepMap& reps, const Polynomial& poly, const AdditiveRepresentation& rep) {
    reps.emplace(poly, rep);
}

JoinLayout layout_for(const Formula& phi, int p) {
    if (p < 0) throw PreconditionError("join constructions require p >= 0");
    return JoinLayout{p, phi.ambientDimension()};
}

} // namespace

BuiltFormula omega_R(int p, int k, const Rational& R) {
    if (p < 0 || k < 0) throw PreconditionError("omega_R requires p, k >= 0");
    if (R <= 0) throw PreconditionError("omega_R requires R > 0");
    JoinLayout L{p, k};
    int N = L.ambient();
    BuiltFormula out;
    std::vector<Formula> atoms;
    Rational R2 = R * R;
    for (int i = 0; i <= p; ++i) {
        Polynomial ball = sum_of_powers(block_vars(L, i), 2, R2, N);
        add_rep(out.reps, ball, rep_power_sum(block_vars(L, i), 2, R2, N));
        atoms.push_back(Formula::atom(std::move(ball), Rel::Le));
    }
    Polynomial tball = sum_of_powers(t_vars(L), 2, Rational(1), N);
    add_rep(out.reps, tball, rep_power_sum(t_vars(L), 2, Rational(1), N));
    atoms.push_back(Formula::atom(std::move(tball), Rel::Le));
    out.formula = Formula::mkAnd(std::move(atoms));
    return out;
}

BuiltFormula theta1(int p, int k) {
    if (p < 0 || k < 0) throw PreconditionError("theta1 requires p, k >= 0");
    JoinLayout L{p, k};
    int N = L.ambient();
    BuiltFormula out;
    std::vector<Formula> atoms;
    Polynomial tsum = sum_of_powers(t_vars(L), 1, Rational(1), N);
    add_rep(out.reps, tsum, rep_power_sum(t_vars(L), 1, Rational(1), N));
    atoms.push_back(Formula::atom(std::move(tsum), Rel::Eq));
    if (p >= 1) {
        Polynomial asum = sum_of_powers(a_vars(L), 2, Rational(0), N);
        add_rep(out.reps, asum, rep_power_sum(a_vars(L), 2, Rational(0), N));
        atoms.push_back(Formula::atom(std::move(asum), Rel::Eq));
    }
    out.formula = Formula::mkAnd(std::move(atoms));
    return out;
}

BuiltFormula theta1_eps(int p, int k, const Rational& eps) {
    if (eps <= 0) throw PreconditionError("theta1_eps requires eps > 0");
    JoinLayout L{p, k};
    int N = L.ambient();
    BuiltFormula out;
    std::vector<Formula> atoms;
    Polynomial tsum = sum_of_powers(t_vars(L), 1, Rational(1), N);
    add_rep(out.reps, tsum, rep_power_sum(t_vars(L), 1, Rational(1), N));
    atoms.push_back(Formula::atom(std::move(tsum), Rel::Eq));
    if (p >= 1) {
        Polynomial asum = sum_of_powers(a_vars(L), 2, eps, N);
        add_rep(out.reps, asum, rep_power_sum(a_vars(L), 2, eps, N));
        atoms.push_back(Formula::atom(std::move(asum), Rel::Le));
    }
    out.formula = Formula::mkAnd(std::move(atoms));
    return out;
}

BuiltFormula theta2(const Formula& phi, int p, const RepMap& phiReps) {
    JoinLayout L = layout_for(phi, p);
    int N = L.ambient();
    BuiltFormula out;
    std::vector<Formula> clauses;
    for (int i = 0; i <= p; ++i) {
        std::vector<int> mapping = block_vars(L, i);
        Formula shifted = phi.remapVariables(N, mapping);
        for (const auto& [poly, rep] : phiReps)
            add_rep(out.reps, poly.remapVariables(N, mapping), remap_rep(rep, N, mapping));
        Formula tzero = Formula::atom(Polynomial::variable(L.tVar(i), N), Rel::Eq);
        clauses.push_back(Formula::mkOr({std::move(tzero), std::move(shifted)}));
    }
    out.formula = Formula::mkAnd(std::move(clauses));
    return out;
}

BuiltFormula theta3(const PolyMap& f, int p) {
    int k = f.sourceDimension();
    JoinLayout L{p, k};
    int N = L.ambient();
    BuiltFormula out;
    if (p < 1) throw PreconditionError("theta3 requires p >= 1");
    std::vector<Formula> clauses;
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j <= p; ++j) {
            // |f(X^i) - f(X^j)|^2 = A_ij
            Polynomial sum(N);
            for (const Polynomial& comp : f.components) {
                Polynomial fi = comp.remapVariables(N, block_vars(L, i));
                Polynomial fj = comp.remapVariables(N, block_vars(L, j));
                Polynomial diff = fi - fj;
                sum = sum + diff * diff;
            }
            sum = sum - Polynomial::variable(L.aVar(i, j), N);
            std::vector<Formula> disjuncts;
            disjuncts.push_back(Formula::atom(Polynomial::variable(L.tVar(i), N), Rel::Eq));
            disjuncts.push_back(Formula::atom(Polynomial::variable(L.tVar(j), N), Rel::Eq));
            disjuncts.push_back(Formula::atom(std::move(sum), Rel::Eq));
            clauses.push_back(Formula::mkOr(std::move(disjuncts)));
        }
    }
    out.formula = Formula::mkAnd(std::move(clauses));
    return out;
}

BuiltFormula upsilon(int p, int k) {
    if (p < 1) throw PreconditionError("upsilon requires p >= 1");
    JoinLayout L{p, k};
    int N = L.ambient();
    BuiltFormula out;
    std::vector<Formula> clauses;
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j <= p; ++j) {
            Polynomial sum(N);
            for (int l = 0; l < k; ++l) {
                Polynomial diff = Polynomial::variable(L.xVar(i, l), N) -
                                  Polynomial::variable(L.xVar(j, l), N);
                sum = sum + diff * diff;
            }
            sum = sum - Polynomial::variable(L.aVar(i, j), N);
            add_rep(out.reps, sum, rep_block_distance(L, i, j, L.aVar(i, j)));
            std::vector<Formula> disjuncts;
            disjuncts.push_back(Formula::atom(Polynomial::variable(L.tVar(i), N), Rel::Eq));
            disjuncts.push_back(Formula::atom(Polynomial::variable(L.tVar(j), N), Rel::Eq));
            disjuncts.push_back(Formula::atom(std::move(sum), Rel::Eq));
            clauses.push_back(Formula::mkOr(std::move(disjuncts)));
        }
    }
    out.formula = Formula::mkAnd(std::move(clauses));
    return out;
}

namespace {

BuiltFormula conjoin(std::vector<BuiltFormula> parts) {
    BuiltFormula out;
    std::vector<Formula> formulas;
    for (auto& part : parts) {
        formulas.push_back(std::move(part.formula));
        for (auto& [poly, rep] : part.reps) out.reps.emplace(poly, std::move(rep));
    }
    out.formula = Formula::mkAnd(std::move(formulas));
    return out;
}

} // namespace

BuiltFormula join(const Formula& phi, int p, const Rational& R, const RepMap& phiReps) {
    JoinLayout L = layout_for(phi, p);
    return conjoin({omega_R(p, L.k, R), theta1(p, L.k), theta2(phi, p, phiReps)});
}

BuiltFormula fibered_join(const Formula& phi, const PolyMap& f, int p, const Rational& R,
                          const RepMap& phiReps) {
    JoinLayout L = layout_for(phi, p);
    if (f.sourceDimension() != L.k)
        throw PreconditionError("fibered join map must share the formula's ambient dimension");
    return conjoin({omega_R(p, L.k, R), theta1(p, L.k), theta2(phi, p, phiReps), theta3(f, p)});
}

BuiltFormula thickened_fibered_join(const Formula& phi, const PolyMap& f, int p, const Rational& R,
                                    const Rational& eps, const RepMap& phiReps) {
    JoinLayout L = layout_for(phi, p);
    if (f.sourceDimension() != L.k)
        throw PreconditionError("fibered join map must share the formula's ambient dimension");
    return conjoin({omega_R(p, L.k, R), theta1_eps(p, L.k, eps), theta2(phi, p, phiReps), theta3(f, p)});
}

BuiltFormula thickened_diagonal(const Formula& phi, int p, const Rational& R, const Rational& eps,
                                const RepMap& phiReps) {
    JoinLayout L = layout_for(phi, p);
    if (p < 1) throw PreconditionError("thickened diagonal requires p >= 1");
    return conjoin(
        {omega_R(p, L.k, R), theta1_eps(p, L.k, eps), theta2(phi, p, phiReps), upsilon(p, L.k)});
}

namespace {

Formula dagger_impl(const Formula& phi, int ambient, const std::map<Polynomial, int>& slackOf) {
    switch (phi.kind()) {
    case Formula::Kind::Leaf: {
        const Atom& a = phi.leaf();
        Polynomial F = a.poly.remapVariables(ambient, [&] {
            std::vector<int> id(static_cast<std::size_t>(a.poly.variableCount()));
            for (std::size_t i = 0; i < id.size(); ++i) id[i] = static_cast<int>(i);
            return id;
        }());
        if (a.rel == Rel::Eq) return Formula::atom(std::move(F), Rel::Eq);
        Polynomial v = Polynomial::variable(slackOf.at(a.poly), ambient);
        Polynomial vsq = v * v;
        // F <= 0 iff -F is a square, F >= 0 iff F is one; the slack-squared
        // orientation matches the |X|^2 <= R^2 atom below.
        if (a.rel == Rel::Le) return Formula::atom(F + vsq, Rel::Eq);
        if (a.rel == Rel::Ge) return Formula::atom(F - vsq, Rel::Eq);
        throw PreconditionError("dagger requires a P-closed formula");
    }
    case Formula::Kind::Not:
        throw PreconditionError("dagger requires a P-closed formula");
    default: {
        std::vector<Formula> kids;
        for (const auto& c : phi.children()) kids.push_back(dagger_impl(c, ambient, slackOf));
        return phi.kind() == Formula::Kind::And ? Formula::mkAnd(std::move(kids))
                                                : Formula::mkOr(std::move(kids));
    }
    }
}

std::map<Polynomial, int> slack_indices(const Formula& phi, int k) {
    std::map<Polynomial, int> slackOf;
    std::vector<Polynomial> polys = phi.distinctPolynomials();
    for (std::size_t i = 0; i < polys.size(); ++i) slackOf[polys[i]] = k + static_cast<int>(i);
    return slackOf;
}

} // namespace

Formula dagger(const Formula& phi) {
    if (!is_p_closed(phi)) throw PreconditionError("dagger requires a P-closed formula");
    int k = phi.ambientDimension();
    auto slackOf = slack_indices(phi, k);
    int ambient = k + static_cast<int>(slackOf.size());
    return dagger_impl(phi, ambient, slackOf);
}

Formula dagger_RRprime(const Formula& phi, const Rational& R, const Rational& Rprime) {
    if (!is_p_closed(phi)) throw PreconditionError("dagger requires a P-closed formula");
    if (R <= 0 || Rprime <= 0) throw PreconditionError("dagger radii must be positive");
    int k = phi.ambientDimension();
    auto slackOf = slack_indices(phi, k);
    int s = static_cast<int>(slackOf.size());
    int ambient = k + s + 2; // V block, then U1, U2
    Formula body = dagger_impl(phi, ambient, slackOf);
    int u1 = k + s, u2 = k + s + 1;
    std::vector<int> xs, vs;
    for (int i = 0; i < k; ++i) xs.push_back(i);
    for (int i = 0; i < s; ++i) vs.push_back(k + i);
    Polynomial a1 = sum_of_powers(xs, 2, R * R, ambient) +
                    Polynomial::variable(u1, ambient) * Polynomial::variable(u1, ambient);
    Polynomial a2 = sum_of_powers(vs, 2, Rprime * Rprime, ambient) +
                    Polynomial::variable(u2, ambient) * Polynomial::variable(u2, ambient);
    return Formula::mkAnd({std::move(body), Formula::atom(std::move(a1), Rel::Eq),
                           Formula::atom(std::move(a2), Rel::Eq)});
}

Formula phi_R(const Formula& phi, const Rational& R) {
    if (R <= 0) throw PreconditionError("phi_R requires R > 0");
    int k = phi.ambientDimension();
    std::vector<int> xs;
    for (int i = 0; i < k; ++i) xs.push_back(i);
    return Formula::mkAnd({phi, Formula::atom(sum_of_powers(xs, 2, R * R, k), Rel::Le)});
}

namespace {

struct BarData {
    Polynomial barQ;
    int tubeExponent; // N = 2 deg(barQ) + 1
    std::map<Polynomial, Polynomial> barP;
};

BarData bar_data(const std::vector<Polynomial>& polys, const std::map<Polynomial, QuotientPair>& pairs,
                 int ambient) {
    BarData out;
    std::map<Polynomial, QuotientPair> resolved;
    for (const Polynomial& F : polys) {
        auto it = pairs.find(F);
        if (it == pairs.end()) {
            resolved[F] = QuotientPair{F, Polynomial::constant(Rational(1), ambient)};
        } else {
            if (it->second.den.isZero()) throw PreconditionError("quotient pair denominator is zero");
            if (F * it->second.den != it->second.num)
                throw PreconditionError("quotient pair check failed: F*Q != P for " + F.str());
            resolved[F] = it->second;
        }
    }
    out.barQ = Polynomial::constant(Rational(1), ambient);
    for (const auto& [F, pq] : resolved) out.barQ = out.barQ * pq.den;
    out.tubeExponent = 2 * out.barQ.totalDegree() + 1;
    for (const auto& [F, pq] : resolved) {
        Polynomial barP = pq.num;
        for (const auto& [G, pq2] : resolved)
            if (!(G == F)) barP = barP * pq2.den;
        out.barP.emplace(F, std::move(barP));
    }
    return out;
}

// The transformed body over ambient+1 variables (U last): atoms
// F = 0 become barP^2 - U(barQ^2 - U^N) <= 0.
Formula level1_transform(const Formula& phi, const BarData& bar, int ambient) {
    int wide = ambient + 1;
    std::vector<int> id(static_cast<std::size_t>(ambient));
    for (std::size_t i = 0; i < id.size(); ++i) id[i] = static_cast<int>(i);
    Polynomial U = Polynomial::variable(ambient, wide);
    Polynomial barQw = bar.barQ.remapVariables(wide, id);
    Polynomial tube = U * (barQw * barQw - pow(U, bar.tubeExponent));
    struct Rec {
        const BarData& bar;
        const std::vector<int>& id;
        int wide;
        const Polynomial& tube;

        Formula operator()(const Formula& f) const {
            switch (f.kind()) {
            case Formula::Kind::Leaf: {
                const Atom& a = f.leaf();
                if (a.rel != Rel::Eq)
                    throw PreconditionError("level1_bar accepts only equality atoms");
                Polynomial barP = bar.barP.at(a.poly).remapVariables(wide, id);
                return Formula::atom(barP * barP - tube, Rel::Le);
            }
            case Formula::Kind::Not:
                throw PreconditionError("level1_bar accepts no negations");
            default: {
                std::vector<Formula> kids;
                for (const auto& c : f.children()) kids.push_back((*this)(c));
                return f.kind() == Formula::Kind::And ? Formula::mkAnd(std::move(kids))
                                                      : Formula::mkOr(std::move(kids));
            }
            }
        }
    };
    return Rec{bar, id, wide, tube}(phi);
}

} // namespace

Formula level1_bar(const Formula& phi, const std::map<Polynomial, QuotientPair>& pairs,
                   const std::vector<std::pair<int, Rational>>& blockRadii) {
    int ambient = phi.ambientDimension();
    int covered = 0;
    for (const auto& [size, r] : blockRadii) {
        if (size < 1 || r <= 0) throw PreconditionError("block radii must pair positive sizes with positive radii");
        covered += size;
    }
    if (covered != ambient)
        throw PreconditionError("block radii must cover the ambient dimension exactly");
    BarData bar = bar_data(phi.distinctPolynomials(), pairs, ambient);
    int wide = ambient + 1;
    Formula body = level1_transform(phi, bar, ambient);
    std::vector<Formula> conjuncts;
    int offset = 0;
    for (const auto& [size, r] : blockRadii) {
        std::vector<int> vars;
        for (int i = 0; i < size; ++i) vars.push_back(offset + i);
        offset += size;
        conjuncts.push_back(Formula::atom(sum_of_powers(vars, 2, r * r, wide), Rel::Le));
    }
    conjuncts.push_back(std::move(body));
    conjuncts.push_back(Formula::atom(Polynomial::variable(ambient, wide), Rel::Gt));
    return Formula::mkAnd(std::move(conjuncts));
}

Formula star_formula(const Formula& phi, int p, const ParamEnv& env) {
    if (!is_p_closed(phi)) throw PreconditionError("star formula requires a P-closed formula");
    if (p < 1) throw PreconditionError("star formula requires p >= 1");
    const Rational& R = env.get("R");
    const Rational& Rprime = env.get("Rprime");
    int k = phi.ambientDimension();

    Formula dag = dagger_RRprime(phi, R, Rprime);
    int khat = dag.ambientDimension();
    JoinLayout L{p, khat};
    int Nhat = L.ambient();

    PolyMap proj = PolyMap::coordinateProjection(khat, k);
    Formula inner = Formula::mkAnd(
        {theta1(p, khat).formula, theta2(dag, p).formula, theta3(proj, p).formula});

    BarData bar = bar_data(inner.distinctPolynomials(), {}, Nhat);
    Formula body = level1_transform(inner, bar, Nhat);

    // The dagger atoms pin |X|^2 + U1^2 = R^2 and |V|^2 + U2^2 = R'^2, so
    // each lifted block fits in the ball of squared radius R^2 + R'^2.
    int wide = Nhat + 1;
    Rational blockR2 = R * R + Rprime * Rprime;
    std::vector<Formula> conjuncts;
    for (int i = 0; i <= p; ++i) {
        std::vector<int> vars = block_vars(L, i);
        conjuncts.push_back(Formula::atom(sum_of_powers(vars, 2, blockR2, wide), Rel::Le));
    }
    conjuncts.push_back(Formula::atom(sum_of_powers(t_vars(L), 2, Rational(1), wide), Rel::Le));
    conjuncts.push_back(std::move(body));
    conjuncts.push_back(Formula::atom(Polynomial::variable(Nhat, wide), Rel::Gt));
    return Formula::mkAnd(std::move(conjuncts));
}

Formula deformation_tube(const Polynomial& P, const Polynomial& Q, const Rational& R) {
    if (Q.isZero()) throw PreconditionError("deformation tube requires Q != 0");
    if (R <= 0) throw PreconditionError("deformation tube requires R > 0");
    if (P.variableCount() != Q.variableCount())
        throw PreconditionError("deformation tube requires P, Q in the same variables");
    int k = P.variableCount();
    int wide = k + 1; // t last
    int tubeN = 2 * Q.totalDegree() + 1;
    std::vector<int> id(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < id.size(); ++i) id[i] = static_cast<int>(i);
    Polynomial Pw = P.remapVariables(wide, id);
    Polynomial Qw = Q.remapVariables(wide, id);
    Polynomial T = Polynomial::variable(k, wide);
    Polynomial atom = Pw * Pw - T * (Qw * Qw - pow(T, tubeN));
    std::vector<int> xs;
    for (int i = 0; i < k; ++i) xs.push_back(i);
    return Formula::mkAnd({Formula::atom(std::move(atom), Rel::Le),
                           Formula::atom(sum_of_powers(xs, 2, R * R, wide), Rel::Le),
                           Formula::atom(T, Rel::Gt)});
}

Formula tube_at(const Formula& tube, const Rational& t) {
    if (t <= 0) throw PreconditionError("the tube family is defined for t > 0");
    return substitute_last(tube, t);
}

Polynomial def_poly(const Polynomial& Q, const Polynomial& H, const Rational& zeta) {
    if (zeta <= 0 || zeta >= 1) throw PreconditionError("def_poly requires 0 < zeta < 1");
    if (Q.variableCount() != H.variableCount())
        throw PreconditionError("def_poly requires Q, H in the same variables");
    return Q * (Rational(1) - zeta) - H * zeta;
}

std::vector<Polynomial> cr_system(const Polynomial& H, int p) {
    if (p < 0 || p > H.variableCount())
        throw PreconditionError("cr_system requires 0 <= p <= variable count");
    std::vector<Polynomial> out{H};
    for (int i = 1; i <= p; ++i) out.push_back(partial_derivative(H, i));
    return out;
}

std::vector<Polynomial> cr_system_homogenized(const Polynomial& H, int p) {
    std::vector<Polynomial> out;
    for (const Polynomial& q : cr_system(H, p)) {
        if (q.isZero())
            throw PreconditionError("cr_system_homogenized: a vanishing derivative cannot be homogenized");
        out.push_back(homogenize(q));
    }
    return out;
}

Polynomial g_poly(int k, const Rational& omega) {
    if (k < 1) throw PreconditionError("g_poly requires k >= 1");
    if (omega <= 0) throw PreconditionError("g_poly requires Omega > 0");
    std::vector<int> xs;
    for (int i = 0; i < k; ++i) xs.push_back(i);
    return sum_of_powers(xs, 2, omega * omega, k);
}

Polynomial default_positive_poly(int k, int d, unsigned long seed) {
    if (k < 1 || d < 2 || d % 2 != 0)
        throw PreconditionError("default positive polynomial requires k >= 1 and even d >= 2");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> num(1, 9);
    std::uniform_int_distribution<int> den(10, 99);
    std::vector<int> xs;
    for (int i = 0; i < k; ++i) xs.push_back(i);
    Polynomial base = pow(sum_of_powers(xs, 2, Rational(0), k), d / 2);
    for (int i = 0; i < k; ++i) {
        Rational c(num(rng), den(rng));
        c.canonicalize();
        std::vector<int> e(static_cast<std::size_t>(k), 0);
        e[static_cast<std::size_t>(i)] = d;
        base.addTerm(Monomial(std::move(e)), c);
    }
    return base;
}

} // namespace construct
} // namespace saq
