#include "saq/slp.hpp"

#include "saq/errors.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace saq {

bool AdditiveRepresentation::isDivisionFree() const {
    for (int z : finalVarExponents)
        if (z < 0) return false;
    for (int e : finalStepExponents)
        if (e < 0) return false;
    return true;
}

namespace {

std::string step_field_check(const std::vector<int>& v, std::size_t wanted, const char* field, int stepIndex) {
    if (v.size() != wanted)
        return std::string(field) + " of step " + std::to_string(stepIndex + 1) + " has length " +
               std::to_string(v.size()) + ", expected " + std::to_string(wanted);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] < 0)
            return std::string(field) + " of step " + std::to_string(stepIndex + 1) + " has negative entry at position " +
                   std::to_string(i + 1);
    return {};
}

} // namespace

ValidationReport validate(const AdditiveRepresentation& rep, bool divisionFree) {
    ValidationReport out;
    auto fail = [&](std::string m) {
        out.ok = false;
        out.message = std::move(m);
        return out;
    };
    if (rep.variableCount < 0) return fail("variable count is negative");
    std::size_t k = static_cast<std::size_t>(rep.variableCount);
    for (std::size_t j = 0; j < rep.steps.size(); ++j) {
        const AdditiveStep& s = rep.steps[j];
        for (const auto& [vec, name] : {std::pair{&s.alpha, "alpha"}, std::pair{&s.beta, "beta"}}) {
            std::string m = step_field_check(*vec, k, name, static_cast<int>(j));
            if (!m.empty()) return fail(m);
        }
        for (const auto& [vec, name] : {std::pair{&s.gamma, "gamma"}, std::pair{&s.delta, "delta"}}) {
            std::string m = step_field_check(*vec, j, name, static_cast<int>(j));
            if (!m.empty()) return fail(m);
        }
    }
    if (rep.finalVarExponents.size() != k)
        return fail("final variable exponent vector has length " + std::to_string(rep.finalVarExponents.size()) +
                    ", expected " + std::to_string(k));
    if (rep.finalStepExponents.size() != rep.steps.size())
        return fail("final step exponent vector has length " + std::to_string(rep.finalStepExponents.size()) +
                    ", expected " + std::to_string(rep.steps.size()));
    if (divisionFree) {
        for (std::size_t i = 0; i < rep.finalVarExponents.size(); ++i)
            if (rep.finalVarExponents[i] < 0)
                return fail("final variable exponent zeta_" + std::to_string(i + 1) +
                            " is negative in division-free mode");
        for (std::size_t i = 0; i < rep.finalStepExponents.size(); ++i)
            if (rep.finalStepExponents[i] < 0)
                return fail("final step exponent eta_" + std::to_string(i + 1) +
                            " is negative in division-free mode");
    }
    return out;
}

namespace {

void check_term_cap(const Polynomial& p, std::size_t termLimit) {
    if (p.termCount() > termLimit)
        throw ResourceCapError("expansion exceeded the term limit of " + std::to_string(termLimit));
}

Polynomial capped_mul(const Polynomial& a, const Polynomial& b, std::size_t termLimit) {
    if (a.termCount() * b.termCount() > 4 * termLimit)
        throw ResourceCapError("expansion exceeded the term limit of " + std::to_string(termLimit));
    Polynomial out = a * b;
    check_term_cap(out, termLimit);
    return out;
}

Polynomial capped_pow(const Polynomial& p, int e, std::size_t termLimit) {
    Polynomial out = Polynomial::constant(Rational(1), p.variableCount());
    Polynomial base = p;
    int left = e;
    while (left > 0) {
        if (left & 1) out = capped_mul(out, base, termLimit);
        left >>= 1;
        if (left > 0) base = capped_mul(base, base, termLimit);
    }
    return out;
}

// Expands all step polynomials Q_1..Q_a.
std::vector<Polynomial> expand_steps(const AdditiveRepresentation& rep, std::size_t termLimit) {
    int k = rep.variableCount;
    std::vector<Polynomial> qs;
    qs.reserve(rep.steps.size());
    for (const AdditiveStep& s : rep.steps) {
        Polynomial left = Polynomial::monomial(s.u, Monomial(s.alpha));
        Polynomial right = Polynomial::monomial(s.v, Monomial(s.beta));
        for (std::size_t i = 0; i < s.gamma.size(); ++i)
            if (s.gamma[i] > 0) left = capped_mul(left, capped_pow(qs[i], s.gamma[i], termLimit), termLimit);
        for (std::size_t i = 0; i < s.delta.size(); ++i)
            if (s.delta[i] > 0) right = capped_mul(right, capped_pow(qs[i], s.delta[i], termLimit), termLimit);
        Polynomial q = left + right;
        check_term_cap(q, termLimit);
        if (q.variableCount() != k) throw PreconditionError("step expansion dimension mismatch");
        qs.push_back(std::move(q));
    }
    return qs;
}

Polynomial final_product(const AdditiveRepresentation& rep, const std::vector<Polynomial>& qs,
                         bool positivePart, std::size_t termLimit) {
    // positivePart: coefficient and non-negative exponents;
    // otherwise the product of the negated negative exponents.
    int k = rep.variableCount;
    std::vector<int> varExp(static_cast<std::size_t>(k), 0);
    Polynomial out(k);
    if (positivePart) {
        for (std::size_t i = 0; i < varExp.size(); ++i)
            varExp[i] = std::max(rep.finalVarExponents[i], 0);
        out = Polynomial::monomial(rep.finalCoeff, Monomial(varExp));
    } else {
        for (std::size_t i = 0; i < varExp.size(); ++i)
            varExp[i] = std::max(-rep.finalVarExponents[i], 0);
        out = Polynomial::monomial(Rational(1), Monomial(varExp));
    }
    for (std::size_t i = 0; i < rep.finalStepExponents.size(); ++i) {
        int e = positivePart ? std::max(rep.finalStepExponents[i], 0)
                             : std::max(-rep.finalStepExponents[i], 0);
        if (e > 0) out = capped_mul(out, capped_pow(qs[i], e, termLimit), termLimit);
    }
    return out;
}

} // namespace

Polynomial expand(const AdditiveRepresentation& rep, std::size_t termLimit) {
    ValidationReport report = validate(rep, true);
    if (!report.ok) throw PreconditionError("expand requires a division-free program: " + report.message);
    std::vector<Polynomial> qs = expand_steps(rep, termLimit);
    return final_product(rep, qs, true, termLimit);
}

std::pair<Polynomial, Polynomial> expand_quotient(const AdditiveRepresentation& rep, std::size_t termLimit) {
    ValidationReport report = validate(rep, false);
    if (!report.ok) throw PreconditionError("expand_quotient: " + report.message);
    std::vector<Polynomial> qs = expand_steps(rep, termLimit);
    return {final_product(rep, qs, true, termLimit), final_product(rep, qs, false, termLimit)};
}

namespace {

// Transitive dependency closure of the given final-step support.
std::set<int> step_closure(const AdditiveRepresentation& rep, const std::set<int>& support) {
    std::set<int> closed = support;
    std::vector<int> work(support.begin(), support.end());
    while (!work.empty()) {
        int j = work.back();
        work.pop_back();
        const AdditiveStep& s = rep.steps[static_cast<std::size_t>(j)];
        for (std::size_t i = 0; i < s.gamma.size(); ++i) {
            if ((s.gamma[i] > 0 || s.delta[i] > 0) && closed.insert(static_cast<int>(i)).second)
                work.push_back(static_cast<int>(i));
        }
    }
    return closed;
}

AdditiveRepresentation project_rep(const AdditiveRepresentation& rep, const std::set<int>& keep,
                                   const Rational& coeff, bool positiveSide) {
    AdditiveRepresentation out;
    out.variableCount = rep.variableCount;
    out.finalCoeff = coeff;
    out.finalVarExponents.assign(rep.finalVarExponents.size(), 0);
    for (std::size_t i = 0; i < rep.finalVarExponents.size(); ++i) {
        int z = rep.finalVarExponents[i];
        out.finalVarExponents[i] = positiveSide ? std::max(z, 0) : std::max(-z, 0);
    }
    std::map<int, int> newIndex;
    for (int j : keep) newIndex[j] = static_cast<int>(newIndex.size());
    for (int j : keep) {
        const AdditiveStep& s = rep.steps[static_cast<std::size_t>(j)];
        AdditiveStep t;
        t.u = s.u;
        t.v = s.v;
        t.alpha = s.alpha;
        t.beta = s.beta;
        t.gamma.assign(newIndex.at(j), 0);
        t.delta.assign(newIndex.at(j), 0);
        for (std::size_t i = 0; i < s.gamma.size(); ++i) {
            if (s.gamma[i] == 0 && s.delta[i] == 0) continue;
            auto it = newIndex.find(static_cast<int>(i));
            if (it == newIndex.end() || it->second >= newIndex.at(j))
                throw PreconditionError("internal: dependency outside the kept prefix");
            t.gamma[static_cast<std::size_t>(it->second)] = s.gamma[i];
            t.delta[static_cast<std::size_t>(it->second)] = s.delta[i];
        }
        out.steps.push_back(std::move(t));
    }
    out.finalStepExponents.assign(out.steps.size(), 0);
    for (int j : keep) {
        int e = rep.finalStepExponents[static_cast<std::size_t>(j)];
        int v = positiveSide ? std::max(e, 0) : std::max(-e, 0);
        out.finalStepExponents[static_cast<std::size_t>(newIndex.at(j))] = v;
    }
    return out;
}

} // namespace

std::pair<AdditiveRepresentation, AdditiveRepresentation> split_quotient(const AdditiveRepresentation& rep) {
    ValidationReport report = validate(rep, false);
    if (!report.ok) throw PreconditionError("split_quotient: " + report.message);
    std::set<int> posSupport, negSupport;
    for (std::size_t i = 0; i < rep.finalStepExponents.size(); ++i) {
        if (rep.finalStepExponents[i] > 0) posSupport.insert(static_cast<int>(i));
        if (rep.finalStepExponents[i] < 0) negSupport.insert(static_cast<int>(i));
    }
    std::set<int> posClosure = step_closure(rep, posSupport);
    std::set<int> negClosure = step_closure(rep, negSupport);
    for (int j : posClosure)
        if (negClosure.count(j))
            throw PreconditionError(
                "split_quotient: step " + std::to_string(j + 1) +
                " feeds both the numerator and the denominator; this normal form is not separable");
    AdditiveRepresentation num = project_rep(rep, posClosure, rep.finalCoeff, true);
    AdditiveRepresentation den = project_rep(rep, negClosure, Rational(1), false);
    return {num, den};
}

namespace {

struct AtomProgram {
    Polynomial poly;
    const AdditiveRepresentation* rep;
    int yOffset; // ambient index of this program's first step variable
};

} // namespace

FewnomialSystem fewnomial_reduce(const Formula& formula, const RepMap& reps) {
    int k = formula.ambientDimension();
    std::vector<Atom> atoms;
    formula.collectAtoms(atoms);
    for (const Atom& a : atoms)
        if (a.rel != Rel::Eq && a.rel != Rel::Gt && a.rel != Rel::Lt)
            throw PreconditionError("fewnomial reduction accepts only relations in {=0, >0, <0}");

    std::vector<Polynomial> polys = formula.distinctPolynomials();
    FewnomialSystem system;
    system.baseVariableCount = k;
    int totalSteps = 0;
    for (const Polynomial& p : polys) {
        auto it = reps.find(p);
        if (it == reps.end())
            throw PreconditionError("missing additive representation for atom polynomial " + p.str());
        ValidationReport r = validate(it->second, true);
        if (!r.ok) throw PreconditionError("representation for " + p.str() + " is invalid: " + r.message);
        if (it->second.variableCount != k)
            throw PreconditionError("representation for " + p.str() + " has wrong variable count");
        totalSteps += it->second.length();
    }
    int ambient = k + totalSteps;
    system.ambientVariableCount = ambient;

    // Ambient layout: x1..xk, then the step variables of each distinct
    // atom polynomial in first-occurrence order.
    std::map<Polynomial, AtomProgram> programs;
    int offset = k;
    for (const Polynomial& p : polys) {
        const AdditiveRepresentation& rep = reps.at(p);
        programs.emplace(p, AtomProgram{p, &rep, offset});
        system.atomPrograms.emplace_back(p, rep);
        offset += rep.length();
    }

    auto monomial_exponents = [&](const std::vector<int>& varExps, const std::vector<int>& stepExps,
                                  int yOffset) {
        std::vector<int> e(static_cast<std::size_t>(ambient), 0);
        for (std::size_t i = 0; i < varExps.size(); ++i) e[i] = varExps[i];
        for (std::size_t i = 0; i < stepExps.size(); ++i)
            e[static_cast<std::size_t>(yOffset) + i] = stepExps[i];
        return Monomial(std::move(e));
    };

    for (const Polynomial& p : polys) {
        const AtomProgram& prog = programs.at(p);
        const AdditiveRepresentation& rep = *prog.rep;
        for (int j = 0; j < rep.length(); ++j) {
            const AdditiveStep& s = rep.steps[static_cast<std::size_t>(j)];
            std::vector<int> gammaFull(static_cast<std::size_t>(rep.length()), 0);
            std::vector<int> deltaFull(static_cast<std::size_t>(rep.length()), 0);
            for (std::size_t i = 0; i < s.gamma.size(); ++i) gammaFull[i] = s.gamma[i];
            for (std::size_t i = 0; i < s.delta.size(); ++i) deltaFull[i] = s.delta[i];
            Polynomial tri(ambient);
            tri.addTerm(Monomial::variable(prog.yOffset + j, ambient), Rational(1));
            tri.addTerm(monomial_exponents(s.alpha, gammaFull, prog.yOffset), -s.u);
            tri.addTerm(monomial_exponents(s.beta, deltaFull, prog.yOffset), -s.v);
            system.trinomialEquations.push_back(std::move(tri));
        }
    }

    // Rewrite atoms: P * 0 becomes c * X^zeta * Y^eta * 0.
    struct Rewriter {
        const std::map<Polynomial, AtomProgram>& programs;
        int ambient;
        const std::function<Monomial(const std::vector<int>&, const std::vector<int>&, int)>& mono;

        Formula operator()(const Formula& f) const {
            switch (f.kind()) {
            case Formula::Kind::Leaf: {
                const Atom& a = f.leaf();
                const AtomProgram& prog = programs.at(a.poly);
                Polynomial rewritten = Polynomial::monomial(
                    prog.rep->finalCoeff,
                    mono(prog.rep->finalVarExponents, prog.rep->finalStepExponents, prog.yOffset));
                return Formula::atom(std::move(rewritten), a.rel);
            }
            case Formula::Kind::Not: return Formula::mkNot((*this)(f.children()[0]));
            default: {
                std::vector<Formula> kids;
                for (const auto& c : f.children()) kids.push_back((*this)(c));
                return f.kind() == Formula::Kind::And ? Formula::mkAnd(std::move(kids))
                                                      : Formula::mkOr(std::move(kids));
            }
            }
        }
    };
    std::function<Monomial(const std::vector<int>&, const std::vector<int>&, int)> mono = monomial_exponents;
    Rewriter rewriter{programs, ambient, mono};
    Formula rewrittenAtoms = rewriter(formula);

    std::vector<Formula> conjuncts;
    for (const Polynomial& tri : system.trinomialEquations)
        conjuncts.push_back(Formula::atom(tri, Rel::Eq));
    conjuncts.push_back(rewrittenAtoms);
    system.rewrittenFormula = Formula::mkAnd(std::move(conjuncts));
    return system;
}

std::vector<Rational> lift_point(const std::vector<Rational>& x, const FewnomialSystem& system) {
    if (static_cast<int>(x.size()) != system.baseVariableCount)
        throw PreconditionError("lift point dimension mismatch");
    std::vector<Rational> lifted = x;
    for (const auto& [poly, rep] : system.atomPrograms) {
        std::vector<Rational> qs;
        qs.reserve(rep.steps.size());
        for (const AdditiveStep& s : rep.steps) {
            Rational left = s.u;
            Rational right = s.v;
            for (std::size_t i = 0; i < s.alpha.size(); ++i) {
                if (s.alpha[i] != 0) left *= rat_pow(x[i], s.alpha[i]);
                if (s.beta[i] != 0) right *= rat_pow(x[i], s.beta[i]);
            }
            for (std::size_t i = 0; i < s.gamma.size(); ++i) {
                if (s.gamma[i] != 0) left *= rat_pow(qs[i], s.gamma[i]);
                if (s.delta[i] != 0) right *= rat_pow(qs[i], s.delta[i]);
            }
            qs.push_back(left + right);
        }
        lifted.insert(lifted.end(), qs.begin(), qs.end());
    }
    return lifted;
}

std::vector<Rational> project_point(const std::vector<Rational>& lifted, int k) {
    if (static_cast<int>(lifted.size()) < k)
        throw PreconditionError("projection point dimension smaller than base dimension");
    return std::vector<Rational>(lifted.begin(), lifted.begin() + k);
}

AdditiveFormat additive_format_of(const std::vector<Polynomial>& polys, const RepMap& reps) {
    AdditiveFormat out;
    for (const Polynomial& p : polys) {
        out.k = std::max(out.k, p.variableCount());
        auto it = reps.find(p);
        if (it != reps.end()) {
            ValidationReport r = validate(it->second, true);
            if (!r.ok)
                throw PreconditionError("representation for " + p.str() + " is invalid: " + r.message);
            out.a += it->second.length();
        } else {
            out.a += p.termCount() == 0 ? 0 : static_cast<long long>(p.termCount()) - 1;
        }
    }
    return out;
}

AdditiveFormat additive_format(const Formula& f, const RepMap& reps) {
    AdditiveFormat out = additive_format_of(f.distinctPolynomials(), reps);
    out.k = f.ambientDimension();
    return out;
}

namespace {

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trimmed(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> out;
    std::string t = trimmed(text);
    if (t.empty()) return out;
    for (const std::string& item : split_on(t, ',')) {
        std::string v = trimmed(item);
        if (v.empty()) throw ParseError(std::string("empty entry in ") + what);
        try {
            out.push_back(std::stoi(v));
        } catch (const std::exception&) {
            throw ParseError(std::string("bad integer '") + v + "' in " + what);
        }
    }
    return out;
}

} // namespace

AdditiveRepresentation parse_slp(const std::string& text) {
    AdditiveRepresentation rep;
    bool sawVars = false, sawFinal = false;
    std::istringstream in(text);
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        std::string t = trimmed(line);
        if (t.empty() || t[0] == '#') continue;
        std::istringstream ls(t);
        std::string tag;
        ls >> tag;
        std::string rest;
        std::getline(ls, rest);
        if (tag == "VARS") {
            if (sawVars) throw ParseError("duplicate VARS line");
            try {
                rep.variableCount = std::stoi(trimmed(rest));
            } catch (const std::exception&) {
                throw ParseError("bad VARS line " + std::to_string(lineNo));
            }
            if (rep.variableCount < 0) throw ParseError("negative variable count");
            sawVars = true;
        } else if (tag == "STEP") {
            if (!sawVars) throw ParseError("STEP before VARS");
            if (sawFinal) throw ParseError("STEP after FINAL");
            auto fields = split_on(rest, ';');
            if (fields.size() != 6)
                throw ParseError("STEP line " + std::to_string(lineNo) + " needs 6 ';'-separated fields");
            AdditiveStep s;
            s.u = parse_rational(trimmed(fields[0]));
            s.alpha = parse_int_list(fields[1], "alpha");
            s.gamma = parse_int_list(fields[2], "gamma");
            s.v = parse_rational(trimmed(fields[3]));
            s.beta = parse_int_list(fields[4], "beta");
            s.delta = parse_int_list(fields[5], "delta");
            rep.steps.push_back(std::move(s));
        } else if (tag == "FINAL") {
            if (!sawVars) throw ParseError("FINAL before VARS");
            if (sawFinal) throw ParseError("duplicate FINAL line");
            auto fields = split_on(rest, ';');
            if (fields.size() != 3)
                throw ParseError("FINAL line " + std::to_string(lineNo) + " needs 3 ';'-separated fields");
            rep.finalCoeff = parse_rational(trimmed(fields[0]));
            rep.finalVarExponents = parse_int_list(fields[1], "zeta");
            rep.finalStepExponents = parse_int_list(fields[2], "eta");
            sawFinal = true;
        } else {
            throw ParseError("unknown line tag '" + tag + "' at line " + std::to_string(lineNo));
        }
    }
    if (!sawVars) throw ParseError("missing VARS line");
    if (!sawFinal) throw ParseError("missing FINAL line");
    ValidationReport r = validate(rep, false);
    if (!r.ok) throw ParseError("malformed program: " + r.message);
    return rep;
}

namespace {

std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(v[i]);
    }
    return out;
}

} // namespace

std::string slp_to_string(const AdditiveRepresentation& rep) {
    std::ostringstream os;
    os << "VARS " << rep.variableCount << "\n";
    for (const AdditiveStep& s : rep.steps) {
        os << "STEP " << to_string(s.u) << " ; " << join_ints(s.alpha) << " ; " << join_ints(s.gamma)
           << " ; " << to_string(s.v) << " ; " << join_ints(s.beta) << " ; " << join_ints(s.delta) << "\n";
    }
    os << "FINAL " << to_string(rep.finalCoeff) << " ; " << join_ints(rep.finalVarExponents) << " ; "
       << join_ints(rep.finalStepExponents) << "\n";
    return os.str();
}

} // namespace saq
