#include "saq/formula.hpp"

#include "saq/errors.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace saq {

std::string rel_string(Rel r) {
    switch (r) {
    case Rel::Eq: return "= 0";
    case Rel::Gt: return "> 0";
    case Rel::Lt: return "< 0";
    case Rel::Ge: return ">= 0";
    case Rel::Le: return "<= 0";
    }
    return "?";
}

Rel flip_rel(Rel r) {
    switch (r) {
    case Rel::Gt: return Rel::Le;
    case Rel::Lt: return Rel::Ge;
    case Rel::Ge: return Rel::Lt;
    case Rel::Le: return Rel::Gt;
    case Rel::Eq: throw PreconditionError("equality has no single flipped relation");
    }
    throw PreconditionError("bad relation");
}

bool Atom::holdsForSign(int s) const {
    switch (rel) {
    case Rel::Eq: return s == 0;
    case Rel::Gt: return s > 0;
    case Rel::Lt: return s < 0;
    case Rel::Ge: return s >= 0;
    case Rel::Le: return s <= 0;
    }
    return false;
}

bool Atom::holds(const std::vector<Rational>& point) const {
    return holdsForSign(sign(poly.eval(point)));
}

struct Formula::Node {
    Kind kind;
    Atom atom;                      // Leaf only
    std::vector<Formula> children;  // And/Or: >= 2, Not: 1
    int ambient = 0;
};

Formula Formula::atom(Polynomial p, Rel r) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Leaf;
    n->ambient = p.variableCount();
    n->atom = Atom{std::move(p), r};
    return Formula(std::move(n));
}

static void check_same_ambient(const std::vector<Formula>& children) {
    for (std::size_t i = 1; i < children.size(); ++i)
        if (children[i].ambientDimension() != children[0].ambientDimension())
            throw PreconditionError("formula children have mismatched ambient dimensions");
}

Formula Formula::mkAnd(std::vector<Formula> children) {
    if (children.empty()) throw PreconditionError("empty conjunction");
    if (children.size() == 1) return children[0];
    check_same_ambient(children);
    auto n = std::make_shared<Node>();
    n->kind = Kind::And;
    n->ambient = children[0].ambientDimension();
    n->children = std::move(children);
    return Formula(std::move(n));
}

Formula Formula::mkOr(std::vector<Formula> children) {
    if (children.empty()) throw PreconditionError("empty disjunction");
    if (children.size() == 1) return children[0];
    check_same_ambient(children);
    auto n = std::make_shared<Node>();
    n->kind = Kind::Or;
    n->ambient = children[0].ambientDimension();
    n->children = std::move(children);
    return Formula(std::move(n));
}

Formula Formula::mkNot(Formula f) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Not;
    n->ambient = f.ambientDimension();
    n->children.push_back(std::move(f));
    return Formula(std::move(n));
}

Formula::Kind Formula::kind() const {
    if (!node_) throw PreconditionError("empty formula");
    return node_->kind;
}

const Atom& Formula::leaf() const {
    if (kind() != Kind::Leaf) throw PreconditionError("formula node is not an atom");
    return node_->atom;
}

const std::vector<Formula>& Formula::children() const {
    if (!node_) throw PreconditionError("empty formula");
    return node_->children;
}

int Formula::ambientDimension() const {
    if (!node_) throw PreconditionError("empty formula");
    return node_->ambient;
}

Formula Formula::remapVariables(int newVariableCount, const std::vector<int>& mapping) const {
    std::vector<int> map = mapping;
    if (map.empty()) {
        map.resize(static_cast<std::size_t>(ambientDimension()));
        for (std::size_t i = 0; i < map.size(); ++i) map[i] = static_cast<int>(i);
    }
    switch (kind()) {
    case Kind::Leaf:
        return atom(node_->atom.poly.remapVariables(newVariableCount, map), node_->atom.rel);
    case Kind::Not:
        return mkNot(node_->children[0].remapVariables(newVariableCount, map));
    case Kind::And:
    case Kind::Or: {
        std::vector<Formula> kids;
        kids.reserve(node_->children.size());
        for (const auto& c : node_->children) kids.push_back(c.remapVariables(newVariableCount, map));
        return kind() == Kind::And ? mkAnd(std::move(kids)) : mkOr(std::move(kids));
    }
    }
    throw PreconditionError("bad formula node");
}

void Formula::collectAtoms(std::vector<Atom>& out) const {
    switch (kind()) {
    case Kind::Leaf: out.push_back(node_->atom); return;
    default:
        for (const auto& c : node_->children) c.collectAtoms(out);
    }
}

std::vector<Polynomial> Formula::distinctPolynomials() const {
    std::vector<Atom> atoms;
    collectAtoms(atoms);
    std::vector<Polynomial> out;
    std::set<Polynomial> seen;
    for (const auto& a : atoms)
        if (seen.insert(a.poly).second) out.push_back(a.poly);
    return out;
}

bool Formula::operator==(const Formula& o) const {
    if (node_ == o.node_) return true;
    if (!node_ || !o.node_) return false;
    if (kind() != o.kind() || ambientDimension() != o.ambientDimension()) return false;
    if (kind() == Kind::Leaf) return node_->atom == o.node_->atom;
    if (node_->children.size() != o.node_->children.size()) return false;
    for (std::size_t i = 0; i < node_->children.size(); ++i)
        if (!(node_->children[i] == o.node_->children[i])) return false;
    return true;
}

namespace {

int precedence(Formula::Kind k) {
    switch (k) {
    case Formula::Kind::Or: return 0;
    case Formula::Kind::And: return 1;
    case Formula::Kind::Not: return 2;
    case Formula::Kind::Leaf: return 3;
    }
    return 3;
}

void print_formula(const Formula& f, std::ostringstream& os, int parentPrec) {
    int prec = precedence(f.kind());
    bool parens = prec < parentPrec;
    if (parens) os << "(";
    switch (f.kind()) {
    case Formula::Kind::Leaf:
        os << "[" << f.leaf().poly.str() << " " << rel_string(f.leaf().rel) << "]";
        break;
    case Formula::Kind::Not:
        os << "!";
        print_formula(f.children()[0], os, precedence(Formula::Kind::Not) + 1);
        break;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
        const char* sep = f.kind() == Formula::Kind::And ? " & " : " | ";
        bool first = true;
        for (const auto& c : f.children()) {
            if (!first) os << sep;
            first = false;
            print_formula(c, os, prec);
        }
        break;
    }
    }
    if (parens) os << ")";
}

} // namespace

std::string Formula::str() const {
    std::ostringstream os;
    print_formula(*this, os, 0);
    return os.str();
}

DenseFormat dense_format(const Formula& f) {
    DenseFormat out;
    out.k = f.ambientDimension();
    std::vector<Atom> atoms;
    f.collectAtoms(atoms);
    std::set<Polynomial> distinct;
    for (const auto& a : atoms) {
        distinct.insert(a.poly);
        out.d = std::max(out.d, a.poly.totalDegree());
    }
    out.s = static_cast<int>(distinct.size());
    return out;
}

bool eval_formula(const Formula& f, const std::vector<Rational>& point) {
    if (static_cast<int>(point.size()) != f.ambientDimension())
        throw PreconditionError("evaluation point dimension mismatch");
    switch (f.kind()) {
    case Formula::Kind::Leaf: return f.leaf().holds(point);
    case Formula::Kind::Not: return !eval_formula(f.children()[0], point);
    case Formula::Kind::And:
        for (const auto& c : f.children())
            if (!eval_formula(c, point)) return false;
        return true;
    case Formula::Kind::Or:
        for (const auto& c : f.children())
            if (eval_formula(c, point)) return true;
        return false;
    }
    throw PreconditionError("bad formula node");
}

namespace {

using Clause = std::vector<Atom>;

// DNF as a clause list; `negated` pushes the pending negation down.
std::vector<Clause> dnf_clauses(const Formula& f, bool negated, std::size_t clauseLimit) {
    switch (f.kind()) {
    case Formula::Kind::Leaf: {
        const Atom& a = f.leaf();
        if (!negated) return {{a}};
        if (a.rel == Rel::Eq)
            return {{Atom{a.poly, Rel::Gt}}, {Atom{a.poly, Rel::Lt}}};
        return {{Atom{a.poly, flip_rel(a.rel)}}};
    }
    case Formula::Kind::Not:
        return dnf_clauses(f.children()[0], !negated, clauseLimit);
    case Formula::Kind::And:
    case Formula::Kind::Or: {
        bool isAnd = (f.kind() == Formula::Kind::And) != negated; // De Morgan
        std::vector<std::vector<Clause>> parts;
        parts.reserve(f.children().size());
        for (const auto& c : f.children()) parts.push_back(dnf_clauses(c, negated, clauseLimit));
        if (!isAnd) {
            std::vector<Clause> out;
            for (auto& p : parts)
                for (auto& cl : p) out.push_back(std::move(cl));
            if (out.size() > clauseLimit) throw ResourceCapError("DNF clause limit exceeded");
            return out;
        }
        std::vector<Clause> acc{{}};
        for (const auto& p : parts) {
            std::vector<Clause> next;
            if (acc.size() * p.size() > clauseLimit)
                throw ResourceCapError("DNF clause limit exceeded");
            next.reserve(acc.size() * p.size());
            for (const auto& left : acc)
                for (const auto& right : p) {
                    Clause merged = left;
                    merged.insert(merged.end(), right.begin(), right.end());
                    next.push_back(std::move(merged));
                }
            acc = std::move(next);
        }
        return acc;
    }
    }
    throw PreconditionError("bad formula node");
}

} // namespace

Formula to_dnf(const Formula& f, std::size_t clauseLimit) {
    auto clauses = dnf_clauses(f, false, clauseLimit);
    std::vector<Formula> disjuncts;
    disjuncts.reserve(clauses.size());
    for (auto& cl : clauses) {
        std::vector<Formula> atoms;
        atoms.reserve(cl.size());
        for (auto& a : cl) atoms.push_back(Formula::atom(a.poly, a.rel));
        disjuncts.push_back(Formula::mkAnd(std::move(atoms)));
    }
    return Formula::mkOr(std::move(disjuncts));
}

bool is_p_closed(const Formula& f) {
    switch (f.kind()) {
    case Formula::Kind::Leaf: {
        Rel r = f.leaf().rel;
        return r == Rel::Eq || r == Rel::Ge || r == Rel::Le;
    }
    case Formula::Kind::Not: return false;
    default:
        for (const auto& c : f.children())
            if (!is_p_closed(c)) return false;
        return true;
    }
}

namespace {

int sign_condition_ambient(const SignCondition& sigma) {
    if (sigma.empty()) throw PreconditionError("empty sign condition");
    int k = sigma.begin()->first.variableCount();
    for (const auto& [p, s] : sigma) {
        if (p.variableCount() != k)
            throw PreconditionError("sign condition polynomials have mismatched ambient dimensions");
        if (s < -1 || s > 1) throw PreconditionError("sign condition value outside {-1,0,1}");
    }
    return k;
}

Polynomial ball_poly(int k, const Rational& radiusSquared) {
    Polynomial b(k);
    for (int i = 0; i < k; ++i) {
        std::vector<int> e(static_cast<std::size_t>(k), 0);
        e[static_cast<std::size_t>(i)] = 2;
        b.addTerm(Monomial(std::move(e)), Rational(1));
    }
    b.addTerm(Monomial::one(k), -radiusSquared);
    return b;
}

} // namespace

Formula sign_condition_formula(const SignCondition& sigma) {
    sign_condition_ambient(sigma);
    std::vector<Formula> atoms;
    for (const auto& [p, s] : sigma) {
        Rel r = s == 0 ? Rel::Eq : (s > 0 ? Rel::Gt : Rel::Lt);
        atoms.push_back(Formula::atom(p, r));
    }
    return Formula::mkAnd(std::move(atoms));
}

Formula relaxed_sign_condition(const SignCondition& sigma, const Rational& delta) {
    if (delta <= 0) throw PreconditionError("relaxation parameter delta must be positive");
    int k = sign_condition_ambient(sigma);
    Rational invDelta(delta.get_den(), delta.get_num());
    invDelta.canonicalize();
    std::vector<Formula> atoms;
    atoms.push_back(Formula::atom(ball_poly(k, invDelta), Rel::Le));
    for (const auto& [p, s] : sigma) {
        if (s == 0) {
            atoms.push_back(Formula::atom(p, Rel::Eq));
        } else if (s < 0) {
            atoms.push_back(Formula::atom(p + Polynomial::constant(delta, k), Rel::Le));
        } else {
            atoms.push_back(Formula::atom(p - Polynomial::constant(delta, k), Rel::Ge));
        }
    }
    return Formula::mkAnd(std::move(atoms));
}

Formula nonstrict_to_strict(const SignCondition& sigma, const Rational& eps, const Rational& delta,
                            const Rational& omega) {
    if (eps <= 0 || delta <= 0 || omega <= 0)
        throw PreconditionError("nonstrict-to-strict parameters must be positive");
    int k = sign_condition_ambient(sigma);
    std::vector<Formula> atoms;
    for (const auto& [p, s] : sigma) {
        if (s == 0) {
            atoms.push_back(Formula::atom(p + Polynomial::constant(delta, k), Rel::Gt));
            atoms.push_back(Formula::atom(p - Polynomial::constant(delta, k), Rel::Lt));
        } else if (s > 0) {
            atoms.push_back(Formula::atom(p - Polynomial::constant(eps, k), Rel::Gt));
        } else {
            atoms.push_back(Formula::atom(p + Polynomial::constant(eps, k), Rel::Lt));
        }
    }
    atoms.push_back(Formula::atom(ball_poly(k, omega * omega), Rel::Lt));
    return Formula::mkAnd(std::move(atoms));
}

Formula substitute_last(const Formula& f, const Rational& value) {
    switch (f.kind()) {
    case Formula::Kind::Leaf:
        return Formula::atom(substitute_last(f.leaf().poly, value), f.leaf().rel);
    case Formula::Kind::Not:
        return Formula::mkNot(substitute_last(f.children()[0], value));
    default: {
        std::vector<Formula> kids;
        for (const auto& c : f.children()) kids.push_back(substitute_last(c, value));
        return f.kind() == Formula::Kind::And ? Formula::mkAnd(std::move(kids))
                                              : Formula::mkOr(std::move(kids));
    }
    }
}

namespace {

class FormulaParser {
public:
    FormulaParser(const std::string& s, int ambient) : s_(s), k_(ambient) {}

    Formula parse() {
        Formula f = parseOr();
        skipWs();
        if (i_ < s_.size()) throw ParseError("trailing characters in formula at position " + std::to_string(i_));
        return f;
    }

private:
    void skipWs() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    char peek() {
        skipWs();
        return i_ < s_.size() ? s_[i_] : '\0';
    }
    void expect(char c) {
        skipWs();
        if (i_ >= s_.size() || s_[i_] != c)
            throw ParseError(std::string("expected '") + c + "' in formula at position " + std::to_string(i_));
        ++i_;
    }

    Formula parseOr() {
        std::vector<Formula> kids{parseAnd()};
        while (peek() == '|') {
            ++i_;
            kids.push_back(parseAnd());
        }
        return Formula::mkOr(std::move(kids));
    }

    Formula parseAnd() {
        std::vector<Formula> kids{parseUnary()};
        while (peek() == '&') {
            ++i_;
            kids.push_back(parseUnary());
        }
        return Formula::mkAnd(std::move(kids));
    }

    Formula parseUnary() {
        char c = peek();
        if (c == '!') {
            ++i_;
            return Formula::mkNot(parseUnary());
        }
        if (c == '(') {
            ++i_;
            Formula f = parseOr();
            expect(')');
            return f;
        }
        if (c == '[') return parseAtom();
        throw ParseError("expected atom, '!' or '(' in formula at position " + std::to_string(i_));
    }

    Formula parseAtom() {
        expect('[');
        std::size_t start = i_;
        // Polynomial runs until the relation operator.
        std::size_t relPos = std::string::npos;
        for (std::size_t j = i_; j < s_.size(); ++j) {
            char c = s_[j];
            if (c == '=' || c == '<' || c == '>') {
                relPos = j;
                break;
            }
            if (c == ']') break;
        }
        if (relPos == std::string::npos) throw ParseError("atom missing relation");
        std::string polyText = s_.substr(start, relPos - start);
        i_ = relPos;
        Rel rel;
        char c = s_[i_++];
        if (c == '=') rel = Rel::Eq;
        else if (c == '>') {
            rel = Rel::Gt;
            if (i_ < s_.size() && s_[i_] == '=') { rel = Rel::Ge; ++i_; }
        } else {
            rel = Rel::Lt;
            if (i_ < s_.size() && s_[i_] == '=') { rel = Rel::Le; ++i_; }
        }
        skipWs();
        if (i_ >= s_.size() || s_[i_] != '0') throw ParseError("atom relation must compare against 0");
        ++i_;
        expect(']');
        return Formula::atom(parse_polynomial(polyText, k_), rel);
    }

    const std::string& s_;
    int k_;
    std::size_t i_ = 0;
};

} // namespace

Formula parse_formula(const std::string& text, int variableCount) {
    // The ambient dimension must be known before atoms are built, so
    // scan for the largest variable index first.
    int maxIdx = 0;
    for (std::size_t i = 0; i + 1 < text.size(); ++i) {
        if ((text[i] == 'x' || text[i] == 'X') && std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
            std::size_t j = i + 1;
            int v = 0;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
                v = v * 10 + (text[j] - '0');
                ++j;
            }
            maxIdx = std::max(maxIdx, v);
        }
    }
    int k = variableCount >= 0 ? std::max(variableCount, 0) : maxIdx;
    if (maxIdx > k)
        throw ParseError("formula uses x" + std::to_string(maxIdx) + " but ambient dimension is " +
                         std::to_string(k));
    FormulaParser parser(text, k);
    return parser.parse();
}

} // namespace saq
