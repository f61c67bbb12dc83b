#include "saq/polynomial.hpp"

#include "saq/errors.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace saq {

Monomial::Monomial(std::vector<int> exponents) : exps_(std::move(exponents)) {
    for (int e : exps_)
        if (e < 0) throw PreconditionError("negative exponent in monomial");
}

Monomial Monomial::variable(int index, int variableCount) {
    std::vector<int> e(static_cast<std::size_t>(variableCount), 0);
    e.at(static_cast<std::size_t>(index)) = 1;
    return Monomial(std::move(e));
}

int Monomial::totalDegree() const {
    return std::accumulate(exps_.begin(), exps_.end(), 0);
}

Monomial Monomial::operator*(const Monomial& other) const {
    if (exps_.size() != other.exps_.size())
        throw PreconditionError("monomial variable-count mismatch");
    std::vector<int> e(exps_.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = exps_[i] + other.exps_[i];
    return Monomial(std::move(e));
}

bool Monomial::operator<(const Monomial& other) const {
    int da = totalDegree(), db = other.totalDegree();
    if (da != db) return da < db;
    // Same degree: lexicographic from x1; bigger early exponent is bigger.
    for (std::size_t i = 0; i < exps_.size() && i < other.exps_.size(); ++i) {
        if (exps_[i] != other.exps_[i]) return exps_[i] < other.exps_[i];
    }
    return exps_.size() < other.exps_.size();
}

Polynomial Polynomial::constant(const Rational& c, int variableCount) {
    Polynomial p(variableCount);
    p.addTerm(Monomial::one(variableCount), c);
    return p;
}

Polynomial Polynomial::variable(int index, int variableCount) {
    Polynomial p(variableCount);
    p.addTerm(Monomial::variable(index, variableCount), Rational(1));
    return p;
}

Polynomial Polynomial::monomial(const Rational& c, const Monomial& m) {
    Polynomial p(m.variableCount());
    p.addTerm(m, c);
    return p;
}

bool Polynomial::isConstant() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && terms_.begin()->first.totalDegree() == 0;
}

Rational Polynomial::constantValue() const {
    if (terms_.empty()) return Rational(0);
    auto it = terms_.find(Monomial::one(vars_));
    return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::addTerm(const Monomial& m, const Rational& c) {
    if (m.variableCount() != vars_)
        throw PreconditionError("term variable-count mismatch");
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial Polynomial::operator+(const Polynomial& q) const {
    if (vars_ != q.vars_) throw PreconditionError("polynomial variable-count mismatch in add");
    Polynomial out = *this;
    for (const auto& [m, c] : q.terms_) out.addTerm(m, c);
    return out;
}

Polynomial Polynomial::operator-(const Polynomial& q) const {
    if (vars_ != q.vars_) throw PreconditionError("polynomial variable-count mismatch in sub");
    Polynomial out = *this;
    for (const auto& [m, c] : q.terms_) out.addTerm(m, -c);
    return out;
}

Polynomial Polynomial::operator-() const {
    Polynomial out(vars_);
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
}

Polynomial Polynomial::operator*(const Polynomial& q) const {
    if (vars_ != q.vars_) throw PreconditionError("polynomial variable-count mismatch in mul");
    Polynomial out(vars_);
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : q.terms_) out.addTerm(ma * mb, ca * cb);
    return out;
}

Polynomial Polynomial::operator*(const Rational& c) const {
    Polynomial out(vars_);
    if (c == 0) return out;
    for (const auto& [m, k] : terms_) out.terms_.emplace(m, k * c);
    return out;
}

bool Polynomial::operator<(const Polynomial& q) const {
    if (vars_ != q.vars_) return vars_ < q.vars_;
    auto a = terms_.begin(), b = q.terms_.begin();
    for (; a != terms_.end() && b != q.terms_.end(); ++a, ++b) {
        if (a->first < b->first) return true;
        if (b->first < a->first) return false;
        if (a->second != b->second) return a->second < b->second;
    }
    return a == terms_.end() && b != q.terms_.end();
}

Rational Polynomial::eval(const std::vector<Rational>& point) const {
    if (static_cast<int>(point.size()) != vars_)
        throw PreconditionError("evaluation point dimension mismatch");
    Rational total(0);
    for (const auto& [m, c] : terms_) {
        Rational term = c;
        for (int i = 0; i < vars_; ++i) {
            int e = m.exponent(i);
            if (e != 0) term *= rat_pow(point[static_cast<std::size_t>(i)], e);
        }
        total += term;
    }
    return total;
}

int Polynomial::totalDegree() const {
    if (terms_.empty()) return 0;
    return terms_.rbegin()->first.totalDegree();
}

int Polynomial::degreeIn(int var) const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.exponent(var));
    return d;
}

Polynomial Polynomial::remapVariables(int newVariableCount, const std::vector<int>& mapping) const {
    if (static_cast<int>(mapping.size()) != vars_)
        throw PreconditionError("variable mapping length mismatch");
    Polynomial out(newVariableCount);
    for (const auto& [m, c] : terms_) {
        std::vector<int> e(static_cast<std::size_t>(newVariableCount), 0);
        for (int i = 0; i < vars_; ++i) {
            int target = mapping[static_cast<std::size_t>(i)];
            if (target < 0 || target >= newVariableCount)
                throw PreconditionError("variable mapping target out of range");
            e[static_cast<std::size_t>(target)] += m.exponent(i);
        }
        out.addTerm(Monomial(std::move(e)), c);
    }
    return out;
}

namespace {

std::string term_string(const Monomial& m, const Rational& c, int nameOffset) {
    std::ostringstream os;
    Rational abs = c < 0 ? Rational(-c) : c;
    bool wroteCoeff = false;
    if (m.totalDegree() == 0 || abs != 1) {
        os << to_string(abs);
        wroteCoeff = true;
    }
    for (int i = 0; i < m.variableCount(); ++i) {
        int e = m.exponent(i);
        if (e == 0) continue;
        if (wroteCoeff || os.tellp() > 0) os << "*";
        os << "x" << (i + nameOffset);
        if (e > 1) os << "^" << e;
    }
    return os.str();
}

std::string poly_string(const Polynomial& p, int nameOffset) {
    if (p.isZero()) return "0";
    std::ostringstream os;
    bool first = true;
    // Leading (largest) term first.
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const Rational& c = it->second;
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        os << term_string(it->first, c, nameOffset);
    }
    return os.str();
}

} // namespace

std::string Polynomial::str() const { return poly_string(*this, 1); }
std::string Polynomial::strHomogeneous() const { return poly_string(*this, 0); }

Polynomial add(const Polynomial& p, const Polynomial& q) { return p + q; }
Polynomial mul(const Polynomial& p, const Polynomial& q) { return p * q; }

Polynomial pow(const Polynomial& p, int e) {
    if (e < 0) throw PreconditionError("negative polynomial power");
    Polynomial out = Polynomial::constant(Rational(1), p.variableCount());
    Polynomial base = p;
    while (e > 0) {
        if (e & 1) out = out * base;
        e >>= 1;
        if (e > 0) base = base * base;
    }
    return out;
}

Rational eval(const Polynomial& p, const std::vector<Rational>& point) { return p.eval(point); }

Polynomial partial_derivative(const Polynomial& p, int i) {
    if (i < 1 || i > p.variableCount())
        throw PreconditionError("derivative variable index out of range");
    int v = i - 1;
    Polynomial out(p.variableCount());
    for (const auto& [m, c] : p.terms()) {
        int e = m.exponent(v);
        if (e == 0) continue;
        std::vector<int> exps = m.exponents();
        exps[static_cast<std::size_t>(v)] = e - 1;
        out.addTerm(Monomial(std::move(exps)), c * Rational(e));
    }
    return out;
}

int total_degree(const Polynomial& p) { return p.totalDegree(); }

Polynomial homogenize(const Polynomial& p) {
    if (p.isZero()) throw PreconditionError("homogenize(0): degree undefined");
    int d = p.totalDegree();
    Polynomial out(p.variableCount() + 1);
    for (const auto& [m, c] : p.terms()) {
        std::vector<int> e;
        e.reserve(static_cast<std::size_t>(p.variableCount()) + 1);
        e.push_back(d - m.totalDegree());
        for (int i = 0; i < p.variableCount(); ++i) e.push_back(m.exponent(i));
        out.addTerm(Monomial(std::move(e)), c);
    }
    return out;
}

Polynomial dehomogenize(const Polynomial& p) {
    if (p.variableCount() < 1) throw PreconditionError("dehomogenize needs at least one variable");
    Polynomial out(p.variableCount() - 1);
    for (const auto& [m, c] : p.terms()) {
        std::vector<int> e(m.exponents().begin() + 1, m.exponents().end());
        out.addTerm(Monomial(std::move(e)), c);
    }
    return out;
}

Polynomial substitute_last(const Polynomial& p, const Rational& value) {
    if (p.variableCount() < 1) throw PreconditionError("substitute_last needs at least one variable");
    int last = p.variableCount() - 1;
    Polynomial out(last);
    for (const auto& [m, c] : p.terms()) {
        std::vector<int> e(m.exponents().begin(), m.exponents().end() - 1);
        int pw = m.exponent(last);
        out.addTerm(Monomial(std::move(e)), pw == 0 ? c : Rational(c * rat_pow(value, pw)));
    }
    return out;
}

namespace {

class PolyLexer {
public:
    explicit PolyLexer(const std::string& s) : s_(s) {}

    void skipWs() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool atEnd() {
        skipWs();
        return i_ >= s_.size();
    }
    char peek() {
        skipWs();
        return i_ < s_.size() ? s_[i_] : '\0';
    }
    char next() {
        skipWs();
        if (i_ >= s_.size()) throw ParseError("unexpected end of polynomial");
        return s_[i_++];
    }
    std::string integer() {
        skipWs();
        std::size_t start = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (i_ == start) throw ParseError("expected an integer in polynomial at position " + std::to_string(i_));
        return s_.substr(start, i_ - start);
    }
    std::size_t pos() const { return i_; }

private:
    const std::string& s_;
    std::size_t i_ = 0;
};

struct RawTerm {
    Rational coeff{1};
    std::map<int, int> exps; // variable index (0-based) -> exponent
};

// factor := 'x'INT('^'INT)?
void parse_factor(PolyLexer& lx, RawTerm& term, int& maxIndex) {
    char c = lx.next();
    if (c != 'x' && c != 'X') throw ParseError("expected variable factor");
    std::string idx = lx.integer();
    int var = std::stoi(idx);
    if (var < 1) throw ParseError("variable index must be >= 1 (x0 is reserved for homogenization output)");
    int e = 1;
    if (lx.peek() == '^') {
        lx.next();
        e = std::stoi(lx.integer());
        if (e < 0) throw ParseError("negative exponent");
    }
    term.exps[var - 1] += e;
    maxIndex = std::max(maxIndex, var);
}

RawTerm parse_term(PolyLexer& lx, int& maxIndex) {
    RawTerm term;
    bool sawAnything = false;
    if (std::isdigit(static_cast<unsigned char>(lx.peek()))) {
        std::string num = lx.integer();
        std::string lit = num;
        if (lx.peek() == '/') {
            lx.next();
            lit += "/" + lx.integer();
        }
        term.coeff = parse_rational(lit);
        sawAnything = true;
        if (lx.peek() == '*') {
            lx.next();
        } else {
            return term; // bare constant
        }
    }
    parse_factor(lx, term, maxIndex);
    sawAnything = true;
    while (lx.peek() == '*') {
        lx.next();
        parse_factor(lx, term, maxIndex);
    }
    if (!sawAnything) throw ParseError("empty term");
    return term;
}

} // namespace

Polynomial parse_polynomial(const std::string& text, int variableCount) {
    PolyLexer lx(text);
    std::vector<std::pair<RawTerm, int>> signedTerms; // term, sign
    int maxIndex = 0;
    int sign = 1;
    if (lx.peek() == '-') {
        lx.next();
        sign = -1;
    } else if (lx.peek() == '+') {
        lx.next();
    }
    while (true) {
        signedTerms.emplace_back(parse_term(lx, maxIndex), sign);
        if (lx.atEnd()) break;
        char op = lx.next();
        if (op == '+') sign = 1;
        else if (op == '-') sign = -1;
        else throw ParseError(std::string("unexpected character '") + op + "' in polynomial");
    }
    int k = variableCount >= 0 ? variableCount : maxIndex;
    if (maxIndex > k)
        throw ParseError("polynomial uses x" + std::to_string(maxIndex) + " but ambient dimension is " +
                         std::to_string(k));
    Polynomial out(k);
    for (const auto& [term, s] : signedTerms) {
        std::vector<int> e(static_cast<std::size_t>(k), 0);
        for (const auto& [var, exp] : term.exps) e[static_cast<std::size_t>(var)] = exp;
        out.addTerm(Monomial(std::move(e)), s > 0 ? term.coeff : Rational(-term.coeff));
    }
    return out;
}

std::vector<Rational> parse_point(const std::string& text) {
    std::vector<Rational> out;
    std::string cur;
    auto flush = [&]() {
        std::string t;
        for (char c : cur)
            if (!std::isspace(static_cast<unsigned char>(c))) t += c;
        if (t.empty()) throw ParseError("empty coordinate in point");
        out.push_back(parse_rational(t));
        cur.clear();
    };
    for (char c : text) {
        if (c == ',' || c == ';') flush();
        else cur += c;
    }
    if (!cur.empty()) flush();
    if (out.empty()) throw ParseError("empty point");
    return out;
}

} // namespace saq
