#include "saq/line.hpp"

#include "saq/errors.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace saq {
namespace line {

int compare(const ExtendedRational& a, const ExtendedRational& b) {
    if (a.inf != b.inf) return a.inf < b.inf ? -1 : 1;
    if (a.inf != 0) return 0;
    return cmp(a.value, b.value) < 0 ? -1 : (a.value == b.value ? 0 : 1);
}

// ---------------------------------------------------------------------------
// Dense univariate machinery (coefficient i belongs to x^i).

namespace {

using UniPoly = std::vector<Rational>;

void normalize(UniPoly& u) {
    while (!u.empty() && u.back() == 0) u.pop_back();
}

int degree(const UniPoly& u) { return static_cast<int>(u.size()) - 1; }

bool is_zero(const UniPoly& u) { return u.empty(); }

UniPoly from_polynomial(const Polynomial& p) {
    if (p.variableCount() > 1) throw PreconditionError("univariate operation on a multivariate polynomial");
    UniPoly u;
    for (const auto& [m, c] : p.terms()) {
        int e = p.variableCount() == 1 ? m.exponent(0) : 0;
        if (static_cast<int>(u.size()) <= e) u.resize(static_cast<std::size_t>(e) + 1, Rational(0));
        u[static_cast<std::size_t>(e)] = c;
    }
    normalize(u);
    return u;
}

Polynomial to_polynomial(const UniPoly& u) {
    Polynomial p(1);
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] != 0) p.addTerm(Monomial(std::vector<int>{static_cast<int>(i)}), u[i]);
    return p;
}

Rational eval_up(const UniPoly& u, const Rational& x) {
    Rational acc(0);
    for (auto it = u.rbegin(); it != u.rend(); ++it) acc = acc * x + *it;
    return acc;
}

UniPoly derivative_up(const UniPoly& u) {
    UniPoly d;
    for (std::size_t i = 1; i < u.size(); ++i) d.push_back(u[i] * Rational(static_cast<long>(i)));
    normalize(d);
    return d;
}

// Scales to integer primitive coefficients, preserving sign.
void make_primitive(UniPoly& u) {
    if (u.empty()) return;
    Integer lcmDen(1);
    for (const auto& c : u) {
        Integer den = c.get_den();
        Integer g;
        mpz_gcd(g.get_mpz_t(), lcmDen.get_mpz_t(), den.get_mpz_t());
        lcmDen = lcmDen / g * den;
    }
    Integer gcdNum(0);
    for (auto& c : u) {
        c *= lcmDen;
        c.canonicalize();
        Integer num = c.get_num();
        mpz_gcd(gcdNum.get_mpz_t(), gcdNum.get_mpz_t(), num.get_mpz_t());
    }
    if (gcdNum > 1) {
        for (auto& c : u) {
            c /= gcdNum;
            c.canonicalize();
        }
    }
}

// Division with remainder: a = q*b + r, deg r < deg b.
std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b) {
    if (is_zero(b)) throw PreconditionError("univariate division by zero");
    UniPoly r = a, q(a.size(), Rational(0));
    int db = degree(b);
    const Rational& lead = b.back();
    while (!is_zero(r) && degree(r) >= db) {
        int shift = degree(r) - db;
        Rational f = r.back() / lead;
        q[static_cast<std::size_t>(shift)] = f;
        for (int i = 0; i <= db; ++i) {
            r[static_cast<std::size_t>(i + shift)] -= f * b[static_cast<std::size_t>(i)];
        }
        normalize(r);
    }
    normalize(q);
    return {q, r};
}

UniPoly gcd_up(UniPoly a, UniPoly b) {
    normalize(a);
    normalize(b);
    while (!is_zero(b)) {
        UniPoly r = divmod(a, b).second;
        make_primitive(r);
        a = std::move(b);
        b = std::move(r);
    }
    if (!is_zero(a)) {
        // Monic for determinism.
        Rational lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

UniPoly squarefree_part(const UniPoly& u) {
    if (degree(u) <= 1) {
        UniPoly out = u;
        make_primitive(out);
        return out;
    }
    UniPoly g = gcd_up(u, derivative_up(u));
    if (degree(g) == 0) {
        UniPoly out = u;
        make_primitive(out);
        return out;
    }
    UniPoly out = divmod(u, g).first;
    make_primitive(out);
    return out;
}

using SturmSeq = std::vector<UniPoly>;

SturmSeq build_sturm(const UniPoly& squarefree) {
    SturmSeq seq;
    seq.push_back(squarefree);
    UniPoly d = derivative_up(squarefree);
    if (is_zero(d)) return seq;
    seq.push_back(d);
    while (true) {
        UniPoly r = divmod(seq[seq.size() - 2], seq.back()).second;
        if (is_zero(r)) break;
        for (auto& c : r) c = -c;
        make_primitive(r);
        seq.push_back(std::move(r));
    }
    return seq;
}

int sign_at_extended(const UniPoly& u, const ExtendedRational& x) {
    if (is_zero(u)) return 0;
    if (x.inf == 0) return sgn(eval_up(u, x.value));
    int lead = sgn(u.back());
    if (x.inf > 0) return lead;
    return degree(u) % 2 == 0 ? lead : -lead;
}

int variations(const SturmSeq& seq, const ExtendedRational& x) {
    int count = 0, prev = 0;
    for (const UniPoly& u : seq) {
        int s = sign_at_extended(u, x);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++count;
        prev = s;
    }
    return count;
}

// Distinct roots in (lo, hi].
int count_roots(const SturmSeq& seq, const ExtendedRational& lo, const ExtendedRational& hi) {
    if (compare(lo, hi) >= 0) return 0;
    return variations(seq, lo) - variations(seq, hi);
}

int count_roots(const SturmSeq& seq, const Rational& lo, const Rational& hi) {
    return count_roots(seq, ExtendedRational::finite(lo), ExtendedRational::finite(hi));
}

Rational cauchy_bound(const UniPoly& u) {
    if (is_zero(u)) throw PreconditionError("root bound of the zero polynomial");
    Rational maxRatio(0);
    const Rational& lead = u.back();
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        Rational ratio = abs(u[i] / lead);
        if (ratio > maxRatio) maxRatio = ratio;
    }
    return maxRatio + 1;
}

std::vector<Integer> divisors_up_to_cap(const Integer& nIn) {
    Integer n = abs(nIn);
    std::vector<Integer> divs;
    if (n == 0 || n > Integer("1000000000000")) return divs; // caller treats empty as "skip"
    std::vector<std::pair<Integer, int>> factors;
    Integer m = n;
    for (Integer p(2); p * p <= m && p < 1000000; ++p) {
        if (m % p == 0) {
            int e = 0;
            while (m % p == 0) {
                m /= p;
                ++e;
            }
            factors.emplace_back(p, e);
        }
    }
    if (m > 1) factors.emplace_back(m, 1);
    divs.push_back(Integer(1));
    for (const auto& [p, e] : factors) {
        std::size_t existing = divs.size();
        Integer pk(1);
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < existing; ++j) divs.push_back(divs[j] * pk);
        }
    }
    return divs;
}

// Exact division by (x - r).
UniPoly deflate(const UniPoly& u, const Rational& r) {
    UniPoly q(u.size() - 1, Rational(0));
    Rational carry = u.back();
    for (std::size_t i = u.size() - 1; i-- > 0;) {
        q[i] = carry;
        carry = u[i] + carry * r;
    }
    if (carry != 0) throw PreconditionError("deflation by a non-root");
    normalize(q);
    return q;
}

} // namespace

// ---------------------------------------------------------------------------
// AlgebraicPoint

PointRef AlgebraicPoint::fromRational(const Rational& q) {
    auto pt = std::make_shared<AlgebraicPoint>();
    pt->coeffs_ = {Rational(-q), Rational(1)}; // x - q
    pt->lo_ = q;
    pt->hi_ = q;
    pt->exact_ = q;
    return pt;
}

PointRef AlgebraicPoint::fromAlgebraic(std::vector<Rational> coeffs, const Rational& lo, const Rational& hi) {
    UniPoly u = std::move(coeffs);
    normalize(u);
    if (degree(u) < 1) throw PreconditionError("algebraic point needs a nonconstant polynomial");
    if (!(lo < hi)) throw PreconditionError("algebraic point needs a nonempty open interval");
    if (eval_up(u, lo) == 0 || eval_up(u, hi) == 0)
        throw PreconditionError("isolating interval endpoints must not be roots");
    SturmSeq seq = build_sturm(u);
    if (count_roots(seq, lo, hi) != 1)
        throw PreconditionError("interval does not isolate exactly one root");
    auto pt = std::make_shared<AlgebraicPoint>();
    pt->coeffs_ = std::move(u);
    pt->lo_ = lo;
    pt->hi_ = hi;
    auto seqPtr = std::make_shared<std::vector<std::vector<Rational>>>(std::move(seq));
    pt->sturm_ = std::move(seqPtr);
    return pt;
}

const Rational& AlgebraicPoint::rationalValue() const {
    if (!exact_) throw PreconditionError("point is not known to be rational");
    return *exact_;
}

Polynomial AlgebraicPoint::definingPolynomial() const { return to_polynomial(coeffs_); }

const std::vector<std::vector<Rational>>& AlgebraicPoint::sturmSeq() {
    if (!sturm_) sturm_ = std::make_shared<std::vector<std::vector<Rational>>>(build_sturm(coeffs_));
    return *sturm_;
}

void AlgebraicPoint::refineStep() {
    if (exact_) return;
    Rational mid = (lo_ + hi_) / 2;
    if (eval_up(coeffs_, mid) == 0) {
        exact_ = mid;
        lo_ = mid;
        hi_ = mid;
        return;
    }
    const auto& seq = sturmSeq();
    if (count_roots(seq, lo_, mid) == 1)
        hi_ = mid;
    else
        lo_ = mid;
}

std::string AlgebraicPoint::str() const {
    if (exact_) return to_string(*exact_);
    std::ostringstream os;
    std::string poly = to_polynomial(coeffs_).str();
    // Univariate display convention: plain x.
    std::string named;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        if (poly[i] == 'x' && i + 1 < poly.size() && poly[i + 1] == '1' &&
            (i + 2 >= poly.size() || !std::isdigit(static_cast<unsigned char>(poly[i + 2])))) {
            named += 'x';
            ++i;
        } else {
            named += poly[i];
        }
    }
    os << "alg " << named << " in (" << to_string(lo_) << "," << to_string(hi_) << ")";
    return os.str();
}

int compare_points(const PointRef& a, const PointRef& b) {
    if (!a || !b) throw PreconditionError("null point");
    if (a.get() == b.get()) return 0;
    if (a->exact_ && b->exact_) {
        if (*a->exact_ < *b->exact_) return -1;
        return *a->exact_ == *b->exact_ ? 0 : 1;
    }
    if (a->exact_ && !b->exact_) return -compare_points(b, a);
    if (!a->exact_ && b->exact_) {
        const Rational& r = *b->exact_;
        if (eval_up(a->coeffs_, r) == 0) {
            // r is a root of a's defining polynomial; is it THE root?
            if (a->lo_ < r && r < a->hi_) return 0;
        }
        while (true) {
            if (a->hi_ <= r) return -1;
            if (a->lo_ >= r) return 1;
            if (eval_up(a->coeffs_, r) == 0) return 0; // r inside: it is the isolated root
            a->refineStep();
            if (a->exact_) return compare_points(a, b);
        }
    }
    // Both genuinely algebraic.
    UniPoly g = gcd_up(a->coeffs_, b->coeffs_);
    bool mayShare = degree(g) >= 1;
    SturmSeq gSeq;
    if (mayShare) gSeq = build_sturm(g);
    while (true) {
        if (a->hi_ <= b->lo_) return -1;
        if (b->hi_ <= a->lo_) return 1;
        if (mayShare) {
            Rational hullLo = std::min(a->lo_, b->lo_);
            Rational hullHi = std::max(a->hi_, b->hi_);
            if (count_roots(gSeq, hullLo, hullHi) == 1 && count_roots(gSeq, a->lo_, a->hi_) == 1 &&
                count_roots(gSeq, b->lo_, b->hi_) == 1)
                return 0;
        }
        a->refineStep();
        b->refineStep();
        if (a->exact_ || b->exact_) return compare_points(a, b);
    }
}

int sign_at(const Polynomial& q, const PointRef& pt) {
    if (!pt) throw PreconditionError("null point");
    UniPoly u = from_polynomial(q);
    if (is_zero(u)) return 0;
    if (pt->exact_) return sgn(eval_up(u, *pt->exact_));
    if (degree(u) == 0) return sgn(u[0]);
    UniPoly g = gcd_up(pt->coeffs_, u);
    if (degree(g) >= 1) {
        // Roots of g lie among the roots of the defining polynomial, which
        // has exactly one root in the interval; a g-root inside means q
        // vanishes at the point.
        SturmSeq gSeq = build_sturm(g);
        if (count_roots(gSeq, pt->lo_, pt->hi_) >= 1) return 0;
    }
    // q does not vanish at the point: shrink until q has no root in the
    // interval, then read the sign at the midpoint.
    UniPoly usf = squarefree_part(u);
    SturmSeq uSeq = build_sturm(usf);
    while (count_roots(uSeq, pt->lo_, pt->hi_) > 0) {
        pt->refineStep();
        if (pt->exact_) return sgn(eval_up(u, *pt->exact_));
    }
    Rational mid = (pt->lo_ + pt->hi_) / 2;
    return sgn(eval_up(u, mid));
}

int sturm_count(const Polynomial& p, const ExtendedRational& lo, const ExtendedRational& hi) {
    UniPoly u = from_polynomial(p);
    if (is_zero(u)) throw PreconditionError("sturm_count of the zero polynomial");
    UniPoly sf = squarefree_part(u);
    if (degree(sf) < 1) return 0;
    return count_roots(build_sturm(sf), lo, hi);
}

std::vector<PointRef> isolate_roots(const Polynomial& p) {
    UniPoly u = from_polynomial(p);
    if (is_zero(u)) throw PreconditionError("isolate_roots of the zero polynomial");
    UniPoly sf = squarefree_part(u);
    std::vector<PointRef> out;
    if (degree(sf) < 1) return out;

    std::vector<Rational> rationalRoots;
    // Root at zero first.
    while (!sf.empty() && sf[0] == 0) {
        if (rationalRoots.empty() || rationalRoots.back() != 0) rationalRoots.push_back(Rational(0));
        sf.erase(sf.begin());
    }
    if (degree(sf) >= 1) {
        make_primitive(sf);
        std::vector<Integer> consts = divisors_up_to_cap(sf.front().get_num());
        std::vector<Integer> leads = divisors_up_to_cap(sf.back().get_num());
        std::set<Rational> candidates;
        if (!consts.empty() && !leads.empty()) {
            for (const Integer& cN : consts)
                for (const Integer& lN : leads) {
                    Rational cand(cN, lN);
                    cand.canonicalize();
                    candidates.insert(cand);
                    candidates.insert(Rational(-cand));
                }
        }
        for (const Rational& r : candidates) {
            if (degree(sf) < 1) break;
            if (eval_up(sf, r) == 0) {
                rationalRoots.push_back(r);
                sf = deflate(sf, r);
            }
        }
    }

    // The remaining factor has no rational roots (when candidate
    // enumeration was complete); isolate by Sturm bisection.
    std::vector<PointRef> algebraic;
    if (degree(sf) >= 1) {
        SturmSeq seq = build_sturm(sf);
        Rational bound = cauchy_bound(sf);
        struct Box {
            Rational lo, hi;
            int count;
        };
        std::vector<Box> work;
        auto push_if = [&](const Rational& lo, const Rational& hi) {
            int c = count_roots(seq, lo, hi);
            if (c > 0) work.push_back({lo, hi, c});
        };
        // Endpoints of the starting box are non-roots by the bound.
        push_if(-bound, bound);
        while (!work.empty()) {
            Box box = work.back();
            work.pop_back();
            if (box.count == 1) {
                if (eval_up(sf, box.lo) == 0 || eval_up(sf, box.hi) == 0)
                    throw PreconditionError("internal: root at isolating endpoint");
                algebraic.push_back(AlgebraicPoint::fromAlgebraic(sf, box.lo, box.hi));
                continue;
            }
            Rational mid = (box.lo + box.hi) / 2;
            if (eval_up(sf, mid) == 0) {
                // A rational root the candidate pass missed (incomplete
                // divisor enumeration); pin it exactly.
                rationalRoots.push_back(mid);
                sf = deflate(sf, mid);
                seq = build_sturm(sf);
                work.clear();
                algebraic.clear();
                if (degree(sf) >= 1) {
                    bound = cauchy_bound(sf);
                    push_if(-bound, bound);
                }
                continue;
            }
            push_if(box.lo, mid);
            push_if(mid, box.hi);
        }
    }

    for (const Rational& r : rationalRoots) out.push_back(AlgebraicPoint::fromRational(r));
    std::sort(out.begin(), out.end(),
              [](const PointRef& a, const PointRef& b) { return compare_points(a, b) < 0; });
    std::sort(algebraic.begin(), algebraic.end(),
              [](const PointRef& a, const PointRef& b) { return compare_points(a, b) < 0; });
    std::vector<PointRef> merged;
    std::merge(out.begin(), out.end(), algebraic.begin(), algebraic.end(), std::back_inserter(merged),
               [](const PointRef& a, const PointRef& b) { return compare_points(a, b) < 0; });
    return merged;
}

std::vector<PointRef> merge_points(const std::vector<std::vector<PointRef>>& groups) {
    std::vector<PointRef> all;
    for (const auto& g : groups) all.insert(all.end(), g.begin(), g.end());
    std::sort(all.begin(), all.end(),
              [](const PointRef& a, const PointRef& b) { return compare_points(a, b) < 0; });
    std::vector<PointRef> out;
    for (const auto& pt : all) {
        if (out.empty() || compare_points(out.back(), pt) != 0) out.push_back(pt);
    }
    return out;
}

// ---------------------------------------------------------------------------
// IntervalSet

IntervalSet IntervalSet::all() {
    IntervalSet s;
    s.intervalIn_ = {true};
    return s;
}

IntervalSet IntervalSet::fromDecomposition(std::vector<PointRef> bounds, std::vector<bool> pointIn,
                                           std::vector<bool> intervalIn) {
    if (pointIn.size() != bounds.size() || intervalIn.size() != bounds.size() + 1)
        throw PreconditionError("interval set decomposition sizes are inconsistent");
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i)
        if (compare_points(bounds[i], bounds[i + 1]) >= 0)
            throw PreconditionError("interval set boundary points must be sorted and distinct");
    IntervalSet s;
    s.bounds_ = std::move(bounds);
    s.pointIn_ = std::move(pointIn);
    s.intervalIn_ = std::move(intervalIn);
    return s;
}

bool IntervalSet::isEmpty() const {
    for (bool b : pointIn_)
        if (b) return false;
    for (bool b : intervalIn_)
        if (b) return false;
    return true;
}

bool IntervalSet::isAllR() const {
    for (bool b : pointIn_)
        if (!b) return false;
    for (bool b : intervalIn_)
        if (!b) return false;
    return true;
}

bool IntervalSet::containsPoint(const PointRef& pt) const {
    for (std::size_t i = 0; i < bounds_.size(); ++i) {
        int c = compare_points(pt, bounds_[i]);
        if (c == 0) return pointIn_[i];
        if (c < 0) return intervalIn_[i];
    }
    return intervalIn_.back();
}

bool IntervalSet::containsRational(const Rational& q) const {
    return containsPoint(AlgebraicPoint::fromRational(q));
}

std::vector<IntervalSet::Piece> IntervalSet::pieces() const {
    std::vector<Piece> out;
    std::size_t m = bounds_.size();
    // Cell sequence: interval 0, point 0, interval 1, ..., point m-1, interval m.
    auto cellIncluded = [&](std::size_t cell) {
        return cell % 2 == 0 ? intervalIn_[cell / 2] : pointIn_[cell / 2];
    };
    std::size_t totalCells = 2 * m + 1;
    std::size_t i = 0;
    auto makeEndpoint = [&](std::size_t boundIndex) {
        const PointRef& pt = bounds_[boundIndex];
        ExtendedRational er = pt->isRational() ? ExtendedRational::finite(pt->rationalValue())
                                               : ExtendedRational::finite((pt->lo() + pt->hi()) / 2);
        return std::make_pair(er, pt);
    };
    while (i < totalCells) {
        if (!cellIncluded(i)) {
            ++i;
            continue;
        }
        std::size_t runEnd = i;
        while (runEnd + 1 < totalCells && cellIncluded(runEnd + 1)) ++runEnd;
        std::size_t a = i, b = runEnd;
        // Leading point cell.
        if (a % 2 == 1 && a < b) {
            Piece p;
            p.isPoint = true;
            p.point = bounds_[a / 2];
            out.push_back(std::move(p));
            ++a;
        }
        // Trailing point cell (deferred until after the middle interval).
        bool trailingPoint = (b % 2 == 1 && b > a);
        std::size_t intervalEnd = trailingPoint ? b - 1 : b;
        if (a == b && a % 2 == 1) {
            Piece p;
            p.isPoint = true;
            p.point = bounds_[a / 2];
            out.push_back(std::move(p));
        } else {
            Piece p;
            p.isPoint = false;
            std::size_t leftInterval = a / 2;       // interval cell index
            std::size_t rightInterval = intervalEnd / 2;
            if (leftInterval == 0) {
                p.left = ExtendedRational::negInf();
            } else {
                auto [er, pt] = makeEndpoint(leftInterval - 1);
                p.left = er;
                p.leftPt = pt;
            }
            if (rightInterval == m) {
                p.right = ExtendedRational::posInf();
            } else {
                auto [er, pt] = makeEndpoint(rightInterval);
                p.right = er;
                p.rightPt = pt;
            }
            out.push_back(std::move(p));
            if (trailingPoint) {
                Piece q;
                q.isPoint = true;
                q.point = bounds_[b / 2];
                out.push_back(std::move(q));
            }
        }
        i = runEnd + 1;
    }
    return out;
}

namespace {

std::string endpoint_str(const ExtendedRational& er, const PointRef& pt, bool leftSide) {
    if (er.inf < 0) return "-inf";
    if (er.inf > 0) return "inf";
    if (pt && !pt->isRational()) return pt->str();
    (void)leftSide;
    return pt ? to_string(pt->rationalValue()) : to_string(er.value);
}

} // namespace

std::string IntervalSet::str() const {
    if (isEmpty()) return "{}";
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (const Piece& p : pieces()) {
        if (!first) os << ", ";
        first = false;
        if (p.isPoint) {
            if (p.point->isRational())
                os << "[pt " << to_string(p.point->rationalValue()) << "]";
            else
                os << "[" << p.point->str() << "]";
        } else {
            os << "(" << endpoint_str(p.left, p.leftPt, true) << ","
               << endpoint_str(p.right, p.rightPt, false) << ")";
        }
    }
    os << "}";
    return os.str();
}

std::vector<IntervalSet> IntervalSet::components() const {
    std::vector<IntervalSet> out;
    std::size_t m = bounds_.size();
    auto cellIncluded = [&](std::size_t cell) {
        return cell % 2 == 0 ? intervalIn_[cell / 2] : pointIn_[cell / 2];
    };
    std::size_t totalCells = 2 * m + 1;
    std::size_t i = 0;
    while (i < totalCells) {
        if (!cellIncluded(i)) {
            ++i;
            continue;
        }
        std::size_t runEnd = i;
        while (runEnd + 1 < totalCells && cellIncluded(runEnd + 1)) ++runEnd;
        std::vector<bool> pIn(m, false), iIn(m + 1, false);
        for (std::size_t c = i; c <= runEnd; ++c) {
            if (c % 2 == 0)
                iIn[c / 2] = true;
            else
                pIn[c / 2] = true;
        }
        out.push_back(fromDecomposition(bounds_, std::move(pIn), std::move(iIn)));
        i = runEnd + 1;
    }
    return out;
}

namespace {

// Joint refinement of two interval sets over merged boundary points.
struct Joint {
    std::vector<PointRef> bounds;
    std::vector<bool> aPoint, bPoint;       // membership of each boundary point
    std::vector<bool> aInterval, bInterval; // membership of each open cell
};

Joint joint_decomposition(const IntervalSet& a, const IntervalSet& b) {
    Joint j;
    j.bounds = merge_points({a.bounds(), b.bounds()});
    std::size_t m = j.bounds.size();
    j.aPoint.resize(m);
    j.bPoint.resize(m);
    j.aInterval.resize(m + 1);
    j.bInterval.resize(m + 1);
    auto intervalFlag = [&](const IntervalSet& s, std::size_t cell) {
        // Open joint cell `cell` lies between joint bounds cell-1 and cell;
        // locate the containing cell of s.
        std::size_t pos = 0;
        while (pos < s.bounds().size()) {
            // s-bound pos relative to the joint cell: if it is <= the left
            // bound of the cell, skip it.
            bool skip;
            if (cell == 0) {
                skip = false;
            } else {
                skip = compare_points(s.bounds()[pos], j.bounds[cell - 1]) <= 0;
            }
            if (skip)
                ++pos;
            else
                break;
        }
        return s.intervalFlags()[pos];
    };
    for (std::size_t i = 0; i < m; ++i) {
        j.aPoint[i] = a.containsPoint(j.bounds[i]);
        j.bPoint[i] = b.containsPoint(j.bounds[i]);
    }
    for (std::size_t c = 0; c <= m; ++c) {
        j.aInterval[c] = intervalFlag(a, c);
        j.bInterval[c] = intervalFlag(b, c);
    }
    return j;
}

IntervalSet combine(const IntervalSet& a, const IntervalSet& b, bool (*op)(bool, bool)) {
    Joint j = joint_decomposition(a, b);
    std::size_t m = j.bounds.size();
    std::vector<bool> pIn(m), iIn(m + 1);
    for (std::size_t i = 0; i < m; ++i) pIn[i] = op(j.aPoint[i], j.bPoint[i]);
    for (std::size_t c = 0; c <= m; ++c) iIn[c] = op(j.aInterval[c], j.bInterval[c]);
    return IntervalSet::fromDecomposition(std::move(j.bounds), std::move(pIn), std::move(iIn));
}

} // namespace

IntervalSet set_union(const IntervalSet& a, const IntervalSet& b) {
    return combine(a, b, [](bool x, bool y) { return x || y; });
}

IntervalSet set_intersection(const IntervalSet& a, const IntervalSet& b) {
    return combine(a, b, [](bool x, bool y) { return x && y; });
}

IntervalSet set_difference(const IntervalSet& a, const IntervalSet& b) {
    return combine(a, b, [](bool x, bool y) { return x && !y; });
}

bool set_equal(const IntervalSet& a, const IntervalSet& b) {
    return set_difference(a, b).isEmpty() && set_difference(b, a).isEmpty();
}

bool set_subset(const IntervalSet& a, const IntervalSet& b) { return set_difference(a, b).isEmpty(); }

bool set_disjoint(const IntervalSet& a, const IntervalSet& b) {
    return set_intersection(a, b).isEmpty();
}

// ---------------------------------------------------------------------------
// Realization

namespace {

bool eval_with_signs(const Formula& f, const std::map<Polynomial, int>& signs) {
    switch (f.kind()) {
    case Formula::Kind::Leaf:
        return f.leaf().holdsForSign(signs.at(f.leaf().poly));
    case Formula::Kind::Not:
        return !eval_with_signs(f.children()[0], signs);
    case Formula::Kind::And:
        for (const auto& c : f.children())
            if (!eval_with_signs(c, signs)) return false;
        return true;
    case Formula::Kind::Or:
        for (const auto& c : f.children())
            if (eval_with_signs(c, signs)) return true;
        return false;
    }
    throw PreconditionError("bad formula node");
}

// Refines both points until a.hi < b.lo strictly, then returns a rational
// strictly between the two exact points.
Rational rational_between(const PointRef& a, const PointRef& b) {
    while (!(a->hi() < b->lo())) {
        a->refineStep();
        b->refineStep();
    }
    return (a->hi() + b->lo()) / 2;
}

// One rational sample from each open cell of the partition induced by
// sorted distinct points.
std::vector<Rational> interval_samples(const std::vector<PointRef>& pts) {
    std::vector<Rational> out;
    if (pts.empty()) {
        out.push_back(Rational(0));
        return out;
    }
    out.push_back(pts.front()->lo() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) out.push_back(rational_between(pts[i], pts[i + 1]));
    out.push_back(pts.back()->hi() + 1);
    return out;
}

} // namespace

IntervalSet realize_univariate(const Formula& f) {
    if (f.ambientDimension() > 1) throw PreconditionError("realize_univariate needs a univariate formula");
    Formula g = f.ambientDimension() == 1 ? f : f.remapVariables(1);
    std::vector<Polynomial> polys = g.distinctPolynomials();
    std::vector<std::vector<PointRef>> rootGroups;
    for (const Polynomial& p : polys) {
        if (p.isConstant()) continue; // constant atoms fold to a fixed sign
        rootGroups.push_back(isolate_roots(p));
    }
    std::vector<PointRef> pts = merge_points(rootGroups);
    std::vector<Rational> samples = interval_samples(pts);

    std::size_t m = pts.size();
    std::vector<bool> pIn(m), iIn(m + 1);
    for (std::size_t c = 0; c <= m; ++c) {
        std::map<Polynomial, int> signs;
        for (const Polynomial& p : polys) signs[p] = sgn(p.eval({samples[c]}));
        iIn[c] = eval_with_signs(g, signs);
    }
    for (std::size_t i = 0; i < m; ++i) {
        std::map<Polynomial, int> signs;
        for (const Polynomial& p : polys)
            signs[p] = p.isConstant() ? sgn(p.constantValue()) : sign_at(p, pts[i]);
        pIn[i] = eval_with_signs(g, signs);
    }
    return IntervalSet::fromDecomposition(std::move(pts), std::move(pIn), std::move(iIn));
}

std::vector<PointRef> endpoints(const IntervalSet& s) {
    std::vector<PointRef> out;
    const auto& bounds = s.bounds();
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        bool inClos = s.pointFlags()[i] || s.intervalFlags()[i] || s.intervalFlags()[i + 1];
        bool inInt = s.pointFlags()[i] && s.intervalFlags()[i] && s.intervalFlags()[i + 1];
        if (inClos && !inInt) out.push_back(bounds[i]);
    }
    return out;
}

std::vector<IntervalSet> LinePartition::cells() const {
    std::vector<IntervalSet> out;
    std::size_t m = points.size();
    for (std::size_t c = 0; c <= m; ++c) {
        std::vector<bool> pIn(m, false), iIn(m + 1, false);
        iIn[c] = true;
        out.push_back(IntervalSet::fromDecomposition(points, pIn, iIn));
        if (c < m) {
            std::vector<bool> pIn2(m, false), iIn2(m + 1, false);
            pIn2[c] = true;
            out.push_back(IntervalSet::fromDecomposition(points, pIn2, iIn2));
        }
    }
    return out;
}

std::vector<std::string> LinePartition::cellStrings() const {
    std::vector<std::string> out;
    for (const IntervalSet& cell : cells()) out.push_back(cell.str());
    return out;
}

LinePartition common_refinement(const std::vector<IntervalSet>& sets) {
    std::vector<std::vector<PointRef>> groups;
    for (const IntervalSet& s : sets) groups.push_back(endpoints(s));
    LinePartition out;
    out.points = merge_points(groups);
    return out;
}

std::vector<BasicSet> basic_boolean_algebra(const std::vector<IntervalSet>& sets) {
    LinePartition refinement = common_refinement(sets);
    const auto& pts = refinement.points;
    std::size_t m = pts.size();
    std::vector<Rational> samples = interval_samples(pts);

    // Membership vector per cell; cells listed interval 0, point 0, ...
    std::map<std::vector<int>, std::pair<std::vector<bool>, std::vector<bool>>> groups;
    auto noteCell = [&](const std::vector<int>& key, std::size_t cell) {
        auto& entry = groups[key];
        if (entry.first.empty()) {
            entry.first.assign(m, false);
            entry.second.assign(m + 1, false);
        }
        if (cell % 2 == 0)
            entry.second[cell / 2] = true;
        else
            entry.first[cell / 2] = true;
    };
    for (std::size_t c = 0; c <= m; ++c) {
        std::vector<int> key;
        for (const IntervalSet& s : sets) key.push_back(s.containsRational(samples[c]) ? 1 : 0);
        noteCell(key, 2 * c);
    }
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<int> key;
        for (const IntervalSet& s : sets) key.push_back(s.containsPoint(pts[i]) ? 1 : 0);
        noteCell(key, 2 * i + 1);
    }

    std::vector<BasicSet> out;
    for (auto& [key, flags] : groups) {
        BasicSet basic;
        for (std::size_t i = 0; i < key.size(); ++i)
            if (key[i]) basic.indexSet.push_back(static_cast<int>(i));
        basic.set = IntervalSet::fromDecomposition(pts, std::move(flags.first), std::move(flags.second));
        basic.components = basic.set.components();
        out.push_back(std::move(basic));
    }
    return out;
}

bool is_partition_of_line(const std::vector<IntervalSet>& cells) {
    if (cells.empty()) return false;
    IntervalSet acc = IntervalSet::empty();
    for (const IntervalSet& c : cells) {
        if (!set_disjoint(acc, c)) return false;
        acc = set_union(acc, c);
    }
    return acc.isAllR();
}

bool is_adapted(const std::vector<IntervalSet>& partition, const std::vector<IntervalSet>& targets) {
    if (!is_partition_of_line(partition))
        throw PreconditionError("is_adapted requires a partition of the line");
    for (const IntervalSet& cell : partition)
        for (const IntervalSet& target : targets)
            if (!set_subset(cell, target) && !set_disjoint(cell, target)) return false;
    return true;
}

bool is_cylindrical_cell(const IntervalSet& s) { return s.pieces().size() == 1; }

LinePartition cdd_line(const std::vector<IntervalSet>& targets) { return common_refinement(targets); }

std::string Census::toJson() const {
    std::ostringstream os;
    os << "{\"rows\":[";
    bool first = true;
    for (const CensusRow& row : rows) {
        if (!first) os << ",";
        first = false;
        os << "{\"sigma\":\"";
        for (std::size_t i = 0; i < row.sigma.size(); ++i) {
            if (i) os << ",";
            os << (row.sigma[i] > 0 ? "+" : (row.sigma[i] < 0 ? "-" : "0"));
        }
        os << "\",\"b0\":" << row.b0.get_str() << "}";
    }
    os << "],\"sum_b0\":\"" << totalB0.get_str() << "\"}";
    return os.str();
}

Census sign_condition_census(const std::vector<Polynomial>& family) {
    if (family.empty()) throw PreconditionError("census requires a nonempty family");
    for (const Polynomial& p : family)
        if (p.isZero()) throw PreconditionError("census family must not contain the zero polynomial");

    Census out;
    out.family = family;
    std::vector<std::vector<PointRef>> rootGroups;
    for (const Polynomial& p : family) {
        if (!p.isConstant()) rootGroups.push_back(isolate_roots(p));
    }
    std::vector<PointRef> pts = merge_points(rootGroups);
    std::size_t m = pts.size();
    std::vector<Rational> samples = interval_samples(pts);

    // Sign vector of every cell, in left-to-right cell order.
    std::vector<std::vector<int>> cellSigns(2 * m + 1);
    for (std::size_t c = 0; c <= m; ++c) {
        std::vector<int> sigma;
        for (const Polynomial& p : family) sigma.push_back(sgn(p.eval({samples[c]})));
        cellSigns[2 * c] = std::move(sigma);
    }
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<int> sigma;
        for (const Polynomial& p : family)
            sigma.push_back(p.isConstant() ? sgn(p.constantValue()) : sign_at(p, pts[i]));
        cellSigns[2 * i + 1] = std::move(sigma);
    }

    // Components: maximal runs of adjacent cells carrying the same sign
    // vector count once.
    std::map<std::vector<int>, Integer> counts;
    std::size_t i = 0;
    while (i < cellSigns.size()) {
        std::size_t j = i;
        while (j + 1 < cellSigns.size() && cellSigns[j + 1] == cellSigns[i]) ++j;
        counts[cellSigns[i]] += 1;
        i = j + 1;
    }
    for (auto& [sigma, b0] : counts) {
        out.rows.push_back(CensusRow{sigma, b0});
        out.totalB0 += b0;
    }
    return out;
}

} // namespace line
} // namespace saq
