#ifndef SAQ_TEST_UTIL_HPP
#define SAQ_TEST_UTIL_HPP

#include "saq/formula.hpp"
#include "saq/polynomial.hpp"

#include <random>
#include <vector>

namespace saq {
namespace testutil {

using Rng = std::mt19937_64;

inline Rational random_rational(Rng& rng, int numAbs = 9, int denMax = 9) {
    std::uniform_int_distribution<int> num(-numAbs, numAbs);
    std::uniform_int_distribution<int> den(1, denMax);
    Rational q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

inline Rational random_nonzero_rational(Rng& rng, int numAbs = 9, int denMax = 9) {
    while (true) {
        Rational q = random_rational(rng, numAbs, denMax);
        if (q != 0) return q;
    }
}

inline std::vector<Rational> random_point(Rng& rng, int k, int numAbs = 9, int denMax = 9) {
    std::vector<Rational> out;
    for (int i = 0; i < k; ++i) out.push_back(random_rational(rng, numAbs, denMax));
    return out;
}

inline Polynomial random_polynomial(Rng& rng, int k, int maxDegree, int maxTerms) {
    std::uniform_int_distribution<int> terms(1, maxTerms);
    std::uniform_int_distribution<int> expo(0, maxDegree);
    Polynomial p(k);
    int t = terms(rng);
    for (int i = 0; i < t; ++i) {
        std::vector<int> e(static_cast<std::size_t>(k), 0);
        int budget = maxDegree;
        for (int v = 0; v < k; ++v) {
            int x = expo(rng) % (budget + 1);
            e[static_cast<std::size_t>(v)] = x;
            budget -= x;
        }
        p.addTerm(Monomial(std::move(e)), random_rational(rng));
    }
    return p;
}

inline Polynomial random_nonzero_polynomial(Rng& rng, int k, int maxDegree, int maxTerms) {
    while (true) {
        Polynomial p = random_polynomial(rng, k, maxDegree, maxTerms);
        if (!p.isZero()) return p;
    }
}

inline Formula random_formula(Rng& rng, int k, int depth, int maxDegree = 3, int maxTerms = 3) {
    std::uniform_int_distribution<int> pick(0, 3);
    std::uniform_int_distribution<int> relPick(0, 4);
    std::uniform_int_distribution<int> width(2, 3);
    if (depth <= 0 || pick(rng) == 0) {
        Rel rels[] = {Rel::Eq, Rel::Gt, Rel::Lt, Rel::Ge, Rel::Le};
        return Formula::atom(random_nonzero_polynomial(rng, k, maxDegree, maxTerms),
                             rels[relPick(rng)]);
    }
    int kind = pick(rng);
    if (kind == 1) return Formula::mkNot(random_formula(rng, k, depth - 1, maxDegree, maxTerms));
    std::vector<Formula> kids;
    int w = width(rng);
    for (int i = 0; i < w; ++i) kids.push_back(random_formula(rng, k, depth - 1, maxDegree, maxTerms));
    return kind == 2 ? Formula::mkAnd(std::move(kids)) : Formula::mkOr(std::move(kids));
}

} // namespace testutil
} // namespace saq

#endif
