#include "saq/grid.hpp"

#include "saq/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <thread>

namespace saq {
namespace grid {

std::vector<Point> grid_sample(const Formula& f, const Box& box, const Rational& step,
                               std::size_t pointCap, int threads) {
    int k = f.ambientDimension();
    if (k < 1 || k > 3) throw PreconditionError("grid sampling supports 1 <= k <= 3");
    if (static_cast<int>(box.ranges.size()) != k)
        throw PreconditionError("box dimension does not match the formula");
    if (step <= 0) throw PreconditionError("grid step must be positive");

    std::vector<std::vector<Rational>> axes;
    std::size_t total = 1;
    for (const auto& [lo, hi] : box.ranges) {
        if (lo > hi) throw PreconditionError("empty box range");
        std::vector<Rational> axis;
        for (Rational x = lo; x <= hi; x += step) {
            axis.push_back(x);
            if (axis.size() > pointCap) throw ResourceCapError("grid axis exceeds the point cap");
        }
        total *= axis.size();
        if (total > pointCap)
            throw ResourceCapError("grid size exceeds the point cap of " + std::to_string(pointCap));
        axes.push_back(std::move(axis));
    }

    auto scanRows = [&](std::size_t rowBegin, std::size_t rowEnd, std::vector<Point>& out) {
        Point p(static_cast<std::size_t>(k));
        for (std::size_t i = rowBegin; i < rowEnd; ++i) {
            p[0] = axes[0][i];
            if (k == 1) {
                if (eval_formula(f, p)) out.push_back(p);
                continue;
            }
            for (const Rational& y : axes[1]) {
                p[1] = y;
                if (k == 2) {
                    if (eval_formula(f, p)) out.push_back(p);
                    continue;
                }
                for (const Rational& z : axes[2]) {
                    p[2] = z;
                    if (eval_formula(f, p)) out.push_back(p);
                }
            }
        }
    };

    int workers = std::max(1, threads);
    if (workers == 1 || axes[0].size() < 2) {
        std::vector<Point> out;
        scanRows(0, axes[0].size(), out);
        return out;
    }
    workers = std::min<int>(workers, static_cast<int>(axes[0].size()));
    std::vector<std::vector<Point>> partial(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    std::size_t rows = axes[0].size();
    for (int w = 0; w < workers; ++w) {
        std::size_t begin = rows * static_cast<std::size_t>(w) / static_cast<std::size_t>(workers);
        std::size_t end = rows * static_cast<std::size_t>(w + 1) / static_cast<std::size_t>(workers);
        pool.emplace_back(scanRows, begin, end, std::ref(partial[static_cast<std::size_t>(w)]));
    }
    for (auto& t : pool) t.join();
    std::vector<Point> out;
    for (auto& part : partial) out.insert(out.end(), part.begin(), part.end());
    return out;
}

namespace {

Integer common_denominator(const std::vector<Point>& pts, Integer start) {
    Integer lcm = std::move(start);
    for (const Point& p : pts)
        for (const Rational& c : p) {
            Integer den = c.get_den();
            Integer g;
            mpz_gcd(g.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
            lcm = lcm / g * den;
        }
    return lcm;
}

template <typename Coord>
Coord directed_sq(const std::vector<std::vector<Coord>>& a, const std::vector<std::vector<Coord>>& b) {
    Coord best = 0;
    for (const auto& pa : a) {
        Coord minDist = -1;
        for (const auto& pb : b) {
            Coord d = 0;
            for (std::size_t i = 0; i < pa.size(); ++i) {
                Coord diff = pa[i] - pb[i];
                d += diff * diff;
            }
            if (minDist < 0 || d < minDist) {
                minDist = d;
                if (minDist <= best) break; // cannot raise the maximum
            }
        }
        if (minDist > best) best = minDist;
    }
    return best;
}

} // namespace

Rational hausdorff_grid(const std::vector<Point>& a, const std::vector<Point>& b) {
    if (a.empty() || b.empty())
        throw PreconditionError("Hausdorff distance requires nonempty point sets");
    std::size_t dim = a[0].size();
    for (const Point& p : a)
        if (p.size() != dim) throw PreconditionError("point dimension mismatch");
    for (const Point& p : b)
        if (p.size() != dim) throw PreconditionError("point dimension mismatch");

    Integer denom = common_denominator(b, common_denominator(a, Integer(1)));

    // Fast path on machine integers when scaled coordinates are small.
    bool small = true;
    Integer cap(1000000);
    for (const auto* set : {&a, &b}) {
        for (const Point& p : *set)
            for (const Rational& c : p) {
                Integer scaled = c.get_num() * (denom / c.get_den());
                if (abs(scaled) > cap) {
                    small = false;
                    break;
                }
            }
    }
    Integer bestNum;
    if (small) {
        auto scale = [&](const std::vector<Point>& pts) {
            std::vector<std::vector<std::int64_t>> out;
            out.reserve(pts.size());
            for (const Point& p : pts) {
                std::vector<std::int64_t> row;
                row.reserve(p.size());
                for (const Rational& c : p) {
                    Integer scaled = c.get_num() * (denom / c.get_den());
                    row.push_back(scaled.get_si());
                }
                out.push_back(std::move(row));
            }
            return out;
        };
        auto sa = scale(a), sb = scale(b);
        std::int64_t d = std::max(directed_sq(sa, sb), directed_sq(sb, sa));
        bestNum = Integer(static_cast<long>(d));
    } else {
        auto scale = [&](const std::vector<Point>& pts) {
            std::vector<std::vector<Integer>> out;
            out.reserve(pts.size());
            for (const Point& p : pts) {
                std::vector<Integer> row;
                row.reserve(p.size());
                for (const Rational& c : p) row.push_back(Integer(c.get_num() * (denom / c.get_den())));
                out.push_back(std::move(row));
            }
            return out;
        };
        auto sa = scale(a), sb = scale(b);
        bestNum = std::max(directed_sq(sa, sb), directed_sq(sb, sa));
    }
    Rational out(bestNum, denom * denom);
    out.canonicalize();
    return out;
}

} // namespace grid
} // namespace saq
