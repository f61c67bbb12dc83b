#ifndef SAQ_GRID_HPP
#define SAQ_GRID_HPP

#include "saq/formula.hpp"
#include "saq/rational.hpp"

#include <utility>
#include <vector>

namespace saq {
namespace grid {

using Point = std::vector<Rational>;

// Per-axis closed ranges.
struct Box {
    std::vector<std::pair<Rational, Rational>> ranges;
};

// All lattice points lo_i, lo_i + step, ... <= hi_i satisfying f exactly.
// Enforces ambient dimension <= 3. A membership witness tool only; an
// empty result never certifies emptiness.
std::vector<Point> grid_sample(const Formula& f, const Box& box, const Rational& step,
                               std::size_t pointCap = 10000000, int threads = 1);

// Squared symmetric Hausdorff distance between finite point sets,
// exact; reported squared to stay rational.
Rational hausdorff_grid(const std::vector<Point>& a, const std::vector<Point>& b);

} // namespace grid
} // namespace saq

#endif
