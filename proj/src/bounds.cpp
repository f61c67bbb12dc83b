#include "saq/bounds.hpp"

#include "saq/errors.hpp"

#include <algorithm>
#include <sstream>

namespace saq {
namespace bounds {

DegreeSequence::DegreeSequence(std::vector<int> degrees) : degs_(std::move(degrees)) {
    for (int d : degs_)
        if (d < 1) throw PreconditionError("degrees must be >= 1");
    std::sort(degs_.begin(), degs_.end());
}

std::string BoundReport::toJson() const {
    std::ostringstream os;
    os << "{\"formula\":\"" << formulaName << "\",\"value\":\"" << value.get_str() << "\",\"params\":{";
    bool first = true;
    for (const auto& [k, v] : parameters) {
        if (!first) os << ",";
        first = false;
        os << "\"" << k << "\":\"" << v << "\"";
    }
    os << "},\"annotations\":[";
    first = true;
    for (const auto& a : annotations) {
        if (!first) os << ",";
        first = false;
        os << "\"" << a << "\"";
    }
    os << "]}";
    return os.str();
}

namespace {

Integer chi_impl(int k, std::vector<int> degs, std::map<std::pair<int, std::vector<int>>, Integer>& memo) {
    int m = static_cast<int>(degs.size());
    if (m > k) throw PreconditionError("chi requires m <= k");
    if (m == 0) return Integer(k + 1);
    if (m == k) {
        Integer prod(1);
        for (int d : degs) prod *= d;
        return prod;
    }
    auto key = std::make_pair(k, degs);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    int dm = degs.back();
    std::vector<int> head(degs.begin(), degs.end() - 1);
    Integer value = Integer(dm) * chi_impl(k - 1, head, memo) -
                    Integer(dm - 1) * chi_impl(k - 1, degs, memo);
    memo.emplace(std::move(key), value);
    return value;
}

} // namespace

Integer chi(int k, const DegreeSequence& degs) {
    if (k < 0) throw PreconditionError("chi requires k >= 0");
    std::map<std::pair<int, std::vector<int>>, Integer> memo;
    return chi_impl(k, degs.degrees(), memo);
}

Integer chi_unsorted(int k, const std::vector<int>& degs) {
    for (int d : degs)
        if (d < 1) throw PreconditionError("degrees must be >= 1");
    std::map<std::pair<int, std::vector<int>>, Integer> memo;
    return chi_impl(k, degs, memo);
}

Integer chi_abs_bound(int k, const DegreeSequence& degs) {
    int m = degs.size();
    if (m > k) throw PreconditionError("chi_abs_bound requires m <= k");
    Integer out = binomial(static_cast<unsigned long>(k + 1), static_cast<unsigned long>(m + 1));
    const auto& ds = degs.degrees();
    for (int i = 0; i + 1 < m; ++i) out *= ds[static_cast<std::size_t>(i)];
    if (m > 0)
        out *= int_pow(Integer(ds.back()), static_cast<unsigned long>(k - m + 1));
    return out;
}

Integer beta_bound(int k, const DegreeSequence& degs) {
    return chi_abs_bound(k, degs) + Integer(2 * (k - degs.size() + 1));
}

Integer F(int d, int d0, int k, int kprime, int j) {
    if (kprime < 0 || kprime > k) throw PreconditionError("F requires 0 <= k' <= k");
    if (j < 0 || j > kprime) throw PreconditionError("F requires 0 <= j <= k'");
    if (d < 1 || d0 < 1) throw PreconditionError("F requires degrees >= 1");
    Integer out = binomial(static_cast<unsigned long>(k + 1), static_cast<unsigned long>(k - kprime + j + 1));
    out *= int_pow(Integer(2 * d0), static_cast<unsigned long>(k - kprime));
    out *= int_pow(Integer(d), static_cast<unsigned long>(j));
    out *= int_pow(Integer(std::max(2 * d0, d)), static_cast<unsigned long>(kprime - j));
    out += Integer(2 * (k - j + 1));
    return out;
}

Integer main_bound_uniform(int s, int d, int d0, int k, int kprime) {
    if (s < 0) throw PreconditionError("main_bound_uniform requires s >= 0");
    Integer total(0);
    for (int j = 0; j <= kprime; ++j) {
        Integer term = int_pow(Integer(4), static_cast<unsigned long>(j));
        term *= binomial(static_cast<unsigned long>(s + 1), static_cast<unsigned long>(j));
        term *= F(d, d0, k, kprime, j);
        total += term;
    }
    return total;
}

Integer main_bound_list(const std::vector<int>& degreesOfP, int d0, int k, int kprime, int enumerationCap) {
    int s = static_cast<int>(degreesOfP.size());
    if (kprime < 0 || kprime > k) throw PreconditionError("main_bound_list requires 0 <= k' <= k");
    if (d0 < 1) throw PreconditionError("main_bound_list requires d0 >= 1");
    for (int d : degreesOfP)
        if (d < 1) throw PreconditionError("main_bound_list requires degrees >= 1");
    if (s > enumerationCap)
        throw ResourceCapError("main_bound_list: family size " + std::to_string(s) +
                               " exceeds the subset enumeration cap of " + std::to_string(enumerationCap));
    Integer total(0);
    Integer pow2d0KmKp = int_pow(Integer(2 * d0), static_cast<unsigned long>(k - kprime));
    // Subsets by bitmask; sizes capped at k'.
    for (unsigned long mask = 0; mask < (1UL << s); ++mask) {
        int size = __builtin_popcountl(mask);
        if (size > kprime) continue;
        Integer dI(1);
        int maxFactor = 2 * d0; // empty max convention: max{2 d0} = 2 d0
        for (int i = 0; i < s; ++i) {
            if (mask & (1UL << i)) {
                dI *= degreesOfP[static_cast<std::size_t>(i)];
                maxFactor = std::max(maxFactor, degreesOfP[static_cast<std::size_t>(i)]);
            }
        }
        Integer term = binomial(static_cast<unsigned long>(k + 1),
                                static_cast<unsigned long>(k - kprime + size + 1));
        term *= pow2d0KmKp;
        term *= dI;
        term *= int_pow(Integer(maxFactor), static_cast<unsigned long>(kprime - size));
        term += Integer(2 * (k - size + 1));
        term *= int_pow(Integer(4), static_cast<unsigned long>(size));
        total += term;
    }
    return total;
}

CrossCheck cross_check_main_bounds(int s, int d, int d0, int k, int kprime) {
    CrossCheck out;
    out.uniformValue = main_bound_uniform(s, d, d0, k, kprime);
    out.listValue = main_bound_list(std::vector<int>(static_cast<std::size_t>(s), d), d0, k, kprime);
    out.equal = out.listValue == out.uniformValue;
    if (!out.equal) {
        out.note = "binomial-convention divergence: the uniform statement weights size-j terms by "
                   "C(s+1,j) while the subset statement enumerates C(s,j) subsets of the family";
    }
    return out;
}

Integer bpr8_bound(int s, int d, int k, int kprime) {
    if (k < 1) throw PreconditionError("bpr8_bound requires k >= 1");
    if (s < 0 || d < 1) throw PreconditionError("bpr8_bound requires s >= 0 and d >= 1");
    Integer base = Integer(d) * int_pow(Integer(2 * d - 1), static_cast<unsigned long>(k - 1));
    Integer total(0);
    for (int j = 1; j <= kprime; ++j) {
        Integer term = binomial(static_cast<unsigned long>(s), static_cast<unsigned long>(j));
        term *= int_pow(Integer(4), static_cast<unsigned long>(j));
        term *= base;
        total += term;
    }
    return total;
}

BoundReport geometric_permutations_bound(int n, int d, int kt) {
    if (kt < 1 || kt >= d) throw PreconditionError("geometric permutations bound requires 1 <= kt < d");
    if (n < kt + 1) throw PreconditionError("geometric permutations bound requires n >= kt + 1");
    Integer inner = Integer(kt);
    inner *= binomial((1UL << (kt + 1)) - 2, static_cast<unsigned long>(kt));
    inner *= binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(kt + 1));
    Integer value = int_pow(inner, static_cast<unsigned long>(kt * (d - kt)));
    BoundReport report;
    report.formulaName = "geometric_permutations";
    report.value = value;
    report.parameters = {{"n", std::to_string(n)}, {"d", std::to_string(d)}, {"kt", std::to_string(kt)}};
    report.annotations.push_back("*O(1)^" + std::to_string(d * d));
    return report;
}

JoinFormat join_format(int p, int k, long long a, int s, int d) {
    if (p < 0 || k < 0 || a < 0 || s < 0 || d < 0)
        throw PreconditionError("join_format requires non-negative inputs");
    (void)d;
    Integer choose2 = binomial(static_cast<unsigned long>(p + 1), 2);
    JoinFormat out;
    out.M = Integer(p + 1) * Integer(static_cast<long>(k + 2 + a)) + Integer(2 * k) * choose2;
    out.Mprime = Integer(p + 1) * Integer(s + 2) + Integer(3) * choose2 + 3;
    out.N = Integer(p + 1) * Integer(k + 1) + choose2;
    return out;
}

StarFormat star_format(int p, int k, long long a) {
    if (p < 0 || k < 0 || a < 0) throw PreconditionError("star_format requires non-negative inputs");
    Integer choose2 = binomial(static_cast<unsigned long>(p + 1), 2);
    StarFormat out;
    out.M = Integer(p + 1) * Integer(static_cast<long>(6 * k + 6 * a + 1)) +
            Integer(2) * choose2 * Integer(static_cast<long>(4 * k + 2 * a + 3));
    out.N = Integer(p + 1) * Integer(static_cast<long>(2 * k + a + 3)) + choose2;
    out.Mprime = Integer(p + 1) * Integer(static_cast<long>(2 * k + a + 3)) +
                 (out.N + out.M) * (out.M + 2);
    out.smallSquareCheck = out.Mprime <= Integer(5) * out.M * out.M;
    return out;
}

BoundReport homotopy_exponents(int k, long long a) {
    if (k < 0 || a < 0) throw PreconditionError("homotopy_exponents requires non-negative inputs");
    BoundReport report;
    report.formulaName = "homotopy_exponents";
    report.parameters = {{"k", std::to_string(k)}, {"a", std::to_string(a)}};
    Integer divFree = int_pow(Integer(static_cast<long>(k + a)), 8);
    Integer weak = int_pow(Integer(Integer(k) * k + Integer(static_cast<long>(a))) * k, 8);
    report.value = divFree;
    report.annotations.push_back("division-free lists: 2^(O(k+a)^8); (k+a)^8 = " + divFree.get_str() +
                                 " at constant 1; constant unspecified");
    report.annotations.push_back("one-parameter limits: 2^(O(k(k^2+a))^8); (k(k^2+a))^8 = " + weak.get_str() +
                                 " at constant 1; constant unspecified");
    report.annotations.push_back("rational lists: 2^((k+a)^O(1)); base k+a = " + std::to_string(static_cast<long long>(k) + a) +
                                 "; exponent constant unspecified");
    return report;
}

Integer tight_example_count(int s, int d, int d0, int k) {
    if (s < 1 || d < 1 || d0 < 1 || k < 1)
        throw PreconditionError("tight_example_count requires positive inputs");
    Integer total(0);
    for (int i = 0; i <= k - 1; ++i)
        total += binomial(static_cast<unsigned long>(s) * static_cast<unsigned long>(d),
                          static_cast<unsigned long>(i));
    return Integer(d0) * total;
}

} // namespace bounds
} // namespace saq
