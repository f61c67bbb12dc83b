#ifndef SAQ_BOUNDS_HPP
#define SAQ_BOUNDS_HPP

#include "saq/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace saq {
namespace bounds {

// Ascending degree sequence d1 <= ... <= dm, all >= 1.
class DegreeSequence {
public:
    DegreeSequence() = default;
    explicit DegreeSequence(std::vector<int> degrees);

    int size() const { return static_cast<int>(degs_.size()); }
    const std::vector<int>& degrees() const { return degs_; }

private:
    std::vector<int> degs_;
};

struct BoundReport {
    std::string formulaName;
    Integer value{0};
    std::map<std::string, std::string> parameters;
    std::vector<std::string> annotations;

    std::string toJson() const;
};

// Euler characteristic of a degree-(d1..dm) non-singular complete
// intersection in projective k-space, by the three-case recurrence.
Integer chi(int k, const DegreeSequence& degs);
// Recurrence evaluated verbatim on an unsorted list (peels the last degree).
Integer chi_unsorted(int k, const std::vector<int>& degs);

Integer chi_abs_bound(int k, const DegreeSequence& degs);
Integer beta_bound(int k, const DegreeSequence& degs);

// F_{d,d0,k,k'}(j) = C(k+1, k-k'+j+1) (2 d0)^{k-k'} d^j max{2 d0, d}^{k'-j} + 2(k-j+1)
Integer F(int d, int d0, int k, int kprime, int j);

// sum_{j=0}^{k'} 4^j C(s+1, j) F_{d,d0,k,k'}(j)
Integer main_bound_uniform(int s, int d, int d0, int k, int kprime);

// Subset form: sum over I subset of P with |I| <= k' of
//   4^{|I|} ( C(k+1, k-k'+|I|+1) (2 d0)^{k-k'} d_I max_{P in I}{2 d0, d_P}^{k'-|I|}
//             + 2(k-|I|+1) ),
// with the empty max over I = {} taken as 2 d0.
Integer main_bound_list(const std::vector<int>& degreesOfP, int d0, int k, int kprime,
                        int enumerationCap = 20);

struct CrossCheck {
    Integer listValue;
    Integer uniformValue;
    bool equal = false;
    std::string note; // set when the two statements diverge
};
CrossCheck cross_check_main_bounds(int s, int d, int d0, int k, int kprime);

// sum_{1 <= j <= k'} C(s, j) 4^j d (2d-1)^{k-1}
Integer bpr8_bound(int s, int d, int k, int kprime);

// Main factor (kt C(2^{kt+1}-2, kt) C(n, kt+1))^{kt(d-kt)}; the O(1)^{d^2}
// factor is carried as an annotation.
BoundReport geometric_permutations_bound(int n, int d, int kt);

struct JoinFormat {
    Integer M;      // additive-count bound
    Integer Mprime; // dense-count bound
    Integer N;      // ambient dimension
};
// M = (p+1)(k+a+2) + 2k C(p+1,2), M' = (p+1)(s+2) + 3 C(p+1,2) + 3,
// N = (p+1)(k+1) + C(p+1,2). The s and d arguments ride along for the
// dense triple (M', d+1, N).
JoinFormat join_format(int p, int k, long long a, int s, int d);

struct StarFormat {
    Integer M;
    Integer N;
    Integer Mprime;
    bool smallSquareCheck = false; // M' <= 5 M^2
};
// M = (p+1)(6k+6a+1) + 2 C(p+1,2)(4k+2a+3),
// N = (p+1)(2k+a+3) + C(p+1,2),
// M' = (p+1)(2k+a+3) + (N+M)(M+2).
StarFormat star_format(int p, int k, long long a);

// The three homotopy-type exponent expressions, with unspecified
// O-constants reported symbolically and numerics taken at constant 1.
BoundReport homotopy_exponents(int k, long long a);

// d0 * sum_{i=0}^{k-1} C(s d, i)
Integer tight_example_count(int s, int d, int d0, int k);

} // namespace bounds
} // namespace saq

#endif
