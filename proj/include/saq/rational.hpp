#ifndef SAQ_RATIONAL_HPP
#define SAQ_RATIONAL_HPP

#include <gmpxx.h>

#include <string>

namespace saq {

// Exact scalars. mpq_class keeps gcd(num, den) = 1 and den > 0 after
// canonicalize(), which is exactly the invariant we need.
using Integer = mpz_class;
using Rational = mpq_class;

inline int sign(const Rational& q) { return sgn(q); }
inline int sign(const Integer& z) { return sgn(z); }

// Parses "INT" or "INT/INT" with an optional leading '-'.
Rational parse_rational(const std::string& text);

// "n" when the denominator is 1, otherwise "n/d".
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

inline Integer to_integer(long long v) { return Integer(static_cast<long>(v)); }

Integer binomial(unsigned long n, unsigned long r);
Integer int_pow(const Integer& base, unsigned long e);
Rational rat_pow(const Rational& base, long e);

} // namespace saq

#endif
