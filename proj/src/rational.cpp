#include "saq/rational.hpp"

#include "saq/errors.hpp"

#include <cctype>

namespace saq {

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw ParseError("empty rational literal");
    std::size_t i = 0;
    bool neg = false;
    if (text[i] == '-' || text[i] == '+') {
        neg = (text[i] == '-');
        ++i;
    }
    std::size_t numStart = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == numStart) throw ParseError("expected digits in rational literal '" + text + "'");
    Integer num(text.substr(numStart, i - numStart));
    Integer den(1);
    if (i < text.size() && text[i] == '/') {
        ++i;
        std::size_t denStart = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == denStart) throw ParseError("expected denominator digits in '" + text + "'");
        den = Integer(text.substr(denStart, i - denStart));
        if (den == 0) throw ParseError("zero denominator in '" + text + "'");
    }
    if (i != text.size()) throw ParseError("trailing characters in rational literal '" + text + "'");
    Rational q(num, den);
    q.canonicalize();
    if (neg) q = -q;
    return q;
}

std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const Integer& z) { return z.get_str(); }

Integer binomial(unsigned long n, unsigned long r) {
    Integer out;
    mpz_bin_uiui(out.get_mpz_t(), n, r);
    return out;
}

Integer int_pow(const Integer& base, unsigned long e) {
    Integer out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
    return out;
}

Rational rat_pow(const Rational& base, long e) {
    if (e == 0) return Rational(1);
    if (e < 0) {
        if (base == 0) throw PreconditionError("negative power of zero");
        Rational inv(base.get_den(), base.get_num());
        inv.canonicalize();
        return rat_pow(inv, -e);
    }
    Rational out(int_pow(Integer(base.get_num()), static_cast<unsigned long>(e)),
                 int_pow(Integer(base.get_den()), static_cast<unsigned long>(e)));
    out.canonicalize();
    return out;
}

} // namespace saq
