#include "flecscope/rational.hpp"

#include <cmath>
#include <cstdio>

namespace flecscope {

Rational rational_from_double(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite value has no rational form");
    if (v == 0.0) return Rational(0);
    int exp = 0;
    double mant = std::frexp(v, &exp);  // v = mant * 2^exp, |mant| in [0.5, 1)
    // 53 doublings make the mantissa integral.
    for (int i = 0; i < 53 && mant != std::floor(mant); ++i) {
        mant *= 2.0;
        --exp;
    }
    BigInt num(static_cast<long long>(mant));
    Rational r(num);
    if (exp > 0)
        r *= Rational(BigInt(1) << exp);
    else if (exp < 0)
        r /= Rational(BigInt(1) << (-exp));
    return r;
}

namespace {

// cpp_int's string constructor honours 0x/0 prefixes; force base 10.
BigInt decimal_bigint(std::string s) {
    if (s.empty()) throw std::invalid_argument("empty integer literal");
    bool neg = false;
    size_t pos = 0;
    if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        pos = 1;
    }
    if (pos == s.size()) throw std::invalid_argument("bad integer literal '" + s + "'");
    BigInt v(0);
    for (; pos < s.size(); ++pos) {
        if (s[pos] < '0' || s[pos] > '9')
            throw std::invalid_argument("bad integer literal '" + s + "'");
        v = v * 10 + (s[pos] - '0');
    }
    return neg ? -v : v;
}

}  // namespace

Rational parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        BigInt num = decimal_bigint(s.substr(0, slash));
        BigInt den = decimal_bigint(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
        return Rational(num, den);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(decimal_bigint(s));
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    size_t frac_len = s.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+")
        throw std::invalid_argument("bad rational literal '" + s + "'");
    BigInt num = decimal_bigint(digits);
    BigInt den(1);
    for (size_t i = 0; i < frac_len; ++i) den *= 10;
    return Rational(num, den);
}

std::string to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace flecscope
