#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <vector>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace formlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using RatVector = std::vector<Rational>;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Exact conversion: every finite double is a dyadic rational.
inline Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("rational_from_double: non-finite value");
    if (x == 0.0) return Rational(0);
    int exp = 0;
    double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [0.5, 1)
    // 53 bits of mantissa
    auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
    exp -= 53;
    Rational r(mant);
    if (exp > 0) {
        r *= Rational(BigInt(1) << exp);
    } else if (exp < 0) {
        r /= Rational(BigInt(1) << (-exp));
    }
    return r;
}

/// If r is the square of a rational, store it in `root` and return true.
inline bool exact_sqrt(const Rational& r, Rational& root) {
    if (r < 0) return false;
    if (r == 0) {
        root = 0;
        return true;
    }
    const BigInt num = numerator(r);
    const BigInt den = denominator(r);
    const BigInt sn = sqrt(num);
    const BigInt sd = sqrt(den);
    if (sn * sn != num || sd * sd != den) return false;
    root = Rational(sn, sd);
    return true;
}

inline std::string to_string(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

/// Accepts "-3", "5/2" and decimal strings like "0.25" (read exactly).
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational");
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(BigInt(text));
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const auto frac_len = text.size() - dot - 1;
    if (frac_len == 0 || digits.empty()) throw std::invalid_argument("malformed decimal");
    BigInt den = 1;
    for (size_t i = 0; i < frac_len; ++i) den *= 10;
    return Rational(BigInt(digits), den);
}

}  // namespace formlab
