#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace rham {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational scalar. Always normalized: gcd(|num|, den) = 1, den > 0,
/// zero stored as 0/1.
using Rational = boost::multiprecision::cpp_rational;

class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

inline double to_double(const Rational& q) { return q.template convert_to<double>(); }

inline bool is_integer(const Rational& q) { return denominator(q) == 1; }

inline Rational rational_pow(const Rational& q, int e) {
    if (e < 0) throw Error("rational_pow: negative exponent");
    BigInt n = boost::multiprecision::pow(numerator(q), static_cast<unsigned>(e));
    BigInt d = boost::multiprecision::pow(denominator(q), static_cast<unsigned>(e));
    return Rational(n, d);
}

/// Square root of a non-negative rational; throws unless the result is again rational.
inline Rational exact_sqrt(const Rational& q) {
    if (q < 0) throw Error("exact_sqrt: negative argument");
    BigInt n = numerator(q), d = denominator(q);
    BigInt rn = boost::multiprecision::sqrt(n), rd = boost::multiprecision::sqrt(d);
    if (rn * rn != n || rd * rd != d)
        throw Error("exact_sqrt: " + q.str() + " is not a perfect rational square");
    return Rational(rn, rd);
}

}  // namespace rham
