#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace splitkit {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Exact parse of a decimal literal ("0.5", "-1.25e-3", "2.4409272E-8") or a
// fraction "p/q". No rounding: "0.1" becomes 1/10, not the nearest double.
Rational parse_decimal(std::string_view text);

// Exact inverse of parse_decimal: finite decimal string when the denominator
// is of the form 2^a*5^b, "p/q" otherwise. parse_decimal(format_rational(x)) == x.
std::string format_rational(const Rational& x);

long double to_long_double(const Rational& x);

// Exact conversion of a finite long double (binary fraction) to a rational.
Rational rational_from_long_double(long double x);

// Lossless-as-possible conversion to any binary floating type (including
// __float128): numerator and denominator are accumulated limb-wise so the
// only rounding is the final division.
template <class T>
T rational_to(const Rational& x) {
  auto fold = [](const BigInt& v) {
    T acc = 0;
    std::vector<std::uint32_t> limbs;
    BigInt m = v < 0 ? BigInt(-v) : v;
    if (m == 0) return T(0);
    export_bits(m, std::back_inserter(limbs), 32);
    for (std::uint32_t limb : limbs) acc = acc * T(4294967296.0) + T(limb);
    return v < 0 ? -acc : acc;
  };
  T num = fold(numerator(x));
  T den = fold(denominator(x));
  return num / den;
}

}  // namespace splitkit
