#include "splitkit/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "splitkit/errors.hpp"

namespace splitkit {

namespace {

BigInt pow10(unsigned k) {
  BigInt r = 1;
  for (unsigned i = 0; i < k; ++i) r *= 10;
  return r;
}

Rational parse_plain_decimal(std::string_view s) {
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    neg = s[i] == '-';
    ++i;
  }
  BigInt mantissa = 0;
  long frac_digits = 0;
  long exponent = 0;
  bool any_digit = false;
  bool seen_point = false;
  for (; i < s.size(); ++i) {
    char ch = s[i];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      mantissa = mantissa * 10 + (ch - '0');
      if (seen_point) ++frac_digits;
      any_digit = true;
    } else if (ch == '.' && !seen_point) {
      seen_point = true;
    } else if ((ch == 'e' || ch == 'E') && any_digit) {
      std::string tail(s.substr(i + 1));
      if (tail.empty()) throw FormatError("empty exponent in '" + std::string(s) + "'");
      char* end = nullptr;
      exponent = std::strtol(tail.c_str(), &end, 10);
      if (end == tail.c_str() || *end != '\0')
        throw FormatError("bad exponent in '" + std::string(s) + "'");
      i = s.size() - 1;
    } else {
      throw FormatError("bad decimal literal '" + std::string(s) + "'");
    }
  }
  if (!any_digit) throw FormatError("bad decimal literal '" + std::string(s) + "'");
  long shift = exponent - frac_digits;
  Rational r(mantissa);
  if (shift > 0)
    r *= Rational(pow10(static_cast<unsigned>(shift)));
  else if (shift < 0)
    r /= Rational(pow10(static_cast<unsigned>(-shift)));
  return neg ? -r : r;
}

}  // namespace

Rational parse_decimal(std::string_view text) {
  std::size_t a = text.find_first_not_of(" \t");
  std::size_t b = text.find_last_not_of(" \t");
  if (a == std::string_view::npos) throw FormatError("empty numeric literal");
  std::string_view s = text.substr(a, b - a + 1);
  if (std::size_t slash = s.find('/'); slash != std::string_view::npos) {
    Rational num = parse_plain_decimal(s.substr(0, slash));
    Rational den = parse_plain_decimal(s.substr(slash + 1));
    if (den == 0) throw FormatError("zero denominator in '" + std::string(s) + "'");
    return num / den;
  }
  return parse_plain_decimal(s);
}

std::string format_rational(const Rational& x) {
  BigInt num = numerator(x);
  BigInt den = denominator(x);
  bool neg = num < 0;
  if (neg) num = -num;
  // Count the factors of 2 and 5 in the denominator.
  BigInt d = den;
  unsigned twos = 0, fives = 0;
  while (d % 2 == 0) { d /= 2; ++twos; }
  while (d % 5 == 0) { d /= 5; ++fives; }
  if (d != 1) {
    std::string s = num.str() + "/" + den.str();
    return neg ? "-" + s : s;
  }
  unsigned k = twos > fives ? twos : fives;
  BigInt scaled = num * (pow10(k) / den);
  std::string digits = scaled.str();
  std::string out;
  if (k == 0) {
    out = digits;
  } else {
    if (digits.size() <= k) digits.insert(0, k + 1 - digits.size(), '0');
    out = digits.substr(0, digits.size() - k) + "." + digits.substr(digits.size() - k);
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
  }
  return neg ? "-" + out : out;
}

long double to_long_double(const Rational& x) {
  return rational_to<long double>(x);
}

Rational rational_from_long_double(long double x) {
  if (!std::isfinite(x)) throw ValidationError("non-finite value cannot become a rational");
  if (x == 0.0L) return Rational(0);
  int exp = 0;
  long double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [0.5, 1)
  // 64 mantissa bits cover every x86 long double exactly.
  long double scaled = std::ldexp(m, 64);
  BigInt mant(static_cast<long long>(scaled / 4294967296.0L));
  mant <<= 32;
  mant += static_cast<long long>(std::fmod(scaled, 4294967296.0L));
  Rational r(mant);
  int shift = exp - 64;
  if (shift > 0)
    r *= Rational(BigInt(1) << shift);
  else if (shift < 0)
    r /= Rational(BigInt(1) << -shift);
  return r;
}

}  // namespace splitkit
