#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace treetribes {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Rat rat(long long num, long long den = 1) {
  if (den == 0) throw std::invalid_argument("rat: zero denominator");
  return Rat(BigInt(num)) / Rat(BigInt(den));
}

/// 2^e as an exact rational, e of either sign.
inline Rat pow2(long e) {
  BigInt b = BigInt(1) << static_cast<unsigned>(e < 0 ? -e : e);
  return e >= 0 ? Rat(b) : Rat(1) / Rat(b);
}

inline BigInt int_pow(BigInt base, unsigned long e) {
  BigInt result(1);
  while (e) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

inline Rat rat_pow(Rat base, unsigned long e) {
  Rat result(1);
  while (e) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

inline BigInt binomial(unsigned long n, unsigned long k) {
  if (k > n) return BigInt(0);
  if (k > n - k) k = n - k;
  BigInt result(1);
  for (unsigned long i = 0; i < k; ++i) {
    result *= BigInt(n - i);
    result /= BigInt(i + 1);
  }
  return result;
}

/// Parses "num" or "num/den" with integer parts. Anything else (in
/// particular floating point) is rejected.
inline Rat parse_rational(std::string_view s) {
  auto fail = [&]() -> Rat {
    throw std::invalid_argument("expected an integer or num/den rational, got '" +
                                std::string(s) + "'");
  };
  if (s.empty()) return fail();
  auto parse_int = [&](std::string_view part) -> BigInt {
    if (part.empty()) fail();
    size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (i == part.size()) fail();
    for (; i < part.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(part[i]))) fail();
    return BigInt(std::string(part));
  };
  size_t slash = s.find('/');
  if (slash == std::string_view::npos) return Rat(parse_int(s));
  BigInt num = parse_int(s.substr(0, slash));
  BigInt den = parse_int(s.substr(slash + 1));
  if (den == 0) fail();
  return Rat(num) / Rat(den);
}

inline std::string to_fraction_string(const Rat& x) {
  return numerator(x).str() + "/" + denominator(x).str();
}

inline double to_double(const Rat& x) { return x.convert_to<double>(); }

}  // namespace treetribes
