// Copyright 2026 The dpleak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "dpleak/errors.hpp"

namespace dpleak {

// Arbitrary-precision exact rational. Every probability in the library is
// one of these; floating point only appears in reports.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline BigInt numerator(const Rational& q) {
  return boost::multiprecision::numerator(q);
}
inline BigInt denominator(const Rational& q) {
  return boost::multiprecision::denominator(q);
}

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) throw ArgumentError("zero denominator");
  return Rational(BigInt(num), BigInt(den));
}

inline Rational pow(const Rational& base, unsigned exponent) {
  Rational result = 1;
  Rational b = base;
  while (exponent != 0) {
    if (exponent & 1U) result *= b;
    b *= b;
    exponent >>= 1U;
  }
  return result;
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

namespace detail {

// log2 of a positive big integer, keeping the top 60 bits.
inline double log2_big(const BigInt& x) {
  const auto msb = static_cast<long>(boost::multiprecision::msb(x));
  if (msb < 60) return std::log2(x.convert_to<double>());
  const long shift = msb - 59;
  const BigInt top = x >> shift;
  return std::log2(top.convert_to<double>()) + static_cast<double>(shift);
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

inline BigInt parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw ArgumentError("malformed number '" + std::string(whole) + "'");
  BigInt value = 0;
  for (char ch : digits) {
    if (ch < '0' || ch > '9')
      throw ArgumentError("malformed number '" + std::string(whole) + "'");
    value = value * 10 + (ch - '0');
  }
  return value;
}

}  // namespace detail

// log2 of a positive rational. Works for operands far outside double range.
inline double log2(const Rational& q) {
  if (q <= 0) throw ArgumentError("log2 of a non-positive rational");
  return detail::log2_big(numerator(q)) - detail::log2_big(denominator(q));
}

// Parses "p/q", integers, and plain decimals ("0.535", "1e-3" is rejected)
// into an exact rational.
inline Rational parse_rational(std::string_view text) {
  const std::string_view s = detail::trim(text);
  if (s.empty()) throw ArgumentError("empty number");
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const Rational num = parse_rational(s.substr(0, slash));
    const Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) throw ArgumentError("zero denominator in '" + std::string(s) + "'");
    return num / den;
  }
  std::string_view body = s;
  bool negative = false;
  if (body.front() == '+' || body.front() == '-') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational value;
  if (const auto dot = body.find('.'); dot != std::string_view::npos) {
    const std::string_view int_part = body.substr(0, dot);
    const std::string_view frac_part = body.substr(dot + 1);
    if (int_part.empty() && frac_part.empty())
      throw ArgumentError("malformed number '" + std::string(s) + "'");
    const BigInt ip = int_part.empty() ? BigInt(0) : detail::parse_integer(int_part, s);
    const BigInt fp = frac_part.empty() ? BigInt(0) : detail::parse_integer(frac_part, s);
    BigInt scale = 1;
    for (std::size_t k = 0; k < frac_part.size(); ++k) scale *= 10;
    value = Rational(ip) + Rational(fp, scale);
  } else {
    value = Rational(detail::parse_integer(body, s));
  }
  return negative ? Rational(-value) : value;
}

inline std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

}  // namespace dpleak
