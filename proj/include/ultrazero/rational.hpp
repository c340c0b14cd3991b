/*
 * Copyright 2026 The ultrazero Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ultrazero {

/// Exact rational number with 64-bit numerator and denominator.
///
/// Always kept in canonical form: gcd(num, den) == 1 and den > 0.
/// Intermediate products are formed in 128 bits; a result that does not
/// fit back into 64 bits raises std::overflow_error instead of wrapping.
class Rational {
public:
  using int_type = std::int64_t;

  constexpr Rational() noexcept = default;
  constexpr Rational(int_type value) noexcept : num_(value) {}  // NOLINT(implicit)
  Rational(int_type num, int_type den) { assign(num, den); }

  constexpr int_type num() const noexcept { return num_; }
  constexpr int_type den() const noexcept { return den_; }

  constexpr bool is_integer() const noexcept { return den_ == 1; }
  constexpr int sign() const noexcept { return (num_ > 0) - (num_ < 0); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.den_ == b.den_) return from_wide(wide(a.num_) + b.num_, a.den_);
    return from_wide(wide(a.num_) * b.den_ + wide(b.num_) * a.den_,
                     wide(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    if (a.den_ == b.den_) return from_wide(wide(a.num_) - b.num_, a.den_);
    return from_wide(wide(a.num_) * b.den_ - wide(b.num_) * a.den_,
                     wide(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_wide(wide(a.num_) * b.num_, wide(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return from_wide(wide(a.num_) * b.den_, wide(a.den_) * b.num_);
  }
  Rational operator-() const { return from_wide(-wide(num_), den_); }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend constexpr bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.den_ == b.den_) return a.num_ <=> b.num_;
    return wide(a.num_) * b.den_ <=> wide(b.num_) * a.den_;
  }

  /// "p/q" or "p"; the inverse of parse().
  std::string str() const {
    std::string s = std::to_string(num_);
    if (den_ != 1) {
      s += '/';
      s += std::to_string(den_);
    }
    return s;
  }

  /// Parses an integer literal or "p/q". Non-reduced input such as "2/4"
  /// is accepted and reduced; a zero denominator is rejected.
  static Rational parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text, text));
    const int_type n = parse_int(text.substr(0, slash), text);
    const int_type d = parse_int(text.substr(slash + 1), text);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(n, d);
  }

  double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
  using wide_type = __int128;
  static constexpr wide_type wide(int_type v) noexcept { return v; }

  static wide_type wide_abs(wide_type v) noexcept { return v < 0 ? -v : v; }

  static wide_type wide_gcd(wide_type a, wide_type b) noexcept {
    a = wide_abs(a);
    b = wide_abs(b);
    while (b != 0) {
      const wide_type t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Rational from_wide(wide_type n, wide_type d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const wide_type g = wide_gcd(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr wide_type lo = -static_cast<wide_type>(std::numeric_limits<int_type>::max());
    constexpr wide_type hi = std::numeric_limits<int_type>::max();
    if (n < lo || n > hi || d > hi) throw std::overflow_error("rational overflow");
    Rational r;
    r.num_ = static_cast<int_type>(n);
    r.den_ = static_cast<int_type>(d);
    return r;
  }

  void assign(int_type n, int_type d) { *this = from_wide(n, d); }

  static int_type parse_int(std::string_view digits, std::string_view whole) {
    if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
    int_type v = 0;
    const auto* first = digits.data();
    const auto* last = digits.data() + digits.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (digits.empty() || ec != std::errc{} || ptr != last ||
        v == std::numeric_limits<int_type>::min())
      throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
    return v;
  }

  int_type num_ = 0;
  int_type den_ = 1;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

/// 3^e as an exact rational; throws std::overflow_error outside 64-bit range.
inline Rational pow3(std::int64_t e) {
  Rational p(1);
  const Rational base = e >= 0 ? Rational(3) : Rational(1, 3);
  for (std::int64_t i = 0, n = e >= 0 ? e : -e; i < n; ++i) p *= base;
  return p;
}

}  // namespace ultrazero
