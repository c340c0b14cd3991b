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

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ultrazero/error.hpp"
#include "ultrazero/metric_space.hpp"
#include "ultrazero/rational.hpp"

namespace ultrazero {

/// One block Z_order^multiplicity of a direct sum; an empty multiplicity
/// means countably many copies.
struct Summand {
  std::uint64_t order = 2;
  std::optional<std::uint64_t> multiplicity = 1;

  friend bool operator==(const Summand&, const Summand&) = default;
};

/// A direct sum of cyclic groups, presented as blocks. The filtration uses
/// the expanded order sequence a_1, a_2, ...: blocks in listed order up to
/// the first infinite block, after which the remaining blocks are visited
/// round-robin (finite ones until they run out).
class CyclicSumSpec {
public:
  CyclicSumSpec() = default;
  explicit CyclicSumSpec(std::vector<Summand> summands) : summands_(std::move(summands)) {
    std::set<std::uint64_t> infinite_orders;
    for (std::size_t i = 0; i < summands_.size(); ++i) {
      const Summand& s = summands_[i];
      if (s.order < 2) throw Error(Errc::MalformedInput, "cyclic order must be at least 2", {i});
      if (s.multiplicity && *s.multiplicity == 0)
        throw Error(Errc::MalformedInput, "multiplicity must be positive", {i});
      if (!s.multiplicity && !infinite_orders.insert(s.order).second)
        throw Error(Errc::MalformedInput,
                    "order " + std::to_string(s.order) + " has two infinite blocks", {i});
    }
  }

  /// Finite spec with one copy of each listed order.
  static CyclicSumSpec of_orders(const std::vector<std::uint64_t>& orders) {
    std::vector<Summand> s;
    for (const auto a : orders) s.push_back({a, 1});
    return CyclicSumSpec(std::move(s));
  }

  const std::vector<Summand>& summands() const noexcept { return summands_; }

  bool is_finite() const {
    return std::all_of(summands_.begin(), summands_.end(),
                       [](const Summand& s) { return s.multiplicity.has_value(); });
  }

  /// Number of cyclic factors, or nullopt when infinite.
  std::optional<std::uint64_t> length() const {
    std::uint64_t total = 0;
    for (const auto& s : summands_) {
      if (!s.multiplicity) return std::nullopt;
      total += *s.multiplicity;
    }
    return total;
  }

  /// a_1, ..., a_r; RadiusExceedsSpec if the group has fewer factors.
  std::vector<std::uint64_t> orders(std::size_t r) const {
    std::vector<std::uint64_t> out;
    out.reserve(r);
    std::size_t block = 0;
    for (; block < summands_.size() && summands_[block].multiplicity; ++block)
      for (std::uint64_t c = 0; c < *summands_[block].multiplicity && out.size() < r; ++c)
        out.push_back(summands_[block].order);
    if (block < summands_.size()) {
      std::vector<std::pair<std::uint64_t, std::optional<std::uint64_t>>> tail;
      for (std::size_t b = block; b < summands_.size(); ++b)
        tail.emplace_back(summands_[b].order, summands_[b].multiplicity);
      while (out.size() < r)
        for (auto& [order, left] : tail) {
          if (out.size() == r) break;
          if (left && *left == 0) continue;
          out.push_back(order);
          if (left) --*left;
        }
    }
    if (out.size() < r)
      throw Error(Errc::RadiusExceedsSpec, "group has only " + std::to_string(out.size()) +
                                               " cyclic factors, depth " + std::to_string(r) +
                                               " requested");
    return out;
  }

  friend bool operator==(const CyclicSumSpec&, const CyclicSumSpec&) = default;

private:
  std::vector<Summand> summands_;
};

/// p_1 p_2 ... p_n with p_i in Z_{a_i}; trailing zeros are trimmed so that
/// |p| = n is the index of the last nonzero digit. The identity is empty.
class GroupElement {
public:
  GroupElement() = default;
  explicit GroupElement(std::vector<std::uint64_t> digits) : digits_(std::move(digits)) {
    while (!digits_.empty() && digits_.back() == 0) digits_.pop_back();
  }

  const std::vector<std::uint64_t>& digits() const noexcept { return digits_; }
  std::size_t length() const noexcept { return digits_.size(); }
  std::uint64_t digit(std::size_t i) const { return i < digits_.size() ? digits_[i] : 0; }

  /// "e" for the identity, otherwise digits joined by '.'.
  std::string label() const {
    if (digits_.empty()) return "e";
    std::string s;
    for (std::size_t i = 0; i < digits_.size(); ++i) {
      if (i) s += '.';
      s += std::to_string(digits_[i]);
    }
    return s;
  }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;

private:
  std::vector<std::uint64_t> digits_;
};

inline void check_digits(const CyclicSumSpec& spec, const GroupElement& p) {
  if (p.length() == 0) return;
  const auto len = spec.length();
  if (len && p.length() > *len)
    throw Error(Errc::DigitOutOfRange, "element longer than the group", {p.length()});
  const auto a = spec.orders(p.length());
  for (std::size_t i = 0; i < p.length(); ++i)
    if (p.digit(i) >= a[i])
      throw Error(Errc::DigitOutOfRange,
                  "digit " + std::to_string(i + 1) + " of " + p.label() + " exceeds Z_" +
                      std::to_string(a[i]),
                  {i + 1});
}

/// Filtration metric: the largest 1-based index where p and q differ, 0 when
/// p = q. Equals max(|p|, |q|) when the lengths differ.
inline std::uint64_t d_filtration(const CyclicSumSpec& spec, const GroupElement& p,
                                  const GroupElement& q) {
  check_digits(spec, p);
  check_digits(spec, q);
  for (std::size_t i = std::max(p.length(), q.length()); i > 0; --i)
    if (p.digit(i - 1) != q.digit(i - 1)) return i;
  return 0;
}

/// Component-wise sum mod a_i.
inline GroupElement group_add(const CyclicSumSpec& spec, const GroupElement& p,
                              const GroupElement& q) {
  const std::size_t n = std::max(p.length(), q.length());
  const auto a = spec.orders(n);
  std::vector<std::uint64_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (p.digit(i) + q.digit(i)) % a[i];
  return GroupElement(std::move(out));
}

inline constexpr std::size_t kMaxBallPoints = 2048;

/// Elements of G_r = Z_{a_1} + ... + Z_{a_r}, digit 1 varying fastest.
inline std::vector<GroupElement> ball_elements(const CyclicSumSpec& spec, std::size_t r) {
  if (r < 1) throw Error(Errc::BadParameters, "depth must be at least 1");
  const auto a = spec.orders(r);
  std::uint64_t count = 1;
  for (const auto ai : a) {
    count *= ai;
    if (count > kMaxBallPoints)
      throw Error(Errc::BadParameters, "ball has more than " + std::to_string(kMaxBallPoints) +
                                           " points");
  }
  std::vector<GroupElement> out;
  out.reserve(count);
  std::vector<std::uint64_t> digits(r, 0);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    out.emplace_back(digits);
    for (std::size_t i = 0; i < r; ++i) {
      if (++digits[i] < a[i]) break;
      digits[i] = 0;
    }
  }
  return out;
}

/// The finite subgroup G_r as a metric space under d_filtration.
inline FiniteMetricSpace group_ball(const CyclicSumSpec& spec, std::size_t r) {
  const auto elems = ball_elements(spec, r);
  const std::size_t n = elems.size();
  std::vector<std::string> labels;
  labels.reserve(n);
  for (const auto& e : elems) labels.push_back(e.label());
  std::vector<Rational> dist(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      dist[i * n + j] = dist[j * n + i] =
          Rational(static_cast<std::int64_t>(d_filtration(spec, elems[i], elems[j])));
  return detail::make_space_unchecked(std::move(labels), std::move(dist));
}

struct GroupEmbedding {
  FiniteMetricSpace source;
  FiniteMetricSpace target;
  std::vector<std::size_t> assignment;
  bool bijective = false;
};

/// Isometric injection G_r -> H_r built one filtration level at a time: the
/// coset representatives 0..a_i-1 of level i go to 0..a_i-1 in H, so the
/// map acts digit-wise and fixes the identity. Needs a_i(G) <= a_i(H).
inline GroupEmbedding group_isometric_embedding(const CyclicSumSpec& g, const CyclicSumSpec& h,
                                                std::size_t r) {
  const auto a = g.orders(r);
  const auto b = h.orders(r);
  for (std::size_t i = 0; i < r; ++i)
    if (a[i] > b[i])
      throw Error(Errc::IndexConditionFails,
                  "level " + std::to_string(i + 1) + ": index " + std::to_string(a[i]) + " > " +
                      std::to_string(b[i]),
                  {i + 1});

  const auto source_elems = ball_elements(g, r);
  GroupEmbedding out{group_ball(g, r), group_ball(h, r), {}, a == b};
  out.assignment.reserve(source_elems.size());
  for (const auto& e : source_elems) {
    std::uint64_t idx = 0;
    std::uint64_t stride = 1;
    for (std::size_t i = 0; i < r; ++i) {
      idx += e.digit(i) * stride;
      stride *= b[i];
    }
    out.assignment.push_back(static_cast<std::size_t>(idx));
  }
  return out;
}

/// Returns the first pair (i, j) whose distance the map does not preserve.
inline std::optional<std::pair<std::size_t, std::size_t>> isometry_defect(
    const FiniteMetricSpace& source, const FiniteMetricSpace& target,
    const std::vector<std::size_t>& assignment) {
  for (std::size_t i = 0; i < source.size(); ++i)
    for (std::size_t j = i + 1; j < source.size(); ++j)
      if (target(assignment[i], assignment[j]) != source(i, j)) return std::pair{i, j};
  return std::nullopt;
}

/// Reads the index sequence a_i = |B(e, i)| / |B(e, i - 1)| off the closed
/// balls around `identity` in a filtration-metric space.
inline CyclicSumSpec spec_from_filtration(const FiniteMetricSpace& space, std::size_t identity) {
  const auto levels = space.distinct_distances();
  std::vector<std::uint64_t> orders;
  std::uint64_t previous = 1;
  for (const auto& level : levels) {
    std::uint64_t count = 0;
    for (std::size_t x = 0; x < space.size(); ++x)
      if (space(identity, x) <= level) ++count;
    if (count % previous != 0)
      throw Error(Errc::MalformedInput, "balls around the identity are not nested subgroups");
    orders.push_back(count / previous);
    previous = count;
  }
  return CyclicSumSpec::of_orders(orders);
}

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

inline std::vector<std::uint64_t> prime_divisors(std::uint64_t a) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= a; ++d)
    if (a % d == 0) {
      out.push_back(d);
      while (a % d == 0) a /= d;
    }
  if (a > 1) out.push_back(a);
  return out;
}

inline std::uint64_t p_adic_valuation(std::uint64_t a, std::uint64_t p) {
  std::uint64_t k = 0;
  while (a % p == 0) {
    a /= p;
    ++k;
  }
  return k;
}

/// p^exponent, or infinity when `exponent` is empty.
struct SylowNumber {
  std::uint64_t prime = 2;
  std::optional<std::uint64_t> exponent;

  bool is_infinite() const noexcept { return !exponent; }

  /// "inf" or the decimal value of p^k ("p^k" if it does not fit 64 bits).
  std::string str() const {
    if (!exponent) return "inf";
    std::uint64_t v = 1;
    for (std::uint64_t i = 0; i < *exponent; ++i) {
      if (v > UINT64_MAX / prime) return std::to_string(prime) + "^" + std::to_string(*exponent);
      v *= prime;
    }
    return std::to_string(v);
  }

  friend bool operator==(const SylowNumber&, const SylowNumber&) = default;
};

/// Order of the p-torsion subgroup: the p-part of the product of all
/// orders, infinite once infinitely many orders are divisible by p.
inline SylowNumber sylow_number(const CyclicSumSpec& spec, std::uint64_t p) {
  if (!is_prime(p)) throw Error(Errc::NotPrime, std::to_string(p) + " is not prime");
  SylowNumber out{p, 0};
  for (const auto& s : spec.summands()) {
    const std::uint64_t v = p_adic_valuation(s.order, p);
    if (v == 0) continue;
    if (!s.multiplicity) return SylowNumber{p, std::nullopt};
    *out.exponent += v * *s.multiplicity;
  }
  return out;
}

struct SylowRow {
  std::uint64_t prime;
  SylowNumber g;
  SylowNumber h;

  friend bool operator==(const SylowRow&, const SylowRow&) = default;
};

struct ProtasovReport {
  bool equivalent = true;
  std::vector<SylowRow> table;
  std::optional<std::uint64_t> witness;  // first prime whose Sylow numbers differ

  friend bool operator==(const ProtasovReport&, const ProtasovReport&) = default;
};

/// Bi-uniform equivalence of two direct sums: Sylow numbers must agree at
/// every prime. Only primes dividing some listed order can differ.
inline ProtasovReport protasov_equivalent(const CyclicSumSpec& g, const CyclicSumSpec& h) {
  std::set<std::uint64_t> primes;
  for (const auto* spec : {&g, &h})
    for (const auto& s : spec->summands())
      for (const auto p : prime_divisors(s.order)) primes.insert(p);
  ProtasovReport report;
  for (const auto p : primes) {
    SylowRow row{p, sylow_number(g, p), sylow_number(h, p)};
    if (row.g != row.h && !report.witness) {
      report.equivalent = false;
      report.witness = p;
    }
    report.table.push_back(row);
  }
  return report;
}

inline constexpr std::size_t kMaxM0Length = 40;

/// f(p) = sum 2 p_i 3^(i-1) for a binary digit string.
inline std::uint64_t m0_encode(const GroupElement& p) {
  if (p.length() > kMaxM0Length)
    throw Error(Errc::BadParameters, "element too long for a 64-bit image");
  std::uint64_t value = 0;
  std::uint64_t power = 1;
  for (std::size_t i = 0; i < p.length(); ++i) {
    if (p.digit(i) > 1) throw Error(Errc::DigitOutOfRange, "binary digit expected", {i + 1});
    value += 2 * p.digit(i) * power;
    if (i + 1 < p.length()) power *= 3;
  }
  return value;
}

inline std::uint64_t m0_encode(const CyclicSumSpec& spec, const GroupElement& p) {
  for (const auto& s : spec.summands())
    if (s.order != 2) throw Error(Errc::NotBinarySpec, "every summand must be Z_2");
  check_digits(spec, p);
  return m0_encode(p);
}

/// True iff every ternary digit of v is 0 or 2.
inline bool ternary_digits_even(std::uint64_t v) {
  for (; v > 0; v /= 3)
    if (v % 3 == 1) return false;
  return true;
}

struct M0PairWitness {
  GroupElement p;
  GroupElement q;
  std::uint64_t distance = 0;  // d_filtration
  std::uint64_t gap = 0;       // |f(p) - f(q)|

  friend bool operator==(const M0PairWitness&, const M0PairWitness&) = default;
};

/// Exhaustive distortion audit of f over all binary strings of length at
/// most max_len. Ratios are |f(p) - f(q)| / 3^n with n = d_filtration(p, q).
///
/// sharp bound:     3^(n-1) < |f(p) - f(q)| < 3^n
/// published bound: 3^n <= |f(p) - f(q)| <= 3 * 3^n (fails; kept for reference)
struct M0Report {
  std::size_t max_len = 0;
  std::size_t pairs = 0;
  bool digits_ok = true;
  bool injective = true;
  bool sharp_bound_holds = true;
  bool published_bound_holds = true;
  Rational min_ratio;
  Rational max_ratio;
  std::optional<M0PairWitness> sharp_violation;
  std::optional<M0PairWitness> published_violation;
  /// The pair 101 / 11 evaluated on its own, when max_len >= 3.
  std::optional<M0PairWitness> recorded_witness;
  bool recorded_witness_published_holds = true;

  bool pass() const noexcept { return digits_ok && injective && sharp_bound_holds; }

  friend bool operator==(const M0Report&, const M0Report&) = default;
};

inline constexpr std::size_t kMaxM0CheckLength = 20;

inline M0Report m0_distortion_check(std::size_t max_len) {
  if (max_len < 1 || max_len > kMaxM0CheckLength)
    throw Error(Errc::BadParameters, "max_len must be in [1, 20]");
  M0Report report;
  report.max_len = max_len;
  const std::uint64_t count = std::uint64_t{1} << max_len;

  auto element = [](std::uint64_t mask) {
    std::vector<std::uint64_t> d;
    for (; mask; mask >>= 1) d.push_back(mask & 1);
    return GroupElement(std::move(d));
  };

  std::vector<std::uint64_t> image(count);
  std::vector<std::uint64_t> power(max_len + 1, 1);
  for (std::size_t i = 1; i <= max_len; ++i) power[i] = power[i - 1] * 3;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < max_len; ++i)
      if (mask >> i & 1) v += 2 * power[i];
    image[mask] = v;
    if (!ternary_digits_even(v)) report.digits_ok = false;
  }
  {
    auto sorted = image;
    std::sort(sorted.begin(), sorted.end());
    report.injective = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  }

  bool first = true;
  for (std::uint64_t a = 0; a < count; ++a)
    for (std::uint64_t b = a + 1; b < count; ++b) {
      ++report.pairs;
      const std::uint64_t n = 64 - static_cast<std::uint64_t>(__builtin_clzll(a ^ b));
      const std::uint64_t gap = image[a] > image[b] ? image[a] - image[b] : image[b] - image[a];
      const std::uint64_t upper = power[n];
      const std::uint64_t lower = power[n - 1];
      const bool sharp = lower < gap && gap < upper;
      const bool published = upper <= gap && gap <= 3 * upper;
      if (!sharp && !report.sharp_violation) {
        report.sharp_bound_holds = false;
        report.sharp_violation = M0PairWitness{element(a), element(b), n, gap};
      }
      if (!published && !report.published_violation) {
        report.published_bound_holds = false;
        report.published_violation = M0PairWitness{element(a), element(b), n, gap};
      }
      const Rational ratio(static_cast<std::int64_t>(gap), static_cast<std::int64_t>(upper));
      if (first || ratio < report.min_ratio) report.min_ratio = ratio;
      if (first || ratio > report.max_ratio) report.max_ratio = ratio;
      first = false;
    }

  if (max_len >= 3) {
    const GroupElement p({1, 0, 1});
    const GroupElement q({1, 1});
    const std::uint64_t fp = m0_encode(p);
    const std::uint64_t fq = m0_encode(q);
    const std::uint64_t gap = fp > fq ? fp - fq : fq - fp;
    std::uint64_t n = 0;
    for (std::size_t i = std::max(p.length(), q.length()); i > 0 && n == 0; --i)
      if (p.digit(i - 1) != q.digit(i - 1)) n = i;
    report.recorded_witness = M0PairWitness{p, q, n, gap};
    report.recorded_witness_published_holds = power[n] <= gap && gap <= 3 * power[n];
  }
  return report;
}

}  // namespace ultrazero
