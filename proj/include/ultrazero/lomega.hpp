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
#include <compare>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ultrazero/constructions.hpp"
#include "ultrazero/error.hpp"
#include "ultrazero/metric_space.hpp"
#include "ultrazero/rational.hpp"

namespace ultrazero {

/// A point of the universal ultrametric space: a Z-indexed symbol sequence
/// that is s0 (= 0) everywhere except on a finite support. Zero symbols are
/// never stored.
class LOmegaPoint {
public:
  using Index = std::int64_t;
  using Symbol = std::uint64_t;

  LOmegaPoint() = default;
  explicit LOmegaPoint(const std::vector<std::pair<Index, Symbol>>& entries) {
    for (const auto& [i, s] : entries) set(i, s);
  }

  Symbol at(Index i) const {
    const auto it = support_.find(i);
    return it == support_.end() ? 0 : it->second;
  }

  void set(Index i, Symbol s) {
    if (s == 0)
      support_.erase(i);
    else
      support_[i] = s;
  }

  const std::map<Index, Symbol>& support() const noexcept { return support_; }

  friend bool operator==(const LOmegaPoint&, const LOmegaPoint&) = default;

private:
  std::map<Index, Symbol> support_;
};

/// 3^exponent, or zero when `exponent` is empty. Zero orders below every
/// power.
struct ThreePower {
  std::optional<std::int64_t> exponent;

  static ThreePower zero() { return {}; }
  static ThreePower power(std::int64_t e) { return {e}; }

  bool is_zero() const noexcept { return !exponent; }
  Rational to_rational() const { return exponent ? pow3(*exponent) : Rational(0); }

  friend bool operator==(const ThreePower&, const ThreePower&) = default;
  friend std::strong_ordering operator<=>(const ThreePower& a, const ThreePower& b) {
    if (!a.exponent || !b.exponent) return a.exponent.has_value() <=> b.exponent.has_value();
    return *a.exponent <=> *b.exponent;
  }
};

/// 3^-m for the least index m at which p and q differ.
inline ThreePower mu(const LOmegaPoint& p, const LOmegaPoint& q) {
  auto a = p.support().begin();
  auto b = q.support().begin();
  const auto a_end = p.support().end();
  const auto b_end = q.support().end();
  while (a != a_end || b != b_end) {
    if (b == b_end || (a != a_end && a->first < b->first)) return ThreePower::power(-a->first);
    if (a == a_end || b->first < a->first) return ThreePower::power(-b->first);
    if (a->second != b->second) return ThreePower::power(-a->first);
    ++a;
    ++b;
  }
  return ThreePower::zero();
}

/// Finds a new point z with mu(z, images[a]) = distances[a] for every a.
///
/// With d(x, A) = 3^-n and A_x the embedded points at that distance, z
/// copies the image of the lowest-index point of A_x below index n, takes a
/// fresh symbol at n (one more than any symbol A_x uses there) and s0 above.
/// The images must realize an ultrametric that stays ultrametric and
/// 3^n-valued once x is added.
inline LOmegaPoint extend_one_point(std::span<const LOmegaPoint> images,
                                    std::span<const Rational> distances) {
  if (images.size() != distances.size())
    throw Error(Errc::MalformedInput, "one distance per embedded point required");
  if (images.empty()) return {};

  std::vector<ThreePower> dx(images.size());
  for (std::size_t a = 0; a < images.size(); ++a) {
    const auto e = exact_log3(distances[a]);
    if (!e)
      throw Error(Errc::NotThreePowerValued,
                  "distance " + distances[a].str() + " is not a power of 3", {a});
    dx[a] = ThreePower::power(*e);
  }
  for (std::size_t a = 0; a < images.size(); ++a)
    for (std::size_t b = a + 1; b < images.size(); ++b) {
      const ThreePower ab = mu(images[a], images[b]);
      const ThreePower top = std::max({ab, dx[a], dx[b]});
      if ((ab == top) + (dx[a] == top) + (dx[b] == top) < 2)
        throw Error(Errc::NotUltrametric, "new point breaks the ultrametric inequality", {a, b});
    }

  const ThreePower nearest = *std::min_element(dx.begin(), dx.end());
  const LOmegaPoint::Index level = -*nearest.exponent;
  std::vector<std::size_t> closest;
  for (std::size_t a = 0; a < images.size(); ++a)
    if (dx[a] == nearest) closest.push_back(a);

  LOmegaPoint z;
  for (const auto& [i, s] : images[closest.front()].support()) {
    if (i >= level) break;
    z.set(i, s);
  }
  LOmegaPoint::Symbol fresh = 0;
  for (const std::size_t c : closest) fresh = std::max(fresh, images[c].at(level));
  ++fresh;
  z.set(level, fresh);

  for (const std::size_t c : closest)
    if (images[c].at(level) == fresh) throw std::logic_error("fresh symbol collides");
  for (std::size_t a = 0; a < images.size(); ++a)
    if (mu(z, images[a]) != dx[a]) throw std::logic_error("one-point extension is not isometric");
  return z;
}

enum class EmbeddingMode { isometric, bilipschitz3 };

inline const char* to_string(EmbeddingMode m) {
  return m == EmbeddingMode::isometric ? "isometric" : "bilipschitz3";
}

struct LOmegaEmbedding {
  FiniteMetricSpace source;
  std::vector<LOmegaPoint> images;
  EmbeddingMode mode = EmbeddingMode::isometric;
};

/// Pairwise audit of an embedding: the extreme ratios mu / d.
struct EmbeddingDigest {
  std::size_t checked_pairs = 0;
  Rational min_ratio{1};
  Rational max_ratio{1};
  bool ok = true;

  friend bool operator==(const EmbeddingDigest&, const EmbeddingDigest&) = default;
};

/// isometric: every ratio is exactly 1. bilipschitz3: 1 <= ratio < 3.
inline EmbeddingDigest verify_embedding(const LOmegaEmbedding& e) {
  EmbeddingDigest digest;
  const std::size_t n = e.source.size();
  bool first = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const Rational ratio = mu(e.images[i], e.images[j]).to_rational() / e.source(i, j);
      if (first) {
        digest.min_ratio = digest.max_ratio = ratio;
        first = false;
      }
      digest.min_ratio = std::min(digest.min_ratio, ratio);
      digest.max_ratio = std::max(digest.max_ratio, ratio);
      ++digest.checked_pairs;
    }
  if (e.mode == EmbeddingMode::isometric)
    digest.ok = digest.min_ratio == 1 && digest.max_ratio == 1;
  else
    digest.ok = digest.min_ratio >= 1 && digest.max_ratio < 3;
  return digest;
}

namespace detail {

inline void require_three_power_ultrametric(const FiniteMetricSpace& space) {
  for (std::size_t i = 0; i < space.size(); ++i)
    for (std::size_t j = i + 1; j < space.size(); ++j)
      if (!exact_log3(space(i, j)))
        throw Error(Errc::NotThreePowerValued,
                    "d(" + space.label(i) + "," + space.label(j) + ") = " + space(i, j).str(),
                    {i, j});
  const auto w = is_ultrametric(space);
  if (!w.verdict) {
    const auto [i, j, k] = *w.triangle;
    throw Error(Errc::NotUltrametric, "input is not ultrametric", {i, j, k});
  }
}

}  // namespace detail

/// Isometric embedding of a 3^n-valued ultrametric space, one point at a
/// time in the given insertion order (default: input order).
inline LOmegaEmbedding embed_3n_valued(const FiniteMetricSpace& space,
                                       std::vector<std::size_t> order = {}) {
  detail::require_three_power_ultrametric(space);
  const std::size_t n = space.size();
  if (order.empty()) {
    order.resize(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
  }
  {
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
      if (sorted.size() != n || sorted[i] != i)
        throw Error(Errc::MalformedInput, "insertion order is not a permutation");
  }

  std::vector<LOmegaPoint> placed;
  std::vector<Rational> to_new;
  placed.reserve(n);
  std::vector<LOmegaPoint> images(n);
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t x = order[step];
    to_new.clear();
    for (std::size_t prev = 0; prev < step; ++prev) to_new.push_back(space(x, order[prev]));
    placed.push_back(extend_one_point(placed, to_new));
    images[x] = placed.back();
  }

  LOmegaEmbedding e{space, std::move(images), EmbeddingMode::isometric};
  if (!verify_embedding(e).ok) throw std::logic_error("embedding failed its isometry audit");
  return e;
}

/// 3-bi-Lipschitz embedding of an ultrametric space: round distances up to
/// powers of three, then embed isometrically.
inline LOmegaEmbedding embed_ultrametric(const FiniteMetricSpace& space) {
  LOmegaEmbedding e = embed_3n_valued(quantize_3adic(space));
  e.source = space;
  e.mode = EmbeddingMode::bilipschitz3;
  if (!verify_embedding(e).ok) throw std::logic_error("embedding failed its distortion audit");
  return e;
}

}  // namespace ultrazero
