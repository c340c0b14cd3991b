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
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ultrazero/error.hpp"
#include "ultrazero/rational.hpp"

namespace ultrazero {

using Matrix = std::vector<std::vector<Rational>>;

class FiniteMetricSpace;

namespace detail {
FiniteMetricSpace make_space_unchecked(std::vector<std::string> labels,
                                       std::vector<Rational> dist);
}  // namespace detail

/// Labeled points with an exact, validated distance matrix.
///
/// Instances only come out of validate_metric() or out of constructions
/// that preserve the metric axioms, so every FiniteMetricSpace in hand is
/// a metric space.
class FiniteMetricSpace {
public:
  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

  const Rational& operator()(std::size_t i, std::size_t j) const noexcept {
    return dist_[i * labels_.size() + j];
  }

  /// Row-major n*n distance storage.
  std::span<const Rational> raw() const noexcept { return dist_; }

  Matrix matrix() const {
    Matrix m(size(), std::vector<Rational>(size()));
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j) m[i][j] = (*this)(i, j);
    return m;
  }

  std::optional<std::size_t> index_of(std::string_view label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
  }

  Rational diameter() const {
    Rational d;
    for (const auto& v : dist_) d = std::max(d, v);
    return d;
  }

  /// Sorted distinct positive distances.
  std::vector<Rational> distinct_distances() const {
    std::vector<Rational> out;
    out.reserve(size() * (size() > 0 ? size() - 1 : 0) / 2);
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = i + 1; j < size(); ++j) out.push_back((*this)(i, j));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  friend bool operator==(const FiniteMetricSpace&, const FiniteMetricSpace&) = default;

private:
  friend FiniteMetricSpace detail::make_space_unchecked(std::vector<std::string>,
                                                        std::vector<Rational>);
  FiniteMetricSpace() = default;

  std::vector<std::string> labels_;
  std::vector<Rational> dist_;
};

/// A metric space with a distinguished base point.
struct PointedSpace {
  FiniteMetricSpace space;
  std::size_t base = 0;

  PointedSpace(FiniteMetricSpace s, std::size_t b) : space(std::move(s)), base(b) {
    if (base >= space.size())
      throw Error(Errc::MalformedInput, "base point index out of range", {base});
  }

  friend bool operator==(const PointedSpace&, const PointedSpace&) = default;
};

namespace detail {

inline FiniteMetricSpace make_space_unchecked(std::vector<std::string> labels,
                                              std::vector<Rational> dist) {
  FiniteMetricSpace s;
  s.labels_ = std::move(labels);
  s.dist_ = std::move(dist);
  return s;
}

/// The distance matrix rescaled to integers over a common denominator, or
/// nullopt if that does not fit comfortably into 62 bits. Sums of two
/// entries never overflow.
inline std::optional<std::vector<std::int64_t>> common_scale(std::span<const Rational> d) {
  constexpr __int128 limit = static_cast<__int128>(1) << 61;
  __int128 lcm = 1;
  for (const auto& r : d) {
    if (lcm % r.den() == 0) continue;
    lcm = lcm / std::gcd(static_cast<std::int64_t>(lcm), r.den()) * r.den();
    if (lcm > limit) return std::nullopt;
  }
  std::vector<std::int64_t> out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const __int128 v = static_cast<__int128>(d[i].num()) * (lcm / d[i].den());
    if (v > limit || v < -limit) return std::nullopt;
    out[i] = static_cast<std::int64_t>(v);
  }
  return out;
}

/// First triangle (i, j, k) with d(i,k) > d(i,j) + d(j,k), scanning
/// unordered triples lexicographically.
template <typename T>
std::optional<std::array<std::size_t, 3>> find_triangle_violation(std::span<const T> d,
                                                                  std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const T& a = d[i * n + j];
      for (std::size_t k = j + 1; k < n; ++k) {
        const T& b = d[j * n + k];
        const T& c = d[i * n + k];
        if (c > a + b) return std::array{i, j, k};
        if (a > b + c) return std::array{i, k, j};
        if (b > a + c) return std::array{j, i, k};
      }
    }
  return std::nullopt;
}

inline std::optional<std::array<std::size_t, 3>> find_triangle_violation(
    std::span<const Rational> d, std::size_t n) {
  if (auto scaled = common_scale(d))
    return find_triangle_violation<std::int64_t>(std::span<const std::int64_t>(*scaled), n);
  return find_triangle_violation<Rational>(d, n);
}

/// Dense ranks of the matrix entries (equal values share a rank).
inline std::vector<std::uint32_t> rank_matrix(std::span<const Rational> d) {
  std::vector<Rational> values(d.begin(), d.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<std::uint32_t> ranks(d.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    ranks[i] = static_cast<std::uint32_t>(
        std::lower_bound(values.begin(), values.end(), d[i]) - values.begin());
  return ranks;
}

}  // namespace detail

/// Checks the metric axioms exhaustively and returns the validated space.
/// Throws Error naming the first violated axiom and its witnessing indices:
/// DuplicateLabel(i, j), NonZeroDiagonal(i), NonSymmetric(i, j),
/// NegativeOrZeroOffDiagonal(i, j), TriangleViolation(i, j, k) meaning
/// d(i,k) > d(i,j) + d(j,k).
inline FiniteMetricSpace validate_metric(std::vector<std::string> labels, const Matrix& matrix) {
  const std::size_t n = labels.size();
  if (matrix.size() != n)
    throw Error(Errc::MalformedInput, "matrix has " + std::to_string(matrix.size()) +
                                          " rows for " + std::to_string(n) + " labels");
  for (std::size_t i = 0; i < n; ++i)
    if (matrix[i].size() != n)
      throw Error(Errc::MalformedInput, "row " + std::to_string(i) + " has wrong length", {i});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (labels[i] == labels[j])
        throw Error(Errc::DuplicateLabel, "label '" + labels[i] + "' repeated", {i, j});

  for (std::size_t i = 0; i < n; ++i)
    if (matrix[i][i] != 0)
      throw Error(Errc::NonZeroDiagonal, "d(" + labels[i] + "," + labels[i] + ") != 0", {i});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (matrix[i][j] != matrix[j][i])
        throw Error(Errc::NonSymmetric, "d(" + labels[i] + "," + labels[j] + ") != d(" +
                                            labels[j] + "," + labels[i] + ")",
                    {i, j});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (matrix[i][j] <= 0)
        throw Error(Errc::NegativeOrZeroOffDiagonal,
                    "d(" + labels[i] + "," + labels[j] + ") = " + matrix[i][j].str(), {i, j});

  std::vector<Rational> flat;
  flat.reserve(n * n);
  for (const auto& row : matrix) flat.insert(flat.end(), row.begin(), row.end());
  if (auto t = detail::find_triangle_violation(std::span<const Rational>(flat), n)) {
    const auto [i, j, k] = *t;
    throw Error(Errc::TriangleViolation,
                "d(" + labels[i] + "," + labels[k] + ") > d(" + labels[i] + "," + labels[j] +
                    ") + d(" + labels[j] + "," + labels[k] + ")",
                {i, j, k});
  }
  return detail::make_space_unchecked(std::move(labels), std::move(flat));
}

/// Outcome of the ultrametricity scan. On failure `triangle` holds point
/// indices i < j < k and `sides` their side lengths sorted as a <= b < c.
struct UltraWitness {
  bool verdict = true;
  std::optional<std::array<std::size_t, 3>> triangle;
  std::optional<std::array<Rational, 3>> sides;

  friend bool operator==(const UltraWitness&, const UltraWitness&) = default;
};

/// Verdict is true iff the two largest sides of every triangle agree.
inline UltraWitness is_ultrametric(const FiniteMetricSpace& space) {
  const std::size_t n = space.size();
  const auto rank = detail::rank_matrix(space.raw());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto a = rank[i * n + j];
      for (std::size_t k = j + 1; k < n; ++k) {
        const auto b = rank[j * n + k];
        const auto c = rank[i * n + k];
        const auto top = std::max({a, b, c});
        const int hits = (a == top) + (b == top) + (c == top);
        if (hits >= 2) continue;
        std::array<Rational, 3> sides{space(i, j), space(j, k), space(i, k)};
        std::sort(sides.begin(), sides.end());
        return UltraWitness{false, std::array{i, j, k}, sides};
      }
    }
  return {};
}

}  // namespace ultrazero
