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
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ultrazero/error.hpp"
#include "ultrazero/metric_space.hpp"
#include "ultrazero/rational.hpp"

namespace ultrazero {

/// Total order on points: the annulus k <= d(x, base) < k + 1 with the
/// larger k comes first, ties by input index. `sequence` lists points from
/// least to greatest; `rank[x]` is the position of x in it.
struct AnnulusOrder {
  std::vector<std::size_t> sequence;
  std::vector<std::size_t> rank;
};

inline std::int64_t annulus_of(const Rational& r) {
  // floor for r >= 0
  return r.num() / r.den();
}

inline AnnulusOrder annulus_order(const PointedSpace& ps) {
  const std::size_t n = ps.space.size();
  AnnulusOrder order;
  order.sequence.resize(n);
  std::iota(order.sequence.begin(), order.sequence.end(), std::size_t{0});
  std::vector<std::int64_t> k(n);
  for (std::size_t x = 0; x < n; ++x) k[x] = annulus_of(ps.space(x, ps.base));
  std::stable_sort(order.sequence.begin(), order.sequence.end(),
                   [&](std::size_t a, std::size_t b) { return k[a] > k[b]; });
  order.rank.resize(n);
  for (std::size_t pos = 0; pos < n; ++pos) order.rank[order.sequence[pos]] = pos;
  return order;
}

struct RetractionMap {
  PointedSpace space;
  std::vector<std::size_t> subset;  // sorted, distinct
  Rational delta;
  Rational lambda;
  std::vector<std::size_t> assignment;
};

/// A delta with 1 < delta and delta^2 < lambda: the midpoint between 1 and
/// the largest dyadic r = k / 2^16 with r^2 < lambda.
inline Rational default_delta(const Rational& lambda) {
  if (lambda <= 1) throw Error(Errc::BadParameters, "lambda must exceed 1");
  constexpr std::int64_t denom = 1 << 16;
  std::int64_t lo = denom;  // r = 1, r^2 < lambda
  std::int64_t hi = denom;
  while (Rational(hi, denom) * Rational(hi, denom) < lambda) hi *= 2;
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    const Rational r(mid, denom);
    (r * r < lambda ? lo : hi) = mid;
  }
  const Rational delta = (1 + Rational(lo, denom)) / 2;
  if (!(delta > 1 && delta * delta < lambda))
    throw Error(Errc::BadParameters, "lambda too close to 1 for the default delta search");
  return delta;
}

/// Retraction of an ultrametric space onto `subset` with Lipschitz
/// constant at most lambda.
///
/// For each x the candidate set A_x = {a in A : d(x, a) <= delta * dist(x, A)}
/// is formed and x goes to the least element of A_x in the annulus order
/// around the base point. Points of A are fixed since A_a = {a}.
inline RetractionMap lipschitz_retraction(const PointedSpace& ps, std::vector<std::size_t> subset,
                                          const Rational& lambda,
                                          std::optional<Rational> delta = std::nullopt) {
  const FiniteMetricSpace& X = ps.space;
  const auto w = is_ultrametric(X);
  if (!w.verdict) {
    const auto [i, j, k] = *w.triangle;
    throw Error(Errc::NotUltrametric, "retraction requires an ultrametric space", {i, j, k});
  }
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  if (subset.empty()) throw Error(Errc::EmptySubset, "cannot retract onto the empty set");
  if (subset.back() >= X.size())
    throw Error(Errc::MalformedInput, "subset index out of range", {subset.back()});
  if (!delta) delta = default_delta(lambda);
  if (!(*delta > 1) || !(*delta * *delta < lambda))
    throw Error(Errc::BadParameters, "need delta > 1 and delta^2 < lambda, got delta=" +
                                         delta->str() + " lambda=" + lambda.str());

  const AnnulusOrder order = annulus_order(ps);
  std::vector<std::size_t> assignment(X.size());
  for (std::size_t x = 0; x < X.size(); ++x) {
    Rational nearest = X(x, subset.front());
    for (const std::size_t a : subset) nearest = std::min(nearest, X(x, a));
    const Rational reach = *delta * nearest;
    std::optional<std::size_t> pick;
    for (const std::size_t a : subset)
      if (X(x, a) <= reach && (!pick || order.rank[a] < order.rank[*pick])) pick = a;
    assignment[x] = *pick;
  }
  return RetractionMap{ps, std::move(subset), *delta, lambda, std::move(assignment)};
}

/// Least Lipschitz constant of a map between finite spaces:
/// max over x != x' of d_T(f x, f x') / d_S(x, x'); 0 for constant maps.
inline Rational audit_lipschitz(const FiniteMetricSpace& source, const FiniteMetricSpace& target,
                                const std::vector<std::size_t>& assignment) {
  if (assignment.size() != source.size())
    throw Error(Errc::MalformedInput, "assignment must cover every source point");
  for (const std::size_t y : assignment)
    if (y >= target.size()) throw Error(Errc::MalformedInput, "assignment leaves the target", {y});
  Rational worst;
  for (std::size_t i = 0; i < source.size(); ++i)
    for (std::size_t j = i + 1; j < source.size(); ++j)
      worst = std::max(worst, target(assignment[i], assignment[j]) / source(i, j));
  return worst;
}

inline Rational audit_lipschitz(const RetractionMap& r) {
  return audit_lipschitz(r.space.space, r.space.space, r.assignment);
}

}  // namespace ultrazero
