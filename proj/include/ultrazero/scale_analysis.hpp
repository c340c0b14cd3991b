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
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ultrazero/disjoint_sets.hpp"
#include "ultrazero/error.hpp"
#include "ultrazero/metric_space.hpp"
#include "ultrazero/rational.hpp"

namespace ultrazero {

/// The S-components of a space: classes of the transitive closure of
/// {d <= S}. Blocks are ordered by smallest member, members ascending.
struct Partition {
  Rational scale;
  std::vector<std::vector<std::size_t>> blocks;

  friend bool operator==(const Partition&, const Partition&) = default;
};

inline Partition s_components(const FiniteMetricSpace& space, const Rational& scale) {
  if (scale <= 0) throw Error(Errc::BadParameters, "scale must be positive");
  const std::size_t n = space.size();
  DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (space(i, j) <= scale) sets.unite(i, j);
  return Partition{scale, sets.classes()};
}

struct WeightedEdge {
  std::size_t i = 0;
  std::size_t j = 0;
  Rational weight;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

/// rho is the largest ultrametric below d; spanning_edges is the minimum
/// spanning tree it was read from, in the order Prim's algorithm added them.
struct SubdominantResult {
  FiniteMetricSpace rho;
  std::vector<WeightedEdge> spanning_edges;
};

namespace detail {

// Dense Prim, O(n^2). Ties go to the lowest vertex index.
inline std::vector<WeightedEdge> minimum_spanning_tree(const FiniteMetricSpace& space) {
  const std::size_t n = space.size();
  std::vector<WeightedEdge> edges;
  if (n < 2) return edges;
  edges.reserve(n - 1);
  std::vector<bool> in_tree(n, false);
  std::vector<std::size_t> link(n, 0);
  in_tree[0] = true;
  for (std::size_t step = 1; step < n; ++step) {
    std::size_t best = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      if (best == n || space(v, link[v]) < space(best, link[best])) best = v;
    }
    in_tree[best] = true;
    edges.push_back({link[best], best, space(best, link[best])});
    for (std::size_t v = 0; v < n; ++v)
      if (!in_tree[v] && space(v, best) < space(v, link[v])) link[v] = best;
  }
  return edges;
}

}  // namespace detail

/// rho(x, z) = min over chains x = x0, ..., xk = z of the largest link,
/// read off as the bottleneck edge on the tree path of a minimum spanning
/// tree.
inline SubdominantResult subdominant_ultrametric(const FiniteMetricSpace& space) {
  const std::size_t n = space.size();
  auto edges = detail::minimum_spanning_tree(space);

  std::vector<std::vector<std::pair<std::size_t, Rational>>> adj(n);
  for (const auto& e : edges) {
    adj[e.i].emplace_back(e.j, e.weight);
    adj[e.j].emplace_back(e.i, e.weight);
  }

  std::vector<Rational> rho(n * n);
  std::vector<std::size_t> stack;
  std::vector<bool> seen(n);
  for (std::size_t root = 0; root < n; ++root) {
    std::fill(seen.begin(), seen.end(), false);
    seen[root] = true;
    stack.assign(1, root);
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (const auto& [v, w] : adj[u]) {
        if (seen[v]) continue;
        seen[v] = true;
        rho[root * n + v] = std::max(rho[root * n + u], w);
        stack.push_back(v);
      }
    }
  }
  return {detail::make_space_unchecked(space.labels(), std::move(rho)), std::move(edges)};
}

/// Dimension-zero certificate: D(S) is the largest diameter of an
/// S-component, sampled at every realized distance S (a right-continuous
/// step function in between), and m = max D(S)/S.
struct Dim0Certificate {
  Rational m{1};
  std::vector<std::pair<Rational, Rational>> table;

  /// D at an arbitrary scale; 0 below the smallest distance.
  Rational control(const Rational& scale) const {
    auto it = std::upper_bound(table.begin(), table.end(), scale,
                               [](const Rational& s, const auto& row) { return s < row.first; });
    if (it == table.begin()) return 0;
    return std::prev(it)->second;
  }

  /// Generalized inverse min{S in table : D(S) >= t}.
  std::optional<Rational> inverse(const Rational& t) const {
    auto it = std::lower_bound(table.begin(), table.end(), t,
                               [](const auto& row, const Rational& v) { return row.second < v; });
    if (it == table.end()) return std::nullopt;
    return it->first;
  }

  friend bool operator==(const Dim0Certificate&, const Dim0Certificate&) = default;
};

inline Dim0Certificate dim0_certificate(const FiniteMetricSpace& space) {
  Dim0Certificate cert;
  const std::size_t n = space.size();
  if (n < 2) return cert;

  auto edges = detail::minimum_spanning_tree(space);
  std::sort(edges.begin(), edges.end(),
            [](const WeightedEdge& a, const WeightedEdge& b) { return a.weight < b.weight; });

  DisjointSets sets(n);
  std::vector<std::vector<std::size_t>> members(n);
  std::vector<Rational> diam(n);
  for (std::size_t i = 0; i < n; ++i) members[i] = {i};

  Rational widest;
  auto next = edges.begin();
  cert.m = 0;
  for (const Rational& scale : space.distinct_distances()) {
    for (; next != edges.end() && next->weight <= scale; ++next) {
      const std::size_t a = sets.find(next->i);
      const std::size_t b = sets.find(next->j);
      Rational d = std::max(diam[a], diam[b]);
      for (const std::size_t x : members[a])
        for (const std::size_t y : members[b]) d = std::max(d, space(x, y));
      const std::size_t root = sets.unite(a, b);
      const std::size_t gone = root == a ? b : a;
      members[root].insert(members[root].end(), members[gone].begin(), members[gone].end());
      members[gone].clear();
      diam[root] = d;
      widest = std::max(widest, d);
    }
    cert.table.emplace_back(scale, widest);
    cert.m = std::max(cert.m, widest / scale);
  }
  return cert;
}

enum class Bound { nagata, uniform };

inline const char* to_string(Bound b) { return b == Bound::nagata ? "nagata" : "uniform"; }

/// A pair for which lhs <= mid <= rhs failed. For the uniform bound lhs is
/// empty when the control function never reaches d.
struct BoundViolation {
  std::size_t i = 0;
  std::size_t j = 0;
  Bound bound = Bound::nagata;
  std::optional<Rational> lhs;
  Rational mid;
  Rational rhs;

  friend bool operator==(const BoundViolation&, const BoundViolation&) = default;
};

struct ScaleBoundsReport {
  bool pass = true;
  std::size_t checked_pairs = 0;
  std::vector<BoundViolation> violations;

  friend bool operator==(const ScaleBoundsReport&, const ScaleBoundsReport&) = default;
};

/// Checks d/(2m) <= rho <= d and D^-1(d)/2 <= rho <= d for every pair.
inline ScaleBoundsReport verify_scale_bounds(const FiniteMetricSpace& space,
                                             const SubdominantResult& result,
                                             const Dim0Certificate& cert) {
  if (result.rho.labels() != space.labels())
    throw Error(Errc::InputMismatch, "subdominant result was computed for a different space");
  if (cert.table.size() != space.distinct_distances().size())
    throw Error(Errc::InputMismatch, "certificate scales do not match the space");

  ScaleBoundsReport report;
  const Rational two_m = 2 * cert.m;
  for (std::size_t i = 0; i < space.size(); ++i)
    for (std::size_t j = i + 1; j < space.size(); ++j) {
      ++report.checked_pairs;
      const Rational& d = space(i, j);
      const Rational& r = result.rho(i, j);
      const Rational nagata_lhs = d / two_m;
      if (nagata_lhs > r || r > d) report.violations.push_back({i, j, Bound::nagata, nagata_lhs, r, d});
      const auto inv = cert.inverse(d);
      std::optional<Rational> uniform_lhs;
      if (inv) uniform_lhs = *inv / 2;
      if (!uniform_lhs || *uniform_lhs > r || r > d)
        report.violations.push_back({i, j, Bound::uniform, uniform_lhs, r, d});
    }
  report.pass = report.violations.empty();
  return report;
}

/// Size cap for the brute-force oracle: ULTRAZERO_ORACLE_LIMIT or 8.
inline std::size_t oracle_limit() {
  if (const char* env = std::getenv("ULTRAZERO_ORACLE_LIMIT")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 8;
}

/// Exhaustive minimum over every simple chain from x to z of its largest
/// link. Exponential; independent of the spanning-tree route above.
inline Rational chain_minimax_oracle(const FiniteMetricSpace& space, std::size_t x, std::size_t z,
                                     std::size_t limit = oracle_limit()) {
  const std::size_t n = space.size();
  if (n > limit)
    throw Error(Errc::OracleSizeExceeded,
                std::to_string(n) + " points exceeds oracle limit " + std::to_string(limit));
  if (x >= n || z >= n) throw Error(Errc::MalformedInput, "point index out of range");
  if (x == z) return 0;

  std::optional<Rational> best;
  std::vector<bool> used(n, false);
  auto walk = [&](auto&& self, std::size_t at, const Rational& worst) -> void {
    if (at == z) {
      if (!best || worst < *best) best = worst;
      return;
    }
    for (std::size_t next = 0; next < n; ++next) {
      if (used[next]) continue;
      used[next] = true;
      self(self, next, std::max(worst, space(at, next)));
      used[next] = false;
    }
  };
  used[x] = true;
  walk(walk, x, Rational(0));
  return *best;
}

}  // namespace ultrazero
