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
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ultrazero/error.hpp"
#include "ultrazero/metric_space.hpp"
#include "ultrazero/rational.hpp"

namespace ultrazero {

/// Piecewise-linear nondecreasing function on [0, inf) with f(0) = 0.
///
/// Between breakpoints the function interpolates linearly; past the last
/// breakpoint it continues with the slope of the last segment (or stays
/// flat when only the origin is given).
class Gauge {
public:
  using Breakpoint = std::pair<Rational, Rational>;

  explicit Gauge(std::vector<Breakpoint> points) : points_(std::move(points)) {
    if (points_.empty() || points_.front() != Breakpoint{0, 0})
      throw Error(Errc::GaugeNotMonotone, "gauge must start at (0, 0)");
    for (std::size_t i = 1; i < points_.size(); ++i) {
      if (points_[i].first <= points_[i - 1].first)
        throw Error(Errc::GaugeNotMonotone, "breakpoints must be strictly increasing in t", {i});
      if (points_[i].second < points_[i - 1].second)
        throw Error(Errc::GaugeNotMonotone,
                    "f decreases between t=" + points_[i - 1].first.str() +
                        " and t=" + points_[i].first.str(),
                    {i});
    }
  }

  static Gauge identity() { return Gauge({{0, 0}, {1, 1}}); }

  /// For a triangle with sides a <= b < c: identity up to b, then the line
  /// through (b, b) and (c, 3b). The image triangle b, b, 3b breaks the
  /// triangle inequality.
  static Gauge separating(const Rational& b, const Rational& c) {
    if (!(b > 0 && b < c)) throw Error(Errc::BadParameters, "need 0 < b < c");
    return Gauge({{0, 0}, {b, b}, {c, 3 * b}});
  }

  const std::vector<Breakpoint>& breakpoints() const noexcept { return points_; }

  Rational operator()(const Rational& t) const {
    if (t < 0) throw Error(Errc::BadParameters, "gauge evaluated at negative t");
    if (points_.size() == 1) return 0;
    auto hi = std::upper_bound(points_.begin(), points_.end(), t,
                               [](const Rational& v, const Breakpoint& p) { return v < p.first; });
    if (std::prev(hi)->first == t) return std::prev(hi)->second;
    if (hi == points_.end()) hi = std::prev(points_.end());
    const auto& [t1, f1] = *hi;
    const auto& [t0, f0] = *std::prev(hi);
    return f0 + (f1 - f0) * (t - t0) / (t1 - t0);
  }

private:
  std::vector<Breakpoint> points_;
};

/// The space with every distance replaced by g(d). A result that breaks the
/// triangle inequality is reported as ResultNotMetric(i, j, k), which
/// certifies that the input was not ultrametric.
inline FiniteMetricSpace apply_gauge(const FiniteMetricSpace& space, const Gauge& g) {
  const std::size_t n = space.size();
  std::vector<Rational> out(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const Rational v = g(space(i, j));
      if (v <= 0)
        throw Error(Errc::GaugeNotPositive,
                    "g(" + space(i, j).str() + ") = " + v.str() + " is not positive", {i, j});
      out[i * n + j] = out[j * n + i] = v;
    }
  if (auto t = detail::find_triangle_violation(std::span<const Rational>(out), n)) {
    const auto [i, j, k] = *t;
    throw Error(Errc::ResultNotMetric,
                "gauged triangle (" + space.label(i) + "," + space.label(j) + "," +
                    space.label(k) + ") has sides " + out[i * n + j].str() + ", " +
                    out[j * n + k].str() + ", " + out[i * n + k].str(),
                {i, j, k});
  }
  return detail::make_space_unchecked(space.labels(), std::move(out));
}

/// Least integer e with d <= 3^e, for d > 0. Found by stepping through
/// exact powers of three.
inline std::int64_t ceil_log3(const Rational& d) {
  if (d <= 0) throw Error(Errc::BadParameters, "ceil_log3 of a non-positive value");
  std::int64_t e = 0;
  Rational p(1);
  if (d <= p) {
    while (d <= p / 3) {
      p /= 3;
      --e;
    }
  } else {
    while (d > p) {
      p *= 3;
      ++e;
    }
  }
  return e;
}

/// The exponent e when d == 3^e exactly.
inline std::optional<std::int64_t> exact_log3(const Rational& d) {
  if (d <= 0) return std::nullopt;
  const std::int64_t e = ceil_log3(d);
  if (pow3(e) == d) return e;
  return std::nullopt;
}

/// Rounds every distance of an ultrametric space up to the next power of
/// three: 3^(n-1) < d <= 3^n becomes 3^n.
inline FiniteMetricSpace quantize_3adic(const FiniteMetricSpace& space) {
  const auto w = is_ultrametric(space);
  if (!w.verdict) {
    const auto [i, j, k] = *w.triangle;
    throw Error(Errc::NotUltrametric, "input is not ultrametric", {i, j, k});
  }
  const std::size_t n = space.size();
  std::vector<Rational> out(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      out[i * n + j] = out[j * n + i] = pow3(ceil_log3(space(i, j)));
  return detail::make_space_unchecked(space.labels(), std::move(out));
}

/// Every distance multiplied by a positive factor.
inline FiniteMetricSpace scale_space(const FiniteMetricSpace& space, const Rational& factor) {
  if (factor <= 0) throw Error(Errc::BadParameters, "scale factor must be positive");
  std::vector<Rational> out(space.raw().begin(), space.raw().end());
  for (auto& v : out) v *= factor;
  return detail::make_space_unchecked(space.labels(), std::move(out));
}

enum class Truncation { small, large };

/// small: min(d, eps), the eps-bounded metric. large: max(d, eps), the
/// eps-discrete metric. Diagonal stays zero in both.
inline FiniteMetricSpace scale_truncate(const FiniteMetricSpace& space, const Rational& eps,
                                        Truncation mode) {
  if (eps <= 0) throw Error(Errc::BadParameters, "truncation scale must be positive");
  const std::size_t n = space.size();
  std::vector<Rational> out(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      out[i * n + j] = out[j * n + i] =
          mode == Truncation::small ? std::min(space(i, j), eps) : std::max(space(i, j), eps);
  return detail::make_space_unchecked(space.labels(), std::move(out));
}

/// Glues the parts along their base points. Points keep their labels; the
/// hub carries the first part's base label. Within a part distances are
/// unchanged, across parts d(z, z') = max(d(z, base), d(z', base')).
inline PointedSpace metric_wedge(std::span<const PointedSpace> parts) {
  if (parts.empty()) throw Error(Errc::MalformedInput, "wedge needs at least one part");
  if (parts.size() == 1) return parts.front();

  struct Origin {
    std::size_t part;
    std::size_t index;
  };
  std::vector<Origin> origin;
  std::vector<std::string> labels;
  for (std::size_t p = 0; p < parts.size(); ++p)
    for (std::size_t i = 0; i < parts[p].space.size(); ++i) {
      if (p > 0 && i == parts[p].base) continue;
      origin.push_back({p, i});
      labels.push_back(parts[p].space.label(i));
    }
  {
    std::vector<std::string> sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    const auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end())
      throw Error(Errc::DuplicateLabel, "label '" + *dup + "' occurs in more than one part");
  }

  const std::size_t n = labels.size();
  const std::size_t hub = parts.front().base;
  auto to_hub = [&](const Origin& o) -> Rational {
    const auto& part = parts[o.part];
    return part.space(o.index, part.base);
  };
  std::vector<Rational> out(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const Origin oa = origin[a];
      const Origin ob = origin[b];
      Rational v;
      if (a == hub)
        v = to_hub(ob);
      else if (oa.part == ob.part)
        v = parts[oa.part].space(oa.index, ob.index);
      else
        v = std::max(to_hub(oa), to_hub(ob));
      out[a * n + b] = out[b * n + a] = v;
    }
  return PointedSpace(detail::make_space_unchecked(std::move(labels), std::move(out)), hub);
}

inline PointedSpace metric_wedge(const std::vector<PointedSpace>& parts) {
  return metric_wedge(std::span<const PointedSpace>(parts));
}

/// Appends a vertex at distance `height` from every point; the vertex is
/// the base point. Requires height > diameter, or height >= diameter when
/// `allow_equal` is set.
inline PointedSpace cone(const FiniteMetricSpace& space, const Rational& height,
                         bool allow_equal = false, std::string vertex_label = "v") {
  const Rational diam = space.diameter();
  if (height <= 0 || height < diam || (height == diam && !allow_equal))
    throw Error(Errc::ConeHeightTooSmall,
                "cone height " + height.str() + " vs diameter " + diam.str());
  if (space.index_of(vertex_label))
    throw Error(Errc::DuplicateLabel, "vertex label '" + vertex_label + "' already used");
  const std::size_t n = space.size() + 1;
  std::vector<std::string> labels = space.labels();
  labels.push_back(std::move(vertex_label));
  std::vector<Rational> out(n * n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = 0; j + 1 < n; ++j) out[i * n + j] = space(i, j);
    out[i * n + (n - 1)] = out[(n - 1) * n + i] = height;
  }
  return PointedSpace(detail::make_space_unchecked(std::move(labels), std::move(out)), n - 1);
}

}  // namespace ultrazero
