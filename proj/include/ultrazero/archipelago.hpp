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
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ultrazero/constructions.hpp"
#include "ultrazero/disjoint_sets.hpp"
#include "ultrazero/error.hpp"
#include "ultrazero/metric_space.hpp"

namespace ultrazero {

/// Size n, diameter m and separation (hub distance) k of one island.
struct IslandSpec {
  std::uint64_t size = 2;
  std::uint64_t diameter = 2;
  std::uint64_t separation = 2;

  friend bool operator==(const IslandSpec&, const IslandSpec&) = default;
  friend auto operator<=>(const IslandSpec&, const IslandSpec&) = default;
};

struct ArchipelagoPlan {
  std::set<std::uint64_t> lambda;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> islands;  // (n_i, m_i)
  bool strict = false;

  friend bool operator==(const ArchipelagoPlan&, const ArchipelagoPlan&) = default;
};

struct Island {
  IslandSpec spec;
  std::vector<std::size_t> points;

  friend bool operator==(const Island&, const Island&) = default;
};

struct Archipelago {
  PointedSpace space;
  std::vector<Island> islands;
};

/// Separations k_i = m_1 + ... + m_i, plus one in strict mode so that every
/// island sits strictly farther from the hub than its own diameter.
inline std::vector<std::uint64_t> separations(const ArchipelagoPlan& plan) {
  std::vector<std::uint64_t> k;
  std::uint64_t total = 0;
  for (const auto& [n, m] : plan.islands) {
    total += m;
    k.push_back(plan.strict ? total + 1 : total);
  }
  return k;
}

/// Wedge of Cone(X_i, k_i) over uniform islands X_i (n_i points pairwise at
/// distance m_i). Island i's points are labelled "i<i>.<j>", the hub "hub".
inline Archipelago build_archipelago(const ArchipelagoPlan& plan) {
  if (plan.islands.empty()) throw Error(Errc::MalformedInput, "plan has no islands");
  for (const auto size : plan.lambda)
    if (size < 2) throw Error(Errc::MalformedInput, "lambda entries must exceed 1");
  for (std::size_t i = 0; i < plan.islands.size(); ++i) {
    const auto [n, m] = plan.islands[i];
    if (!plan.lambda.count(n))
      throw Error(Errc::SizeNotInLambda,
                  "island " + std::to_string(i + 1) + " has size " + std::to_string(n), {i});
    if (m < n)
      throw Error(Errc::DiameterTooSmall,
                  "island " + std::to_string(i + 1) + " has diameter " + std::to_string(m) +
                      " < size " + std::to_string(n),
                  {i});
  }

  const auto k = separations(plan);
  std::vector<PointedSpace> cones;
  cones.reserve(plan.islands.size());
  for (std::size_t i = 0; i < plan.islands.size(); ++i) {
    const auto [n, m] = plan.islands[i];
    std::vector<std::string> labels;
    for (std::uint64_t j = 0; j < n; ++j)
      labels.push_back("i" + std::to_string(i + 1) + "." + std::to_string(j + 1));
    std::vector<Rational> dist(n * n);
    for (std::uint64_t a = 0; a < n; ++a)
      for (std::uint64_t b = 0; b < n; ++b)
        if (a != b) dist[a * n + b] = static_cast<std::int64_t>(m);
    const auto island = detail::make_space_unchecked(std::move(labels), std::move(dist));
    cones.push_back(cone(island, static_cast<std::int64_t>(k[i]), /*allow_equal=*/true, "hub"));
  }

  Archipelago arch{metric_wedge(cones), {}};
  std::size_t next = 0;
  for (std::size_t i = 0; i < plan.islands.size(); ++i) {
    const auto [n, m] = plan.islands[i];
    Island island{{n, m, k[i]}, {}};
    for (std::uint64_t j = 0; j < n; ++j, ++next) {
      if (next == arch.space.base) ++next;
      island.points.push_back(next);
    }
    arch.islands.push_back(std::move(island));
  }
  return arch;
}

/// One (n, N, S) triple: island size, largest internal distance, hub
/// distance.
struct ProfileEntry {
  std::size_t size = 0;
  Rational diameter;
  Rational separation;

  friend bool operator==(const ProfileEntry&, const ProfileEntry&) = default;
  friend auto operator<=>(const ProfileEntry&, const ProfileEntry&) = default;
};

/// Multiset of island triples, kept sorted.
using IslandProfile = std::vector<ProfileEntry>;

inline IslandProfile profile_of(const ArchipelagoPlan& plan) {
  IslandProfile p;
  const auto k = separations(plan);
  for (std::size_t i = 0; i < plan.islands.size(); ++i)
    p.push_back({static_cast<std::size_t>(plan.islands[i].first),
                 static_cast<std::int64_t>(plan.islands[i].second),
                 static_cast<std::int64_t>(k[i])});
  std::sort(p.begin(), p.end());
  return p;
}

struct ProfileResult {
  IslandProfile profile;
  std::vector<std::vector<std::size_t>> classes;
  bool shaped = true;               // false: NotArchipelagoShaped
  std::vector<std::string> issues;  // why the shape check failed
};

/// Recovers islands from a pointed space: non-hub x and y share an island
/// iff d(x, y) < d(x, hub). The result is flagged NotArchipelagoShaped
/// (with the degraded profile still reported) when classes are singletons,
/// are not uniform, sit at mixed hub distances or break the cross-island
/// law d = max(S_i, S_j).
inline ProfileResult island_profile(const PointedSpace& ps) {
  const FiniteMetricSpace& X = ps.space;
  const std::size_t hub = ps.base;
  DisjointSets sets(X.size());
  for (std::size_t x = 0; x < X.size(); ++x)
    for (std::size_t y = x + 1; y < X.size(); ++y)
      if (x != hub && y != hub && X(x, y) < X(x, hub)) sets.unite(x, y);

  ProfileResult out;
  for (auto& cls : sets.classes())
    if (!(cls.size() == 1 && cls.front() == hub)) out.classes.push_back(std::move(cls));

  auto flag = [&](std::string why) {
    out.shaped = false;
    out.issues.push_back(std::move(why));
  };
  std::vector<Rational> sep(out.classes.size());
  for (std::size_t c = 0; c < out.classes.size(); ++c) {
    const auto& cls = out.classes[c];
    ProfileEntry e{cls.size(), 0, X(cls.front(), hub)};
    std::set<Rational> internal;
    for (std::size_t a = 0; a < cls.size(); ++a) {
      if (X(cls[a], hub) != e.separation)
        flag("island at " + X.label(cls.front()) + " has mixed hub distances");
      for (std::size_t b = a + 1; b < cls.size(); ++b) internal.insert(X(cls[a], cls[b]));
    }
    if (!internal.empty()) e.diameter = *internal.rbegin();
    if (cls.size() < 2) flag("point " + X.label(cls.front()) + " forms a singleton island");
    if (internal.size() > 1) flag("island at " + X.label(cls.front()) + " is not uniform");
    sep[c] = e.separation;
    out.profile.push_back(e);
  }
  for (std::size_t c = 0; c < out.classes.size(); ++c)
    for (std::size_t e = c + 1; e < out.classes.size(); ++e) {
      const Rational expected = std::max(sep[c], sep[e]);
      bool broken = false;
      for (const auto x : out.classes[c]) {
        for (const auto y : out.classes[e])
          if (X(x, y) != expected) {
            flag("d(" + X.label(x) + "," + X.label(y) + ") = " + X(x, y).str() +
                 " breaks the cross-island law (expected " + expected.str() + ")");
            broken = true;
            break;
          }
        if (broken) break;
      }
    }
  std::sort(out.profile.begin(), out.profile.end());
  return out;
}

inline ProfileResult island_profile(const Archipelago& arch) { return island_profile(arch.space); }

enum class FingerprintVerdict { distinct, indistinguishable_at_truncation };

inline const char* to_string(FingerprintVerdict v) {
  return v == FingerprintVerdict::distinct ? "distinct" : "indistinguishable-at-this-truncation";
}

/// Island-size fingerprint of two truncations. Differing size sets are the
/// invariant that separates archipelagos; counts and diameter spectra are
/// reported for information only.
struct FingerprintReport {
  std::map<std::size_t, std::size_t> size_counts_a;
  std::map<std::size_t, std::size_t> size_counts_b;
  std::vector<std::size_t> only_in_a;
  std::vector<std::size_t> only_in_b;
  std::vector<Rational> diameters_a;
  std::vector<Rational> diameters_b;
  FingerprintVerdict verdict = FingerprintVerdict::indistinguishable_at_truncation;

  friend bool operator==(const FingerprintReport&, const FingerprintReport&) = default;
};

inline FingerprintReport fingerprint_compare(const IslandProfile& a, const IslandProfile& b) {
  FingerprintReport r;
  std::set<Rational> da, db;
  for (const auto& e : a) {
    ++r.size_counts_a[e.size];
    da.insert(e.diameter);
  }
  for (const auto& e : b) {
    ++r.size_counts_b[e.size];
    db.insert(e.diameter);
  }
  r.diameters_a.assign(da.begin(), da.end());
  r.diameters_b.assign(db.begin(), db.end());
  for (const auto& [size, count] : r.size_counts_a)
    if (!r.size_counts_b.count(size)) r.only_in_a.push_back(size);
  for (const auto& [size, count] : r.size_counts_b)
    if (!r.size_counts_a.count(size)) r.only_in_b.push_back(size);
  if (!r.only_in_a.empty() || !r.only_in_b.empty()) r.verdict = FingerprintVerdict::distinct;
  return r;
}

enum class BallShape { hub_ball, singleton, island, unclassified };

inline const char* to_string(BallShape s) {
  switch (s) {
    case BallShape::hub_ball: return "hub-ball";
    case BallShape::singleton: return "singleton";
    case BallShape::island: return "island";
    case BallShape::unclassified: return "unclassified";
  }
  return "unclassified";
}

struct BallSample {
  std::size_t center = 0;
  Rational radius;
};

struct BallRecord {
  std::size_t center = 0;
  Rational radius;
  BallShape shape = BallShape::unclassified;
  std::size_t matches = 0;  // how many of the three shapes the ball equals
  std::size_t cardinality = 0;
  bool within_bound = true;

  friend bool operator==(const BallRecord&, const BallRecord&) = default;
};

struct BallAuditReport {
  std::vector<BallRecord> records;
  std::map<Rational, std::size_t> capacity;  // largest ball seen per radius
  bool pass = true;
};

/// Classifies each closed ball B(x, R) as the hub ball B(hub, R), {x}, or
/// the island of x, and checks the size bound of each shape: 1 for a
/// singleton, R for an island, R + 1 for a hub ball.
inline BallAuditReport ball_audit(const Archipelago& arch, const std::vector<BallSample>& samples) {
  const FiniteMetricSpace& X = arch.space.space;
  const std::size_t hub = arch.space.base;
  std::vector<std::ptrdiff_t> island_of(X.size(), -1);
  for (std::size_t i = 0; i < arch.islands.size(); ++i)
    for (const auto p : arch.islands[i].points) island_of[p] = static_cast<std::ptrdiff_t>(i);

  auto ball = [&](std::size_t c, const Rational& r) {
    std::vector<std::size_t> out;
    for (std::size_t y = 0; y < X.size(); ++y)
      if (X(c, y) <= r) out.push_back(y);
    return out;
  };

  BallAuditReport report;
  for (const auto& s : samples) {
    if (s.center >= X.size()) throw Error(Errc::MalformedInput, "ball center out of range", {s.center});
    if (s.radius < 0) throw Error(Errc::BadParameters, "negative radius");
    const auto b = ball(s.center, s.radius);
    BallRecord rec{s.center, s.radius, BallShape::unclassified, 0, b.size(), true};
    if (b == ball(hub, s.radius)) {
      rec.shape = BallShape::hub_ball;
      ++rec.matches;
      rec.within_bound = Rational(static_cast<std::int64_t>(b.size())) <= s.radius + 1;
    }
    if (s.center != hub) {
      if (b == std::vector<std::size_t>{s.center}) {
        rec.shape = BallShape::singleton;
        ++rec.matches;
      }
      const auto& own = arch.islands.at(static_cast<std::size_t>(island_of[s.center])).points;
      if (b == own) {
        rec.shape = BallShape::island;
        ++rec.matches;
        rec.within_bound = Rational(static_cast<std::int64_t>(b.size())) <= s.radius;
      }
    }
    if (rec.matches != 1 || !rec.within_bound) report.pass = false;
    auto& cap = report.capacity[s.radius];
    cap = std::max(cap, b.size());
    report.records.push_back(std::move(rec));
  }
  return report;
}

/// Every center against radius 0, every realized distance, and every
/// realized distance minus 1/2.
inline std::vector<BallSample> exhaustive_ball_samples(const Archipelago& arch) {
  std::set<Rational> radii{Rational(0)};
  for (const auto& d : arch.space.space.distinct_distances()) {
    radii.insert(d);
    if (d > Rational(1, 2)) radii.insert(d - Rational(1, 2));
  }
  std::vector<BallSample> out;
  for (std::size_t c = 0; c < arch.space.space.size(); ++c)
    for (const auto& r : radii) out.push_back({c, r});
  return out;
}

}  // namespace ultrazero
