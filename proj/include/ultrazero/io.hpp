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

// JSON interchange for every module. Rationals are always written as
// strings ("p/q" or an integer) so files stay bit-exact; integers are also
// accepted as JSON numbers on input.

#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ultrazero/archipelago.hpp"
#include "ultrazero/error.hpp"
#include "ultrazero/locfin_groups.hpp"
#include "ultrazero/lomega.hpp"
#include "ultrazero/metric_space.hpp"
#include "ultrazero/pipeline.hpp"
#include "ultrazero/rational.hpp"
#include "ultrazero/retract.hpp"
#include "ultrazero/scale_analysis.hpp"

namespace ultrazero {

using json = nlohmann::ordered_json;

namespace io {

[[noreturn]] inline void malformed(const std::string& what) {
  throw Error(Errc::MalformedInput, what);
}

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) malformed(std::string("missing field '") + key + "'");
  return j.at(key);
}

// ---------------------------------------------------------------- Rational

inline json rational(const Rational& r) { return r.str(); }

inline Rational rational(const json& j) {
  try {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  } catch (const std::invalid_argument& e) {
    malformed(e.what());
  } catch (const std::overflow_error& e) {
    malformed(e.what());
  }
  malformed("expected an integer or \"p/q\" string, got " + j.dump());
}

inline json optional_rational(const std::optional<Rational>& r) {
  return r ? rational(*r) : json(nullptr);
}

inline std::optional<Rational> optional_rational(const json& j) {
  if (j.is_null()) return std::nullopt;
  return rational(j);
}

inline std::size_t label_index(const FiniteMetricSpace& s, const json& label) {
  if (!label.is_string()) malformed("expected a label string, got " + label.dump());
  const auto idx = s.index_of(label.get<std::string>());
  if (!idx) malformed("unknown label '" + label.get<std::string>() + "'");
  return *idx;
}

inline json labels_of(const FiniteMetricSpace& s, const std::vector<std::size_t>& idx) {
  json out = json::array();
  for (const auto i : idx) out.push_back(s.label(i));
  return out;
}

inline std::vector<std::size_t> indices_of(const FiniteMetricSpace& s, const json& labels) {
  if (!labels.is_array()) malformed("expected a list of labels");
  std::vector<std::size_t> out;
  for (const auto& l : labels) out.push_back(label_index(s, l));
  return out;
}

// ----------------------------------------------------------- metric spaces

inline json metric(const FiniteMetricSpace& s) {
  json dist = json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < s.size(); ++j) row.push_back(rational(s(i, j)));
    dist.push_back(std::move(row));
  }
  return json{{"labels", s.labels()}, {"dist", std::move(dist)}};
}

/// Parses {"labels": [...], "dist": [[...]...]} and validates the axioms.
inline FiniteMetricSpace metric(const json& j) {
  const json& labels = field(j, "labels");
  const json& dist = field(j, "dist");
  if (!labels.is_array() || !dist.is_array()) malformed("labels and dist must be arrays");
  std::vector<std::string> names;
  for (const auto& l : labels) {
    if (!l.is_string()) malformed("labels must be strings");
    names.push_back(l.get<std::string>());
  }
  Matrix m;
  for (const auto& row : dist) {
    if (!row.is_array()) malformed("dist rows must be arrays");
    std::vector<Rational> r;
    for (const auto& v : row) r.push_back(rational(v));
    m.push_back(std::move(r));
  }
  return validate_metric(std::move(names), m);
}

inline json pointed(const PointedSpace& p) {
  json j = metric(p.space);
  j["base"] = p.space.label(p.base);
  return j;
}

/// A metric file with an optional "base" label (default: first point).
inline PointedSpace pointed(const json& j) {
  FiniteMetricSpace s = metric(j);
  if (s.size() == 0) malformed("pointed space needs at least one point");
  const std::size_t base = j.contains("base") ? label_index(s, j.at("base")) : 0;
  return PointedSpace(std::move(s), base);
}

// -------------------------------------------------------------- metric core

inline json ultra_witness(const FiniteMetricSpace& s, const UltraWitness& w) {
  json j{{"ultrametric", w.verdict}};
  if (w.triangle) {
    const auto [a, b, c] = *w.triangle;
    j["triangle"] = labels_of(s, {a, b, c});
    j["sides"] = json::array(
        {rational((*w.sides)[0]), rational((*w.sides)[1]), rational((*w.sides)[2])});
  }
  return j;
}

inline UltraWitness ultra_witness(const FiniteMetricSpace& s, const json& j) {
  UltraWitness w;
  w.verdict = field(j, "ultrametric").get<bool>();
  if (j.contains("triangle")) {
    const auto idx = indices_of(s, j.at("triangle"));
    if (idx.size() != 3) malformed("triangle needs three labels");
    w.triangle = std::array{idx[0], idx[1], idx[2]};
    const auto& sides = field(j, "sides");
    w.sides = std::array{rational(sides.at(0)), rational(sides.at(1)), rational(sides.at(2))};
  }
  return w;
}

inline json gauge(const Gauge& g) {
  json pts = json::array();
  for (const auto& [t, f] : g.breakpoints()) pts.push_back(json::array({rational(t), rational(f)}));
  return json{{"breakpoints", std::move(pts)}};
}

inline Gauge gauge(const json& j) {
  std::vector<Gauge::Breakpoint> pts;
  for (const auto& p : field(j, "breakpoints")) {
    if (!p.is_array() || p.size() != 2) malformed("breakpoints are [t, f(t)] pairs");
    pts.emplace_back(rational(p[0]), rational(p[1]));
  }
  return Gauge(std::move(pts));
}

// ----------------------------------------------------------- scale analysis

inline json partition(const FiniteMetricSpace& s, const Partition& p) {
  json blocks = json::array();
  for (const auto& b : p.blocks) blocks.push_back(labels_of(s, b));
  return json{{"scale", rational(p.scale)}, {"blocks", std::move(blocks)}};
}

inline Partition partition(const FiniteMetricSpace& s, const json& j) {
  Partition p{rational(field(j, "scale")), {}};
  for (const auto& b : field(j, "blocks")) p.blocks.push_back(indices_of(s, b));
  return p;
}

inline json certificate(const Dim0Certificate& c) {
  json table = json::array();
  for (const auto& [scale, d] : c.table) table.push_back(json::array({rational(scale), rational(d)}));
  return json{{"m", rational(c.m)}, {"table", std::move(table)}};
}

inline Dim0Certificate certificate(const json& j) {
  Dim0Certificate c;
  c.m = rational(field(j, "m"));
  for (const auto& row : field(j, "table")) {
    if (!row.is_array() || row.size() != 2) malformed("table rows are [S, D] pairs");
    c.table.emplace_back(rational(row[0]), rational(row[1]));
  }
  return c;
}

inline json subdominant(const SubdominantResult& r) {
  json edges = json::array();
  for (const auto& e : r.spanning_edges)
    edges.push_back(json::array({r.rho.label(e.i), r.rho.label(e.j), rational(e.weight)}));
  return json{{"rho", metric(r.rho)}, {"spanning_edges", std::move(edges)}};
}

inline SubdominantResult subdominant(const json& j) {
  SubdominantResult r{metric(field(j, "rho")), {}};
  for (const auto& e : field(j, "spanning_edges")) {
    if (!e.is_array() || e.size() != 3) malformed("edges are [label, label, weight]");
    r.spanning_edges.push_back({label_index(r.rho, e[0]), label_index(r.rho, e[1]), rational(e[2])});
  }
  return r;
}

inline json verification(const FiniteMetricSpace& s, const ScaleBoundsReport& r) {
  json v = json::array();
  for (const auto& x : r.violations)
    v.push_back(json{{"pair", labels_of(s, {x.i, x.j})},
                     {"bound", to_string(x.bound)},
                     {"lhs", optional_rational(x.lhs)},
                     {"mid", rational(x.mid)},
                     {"rhs", rational(x.rhs)}});
  return json{{"pass", r.pass}, {"checked_pairs", r.checked_pairs}, {"violations", std::move(v)}};
}

inline ScaleBoundsReport verification(const FiniteMetricSpace& s, const json& j) {
  ScaleBoundsReport r;
  r.pass = field(j, "pass").get<bool>();
  r.checked_pairs = field(j, "checked_pairs").get<std::size_t>();
  for (const auto& x : field(j, "violations")) {
    const auto pair = indices_of(s, field(x, "pair"));
    if (pair.size() != 2) malformed("pair needs two labels");
    const std::string bound = field(x, "bound").get<std::string>();
    r.violations.push_back({pair[0], pair[1], bound == "nagata" ? Bound::nagata : Bound::uniform,
                            optional_rational(field(x, "lhs")), rational(field(x, "mid")),
                            rational(field(x, "rhs"))});
  }
  return r;
}

// ------------------------------------------------------------------ L_omega

inline json lomega_point(const LOmegaPoint& p) {
  json support = json::array();
  for (const auto& [i, s] : p.support()) support.push_back(json::array({i, s}));
  return support;
}

inline LOmegaPoint lomega_point(const json& support) {
  if (!support.is_array()) malformed("support must be an array of [index, symbol]");
  LOmegaPoint p;
  for (const auto& e : support) {
    if (!e.is_array() || e.size() != 2) malformed("support entries are [index, symbol]");
    p.set(e[0].get<std::int64_t>(), e[1].get<std::uint64_t>());
  }
  return p;
}

inline json digest(const EmbeddingDigest& d) {
  return json{{"checked_pairs", d.checked_pairs},
              {"min_ratio", rational(d.min_ratio)},
              {"max_ratio", rational(d.max_ratio)},
              {"ok", d.ok}};
}

inline EmbeddingDigest digest(const json& j) {
  return EmbeddingDigest{field(j, "checked_pairs").get<std::size_t>(),
                         rational(field(j, "min_ratio")), rational(field(j, "max_ratio")),
                         field(j, "ok").get<bool>()};
}

inline json embedding(const LOmegaEmbedding& e, const EmbeddingDigest& d) {
  json points = json::array();
  for (std::size_t i = 0; i < e.images.size(); ++i)
    points.push_back(json{{"label", e.source.label(i)}, {"support", lomega_point(e.images[i])}});
  return json{{"mode", to_string(e.mode)}, {"points", std::move(points)}, {"verification", digest(d)}};
}

inline json embedding(const LOmegaEmbedding& e) { return embedding(e, verify_embedding(e)); }

/// Rebuilds an embedding against its source space (labels must match).
inline LOmegaEmbedding embedding(const FiniteMetricSpace& source, const json& j) {
  const std::string mode = field(j, "mode").get<std::string>();
  LOmegaEmbedding e{source, std::vector<LOmegaPoint>(source.size()),
                    mode == "isometric" ? EmbeddingMode::isometric : EmbeddingMode::bilipschitz3};
  for (const auto& p : field(j, "points"))
    e.images[label_index(source, field(p, "label"))] = lomega_point(field(p, "support"));
  return e;
}

inline json universal(const UniversalEmbedding& u) {
  json j = embedding(u.embedding, u.digest);
  j["certificate"] = certificate(u.certificate);
  j["upper_bound"] = rational(u.upper_bound);
  j["within_bounds"] = u.within_bounds;
  return j;
}

// ------------------------------------------------------------------ retract

inline json retraction(const RetractionMap& r, const Rational& audited) {
  const FiniteMetricSpace& s = r.space.space;
  json assignment = json::object();
  for (std::size_t x = 0; x < s.size(); ++x) assignment[s.label(x)] = s.label(r.assignment[x]);
  return json{{"base", s.label(r.space.base)},
              {"subset", labels_of(s, r.subset)},
              {"delta", rational(r.delta)},
              {"lambda", rational(r.lambda)},
              {"assignment", std::move(assignment)},
              {"audited_constant", rational(audited)}};
}

inline json retraction(const RetractionMap& r) { return retraction(r, audit_lipschitz(r)); }

inline RetractionMap retraction(const FiniteMetricSpace& s, const json& j) {
  RetractionMap r{PointedSpace(s, label_index(s, field(j, "base"))),
                  indices_of(s, field(j, "subset")),
                  rational(field(j, "delta")),
                  rational(field(j, "lambda")),
                  std::vector<std::size_t>(s.size())};
  const auto& a = field(j, "assignment");
  for (std::size_t x = 0; x < s.size(); ++x) r.assignment[x] = label_index(s, field(a, s.label(x).c_str()));
  return r;
}

// ------------------------------------------------------------ locfin groups

inline json cyclic_spec(const CyclicSumSpec& spec) {
  json summands = json::array();
  for (const auto& s : spec.summands())
    summands.push_back(json::array({s.order, s.multiplicity ? json(*s.multiplicity) : json("inf")}));
  return json{{"summands", std::move(summands)}};
}

inline CyclicSumSpec cyclic_spec(const json& j) {
  std::vector<Summand> out;
  for (const auto& s : field(j, "summands")) {
    if (!s.is_array() || s.size() != 2 || !s[0].is_number_unsigned())
      malformed("summands are [order, multiplicity-or-\"inf\"]");
    Summand x{s[0].get<std::uint64_t>(), std::nullopt};
    if (s[1].is_string()) {
      if (s[1].get<std::string>() != "inf") malformed("multiplicity must be a count or \"inf\"");
    } else if (s[1].is_number_unsigned()) {
      x.multiplicity = s[1].get<std::uint64_t>();
    } else {
      malformed("multiplicity must be a count or \"inf\"");
    }
    out.push_back(x);
  }
  return CyclicSumSpec(std::move(out));
}

inline json element(const GroupElement& e) { return e.digits(); }

inline GroupElement element(const json& j) {
  if (!j.is_array()) malformed("elements are digit arrays");
  std::vector<std::uint64_t> d;
  for (const auto& x : j) {
    if (!x.is_number_unsigned()) malformed("digits must be nonnegative integers");
    d.push_back(x.get<std::uint64_t>());
  }
  return GroupElement(std::move(d));
}

inline json sylow(const SylowNumber& s) {
  return json{{"prime", s.prime},
              {"exponent", s.exponent ? json(*s.exponent) : json(nullptr)},
              {"value", s.str()}};
}

inline SylowNumber sylow(const json& j) {
  const auto& e = field(j, "exponent");
  return SylowNumber{field(j, "prime").get<std::uint64_t>(),
                     e.is_null() ? std::nullopt : std::optional<std::uint64_t>(e.get<std::uint64_t>())};
}

inline json protasov(const ProtasovReport& r) {
  json table = json::array();
  for (const auto& row : r.table)
    table.push_back(json{{"prime", row.prime}, {"g", sylow(row.g)}, {"h", sylow(row.h)}});
  return json{{"equivalent", r.equivalent},
              {"witness", r.witness ? json(*r.witness) : json(nullptr)},
              {"table", std::move(table)}};
}

inline ProtasovReport protasov(const json& j) {
  ProtasovReport r;
  r.equivalent = field(j, "equivalent").get<bool>();
  if (!field(j, "witness").is_null()) r.witness = j.at("witness").get<std::uint64_t>();
  for (const auto& row : field(j, "table"))
    r.table.push_back({field(row, "prime").get<std::uint64_t>(), sylow(field(row, "g")),
                       sylow(field(row, "h"))});
  return r;
}

inline json group_embedding(const GroupEmbedding& e) {
  json a = json::object();
  for (std::size_t i = 0; i < e.assignment.size(); ++i)
    a[e.source.label(i)] = e.target.label(e.assignment[i]);
  return json{{"bijective", e.bijective},
              {"isometric", !isometry_defect(e.source, e.target, e.assignment).has_value()},
              {"assignment", std::move(a)}};
}

inline json m0_pair(const std::optional<M0PairWitness>& w) {
  if (!w) return nullptr;
  return json{{"p", element(w->p)}, {"q", element(w->q)}, {"d", w->distance}, {"gap", w->gap}};
}

inline std::optional<M0PairWitness> m0_pair(const json& j) {
  if (j.is_null()) return std::nullopt;
  return M0PairWitness{element(field(j, "p")), element(field(j, "q")),
                       field(j, "d").get<std::uint64_t>(), field(j, "gap").get<std::uint64_t>()};
}

inline json m0_report(const M0Report& r) {
  return json{{"max_len", r.max_len},
              {"pairs", r.pairs},
              {"pass", r.pass()},
              {"digits_ok", r.digits_ok},
              {"injective", r.injective},
              {"sharp_bound_holds", r.sharp_bound_holds},
              {"min_ratio", rational(r.min_ratio)},
              {"max_ratio", rational(r.max_ratio)},
              {"sharp_violation", m0_pair(r.sharp_violation)},
              {"published_bound_holds", r.published_bound_holds},
              {"published_violation", m0_pair(r.published_violation)},
              {"recorded_witness", m0_pair(r.recorded_witness)},
              {"recorded_witness_published_holds", r.recorded_witness_published_holds}};
}

inline M0Report m0_report(const json& j) {
  M0Report r;
  r.max_len = field(j, "max_len").get<std::size_t>();
  r.pairs = field(j, "pairs").get<std::size_t>();
  r.digits_ok = field(j, "digits_ok").get<bool>();
  r.injective = field(j, "injective").get<bool>();
  r.sharp_bound_holds = field(j, "sharp_bound_holds").get<bool>();
  r.min_ratio = rational(field(j, "min_ratio"));
  r.max_ratio = rational(field(j, "max_ratio"));
  r.sharp_violation = m0_pair(field(j, "sharp_violation"));
  r.published_bound_holds = field(j, "published_bound_holds").get<bool>();
  r.published_violation = m0_pair(field(j, "published_violation"));
  r.recorded_witness = m0_pair(field(j, "recorded_witness"));
  r.recorded_witness_published_holds = field(j, "recorded_witness_published_holds").get<bool>();
  return r;
}

// -------------------------------------------------------------- archipelago

inline json plan(const ArchipelagoPlan& p) {
  json islands = json::array();
  for (const auto& [n, m] : p.islands) islands.push_back(json::array({n, m}));
  return json{{"lambda", p.lambda}, {"plan", std::move(islands)}, {"strict", p.strict}};
}

inline ArchipelagoPlan plan(const json& j) {
  ArchipelagoPlan p;
  for (const auto& v : field(j, "lambda")) {
    if (!v.is_number_unsigned()) malformed("lambda entries must be positive integers");
    p.lambda.insert(v.get<std::uint64_t>());
  }
  for (const auto& row : field(j, "plan")) {
    if (!row.is_array() || row.size() != 2 || !row[0].is_number_unsigned() ||
        !row[1].is_number_unsigned())
      malformed("plan rows are [n, m] with nonnegative integers");
    p.islands.emplace_back(row[0].get<std::uint64_t>(), row[1].get<std::uint64_t>());
  }
  if (j.contains("strict")) p.strict = j.at("strict").get<bool>();
  return p;
}

inline json archipelago(const Archipelago& a) {
  json j = pointed(a.space);
  json islands = json::array();
  for (const auto& isl : a.islands)
    islands.push_back(json{{"size", isl.spec.size},
                           {"diameter", isl.spec.diameter},
                           {"separation", isl.spec.separation},
                           {"points", labels_of(a.space.space, isl.points)}});
  j["islands"] = std::move(islands);
  return j;
}

inline Archipelago archipelago(const json& j) {
  Archipelago a{pointed(j), {}};
  for (const auto& isl : field(j, "islands"))
    a.islands.push_back({{field(isl, "size").get<std::uint64_t>(),
                          field(isl, "diameter").get<std::uint64_t>(),
                          field(isl, "separation").get<std::uint64_t>()},
                         indices_of(a.space.space, field(isl, "points"))});
  return a;
}

inline json profile(const IslandProfile& p) {
  json out = json::array();
  for (const auto& e : p)
    out.push_back(json::array({e.size, rational(e.diameter), rational(e.separation)}));
  return out;
}

inline IslandProfile profile(const json& j) {
  IslandProfile p;
  if (!j.is_array()) malformed("profile must be an array of [n, N, S]");
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 3) malformed("profile entries are [n, N, S]");
    p.push_back({e[0].get<std::size_t>(), rational(e[1]), rational(e[2])});
  }
  std::sort(p.begin(), p.end());
  return p;
}

inline json profile_result(const FiniteMetricSpace& s, const ProfileResult& r) {
  json classes = json::array();
  for (const auto& c : r.classes) classes.push_back(labels_of(s, c));
  return json{{"profile", profile(r.profile)},
              {"shaped", r.shaped},
              {"issues", r.issues},
              {"islands", std::move(classes)}};
}

inline json fingerprint(const FingerprintReport& r) {
  auto counts = [](const std::map<std::size_t, std::size_t>& m) {
    json out = json::array();
    for (const auto& [size, count] : m) out.push_back(json::array({size, count}));
    return out;
  };
  auto spectrum = [](const std::vector<Rational>& v) {
    json out = json::array();
    for (const auto& d : v) out.push_back(rational(d));
    return out;
  };
  return json{{"verdict", to_string(r.verdict)},
              {"sizes_a", counts(r.size_counts_a)},
              {"sizes_b", counts(r.size_counts_b)},
              {"only_in_a", r.only_in_a},
              {"only_in_b", r.only_in_b},
              {"diameters_a", spectrum(r.diameters_a)},
              {"diameters_b", spectrum(r.diameters_b)}};
}

inline FingerprintReport fingerprint(const json& j) {
  FingerprintReport r;
  for (const auto& e : field(j, "sizes_a")) r.size_counts_a[e[0].get<std::size_t>()] = e[1].get<std::size_t>();
  for (const auto& e : field(j, "sizes_b")) r.size_counts_b[e[0].get<std::size_t>()] = e[1].get<std::size_t>();
  r.only_in_a = field(j, "only_in_a").get<std::vector<std::size_t>>();
  r.only_in_b = field(j, "only_in_b").get<std::vector<std::size_t>>();
  for (const auto& d : field(j, "diameters_a")) r.diameters_a.push_back(rational(d));
  for (const auto& d : field(j, "diameters_b")) r.diameters_b.push_back(rational(d));
  r.verdict = field(j, "verdict").get<std::string>() == "distinct"
                  ? FingerprintVerdict::distinct
                  : FingerprintVerdict::indistinguishable_at_truncation;
  return r;
}

inline json ball_report(const FiniteMetricSpace& s, const BallAuditReport& r) {
  json records = json::array();
  for (const auto& rec : r.records)
    records.push_back(json{{"center", s.label(rec.center)},
                           {"radius", rational(rec.radius)},
                           {"shape", to_string(rec.shape)},
                           {"matches", rec.matches},
                           {"cardinality", rec.cardinality},
                           {"within_bound", rec.within_bound}});
  json capacity = json::array();
  for (const auto& [radius, c] : r.capacity) capacity.push_back(json::array({rational(radius), c}));
  return json{{"pass", r.pass}, {"capacity", std::move(capacity)}, {"records", std::move(records)}};
}

// -------------------------------------------------------------------- files

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) malformed("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    malformed("'" + path + "': " + e.what());
  }
}

}  // namespace io
}  // namespace ultrazero
