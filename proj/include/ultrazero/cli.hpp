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

// The `ultrazero` command line. run() is the whole program minus main() so
// tests can drive it with in-memory streams.
//
// Exit status: 0 success / property holds, 1 property check failed,
// 2 input error (bad arguments, unreadable file, module rejection).

#pragma once

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ultrazero/io.hpp"
#include "ultrazero/ultrazero.hpp"

namespace ultrazero::cli {

inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;
inline constexpr int kInputError = 2;

struct Report {
  json data;
  std::string human;
  int status = kOk;
};

namespace detail {

inline Rational rational_arg(const std::string& name, const std::string& text) {
  try {
    return Rational::parse(text);
  } catch (const std::exception& e) {
    throw Error(Errc::BadParameters, "--" + name + ": " + e.what());
  }
}

/// "1,0,1", "[1,0,1]", "" and "[]" all parse; the last two are the identity.
inline GroupElement digits_arg(const std::string& name, std::string text) {
  text.erase(std::remove_if(text.begin(), text.end(),
                            [](char c) { return c == '[' || c == ']' || c == ' '; }),
             text.end());
  std::vector<std::uint64_t> digits;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      throw Error(Errc::BadParameters, "--" + name + ": digits must be nonnegative integers");
    digits.push_back(std::stoull(part));
  }
  return GroupElement(std::move(digits));
}

inline std::vector<std::size_t> labels_arg(const FiniteMetricSpace& s, const std::string& name,
                                           const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    const auto idx = s.index_of(part);
    if (!idx) throw Error(Errc::BadParameters, "--" + name + ": unknown label '" + part + "'");
    out.push_back(*idx);
  }
  return out;
}

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

inline std::string matrix_text(const FiniteMetricSpace& s) {
  std::vector<std::vector<std::string>> cells(s.size() + 1);
  cells[0].push_back("");
  for (std::size_t j = 0; j < s.size(); ++j) cells[0].push_back(s.label(j));
  for (std::size_t i = 0; i < s.size(); ++i) {
    cells[i + 1].push_back(s.label(i));
    for (std::size_t j = 0; j < s.size(); ++j) cells[i + 1].push_back(s(i, j).str());
  }
  std::vector<std::size_t> width(s.size() + 1, 0);
  for (const auto& row : cells)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::ostringstream out;
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << "  ";
      out << std::setw(static_cast<int>(width[c])) << row[c];
    }
    out << '\n';
  }
  return out.str();
}

inline std::string block_text(const FiniteMetricSpace& s, const std::vector<std::size_t>& block) {
  std::string out = "{";
  for (std::size_t k = 0; k < block.size(); ++k) out += (k ? ", " : "") + s.label(block[k]);
  return out + "}";
}

inline std::string support_text(const LOmegaPoint& p) {
  if (p.support().empty()) return "(constant)";
  std::string out;
  for (const auto& [i, sym] : p.support())
    out += (out.empty() ? "" : " ") + std::to_string(i) + ":" + std::to_string(sym);
  return out;
}

inline std::string ternary(std::uint64_t v) {
  if (v == 0) return "0";
  std::string out;
  for (; v; v /= 3) out.push_back(static_cast<char>('0' + v % 3));
  std::reverse(out.begin(), out.end());
  return out;
}

inline std::string witness_text(const std::optional<M0PairWitness>& w) {
  if (!w) return "none";
  return "p=[" + w->p.label() + "] q=[" + w->q.label() + "] d=" + std::to_string(w->distance) +
         " gap=" + std::to_string(w->gap);
}

/// Profile from either a plan file or a (pointed / archipelago) space file.
inline IslandProfile profile_from_file(const json& j, std::vector<std::string>& issues) {
  if (j.contains("plan")) {
    const ArchipelagoPlan plan = io::plan(j);
    build_archipelago(plan);  // validates the plan
    return profile_of(plan);
  }
  ProfileResult r = island_profile(io::pointed(j));
  issues.insert(issues.end(), r.issues.begin(), r.issues.end());
  return r.profile;
}

inline Archipelago archipelago_from_file(const json& j) {
  if (j.contains("plan")) return build_archipelago(io::plan(j));
  if (!j.contains("islands")) io::malformed("expected a plan or an archipelago file with islands");
  return io::archipelago(j);
}

}  // namespace detail

/// Parses argv-style arguments (without the program name), executes one
/// subcommand and streams its report. Never throws.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ultrazero: exact tools for dimension-zero metric spaces", "ultrazero"};
  app.require_subcommand(1);

  std::string format = "json";
  std::string output;
  app.add_option("--format", format, "report format")
      ->check(CLI::IsMember({"json", "human"}))
      ->capture_default_str();
  app.add_option("-o,--output", output, "write the report to this file");

  std::vector<std::string> inputs;
  std::string scale, lambda, delta, base, subset, order, p_arg, q_arg, spec_path, centers, radius;
  std::size_t depth = 0;
  std::uint64_t prime = 0;
  std::size_t max_len = 0;

  auto command = [&](const char* name, const char* help, std::size_t files) {
    CLI::App* sub = app.add_subcommand(name, help);
    if (files) sub->add_option("input", inputs, "input file(s)")->required()->expected(static_cast<int>(files));
    sub->fallthrough();
    return sub;
  };

  command("validate", "check the metric axioms", 1);
  command("ultra-check", "decide the ultrametric inequality, with a witness", 1);
  command("components", "S-components at a scale", 1)
      ->add_option("--scale", scale, "chain step S")->required();
  command("subdominant", "largest ultrametric below the metric", 1);
  command("dim0-cert", "diameter control function and Nagata constant m", 1);
  command("verify-bounds", "check both two-sided bounds on the subdominant ultrametric", 1);
  command("quantize", "round an ultrametric up to powers of three", 1);
  command("embed-lomega", "isometric embedding of a 3^n-valued ultrametric", 1)
      ->add_option("--order", order, "comma-separated insertion order of labels");
  command("embed-universal", "subdominant, quantize and embed; audit the distortion", 1);
  {
    CLI::App* sub = command("retract", "Lipschitz retraction onto a subset", 1);
    sub->add_option("--subset", subset, "comma-separated labels")->required();
    sub->add_option("--lambda", lambda, "Lipschitz target > 1")->required();
    sub->add_option("--delta", delta, "1 < delta, delta^2 < lambda");
    sub->add_option("--base", base, "base point label (default: first point)");
  }
  {
    CLI::App* sub = command("group-dist", "filtration distance of two elements", 1);
    sub->add_option("--p", p_arg, "digits, e.g. 1,0,1")->required();
    sub->add_option("--q", q_arg, "digits")->required();
  }
  command("group-ball", "ball of radius r around the identity as a metric file", 1)
      ->add_option("--depth", depth, "radius r")->required();
  command("group-embed", "isometric embedding between two group balls", 2)
      ->add_option("--depth", depth, "radius r")->required();
  command("sylow", "p-Sylow number of a direct sum of cyclic groups", 1)
      ->add_option("--prime", prime, "prime p")->required();
  command("protasov", "decide bi-uniform equivalence through Sylow numbers", 2);
  {
    CLI::App* sub = command("m0-encode", "image of an element of the binary group in M0", 0);
    sub->add_option("--p", p_arg, "digits in {0,1}")->required();
    sub->add_option("--spec", spec_path, "spec file that must be binary");
  }
  command("m0-check", "exhaustive distortion check of the M0 map", 0)
      ->add_option("--max-len", max_len, "maximum element length")->required();
  command("archipelago-build", "build an archipelago from a plan", 1);
  command("archipelago-profile", "island profile (n, N, S) of a pointed space", 1);
  command("archipelago-compare", "compare the island fingerprints of two truncations", 2);
  {
    CLI::App* sub = command("ball-audit", "classify balls of an archipelago", 1);
    sub->add_option("--center", centers, "comma-separated center labels (default: all)");
    sub->add_option("--radius", radius, "single radius (default: every critical radius)");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const bool human = format == "human";
  Report rep;

  try {
    if (name == "validate") {
      const json j = io::read_json_file(inputs[0]);
      try {
        const FiniteMetricSpace s = io::metric(j);
        rep.data = {{"valid", true}, {"points", s.size()}, {"diameter", io::rational(s.diameter())}};
        rep.human = "valid: " + std::to_string(s.size()) + " points, diameter " + s.diameter().str() + "\n";
      } catch (const Error& e) {
        if (e.code() == Errc::MalformedInput) throw;
        rep.data = {{"valid", false},
                    {"error", to_string(e.code())},
                    {"message", e.what()},
                    {"indices", e.indices()}};
        rep.human = std::string("invalid: ") + e.what() + "\n";
        rep.status = kFailed;
      }
    } else if (name == "ultra-check") {
      const FiniteMetricSpace s = io::metric(io::read_json_file(inputs[0]));
      const UltraWitness w = is_ultrametric(s);
      rep.data = io::ultra_witness(s, w);
      if (w.verdict) {
        rep.human = "ultrametric: yes\n";
      } else {
        const auto [a, b, c] = *w.triangle;
        rep.human = "ultrametric: no\ntriangle: " + s.label(a) + " " + s.label(b) + " " + s.label(c) +
                    "\nsides: " + (*w.sides)[0].str() + " " + (*w.sides)[1].str() + " " +
                    (*w.sides)[2].str() + "\n";
        rep.status = kFailed;
      }
    } else if (name == "components") {
      const Rational S = detail::rational_arg("scale", scale);
      if (S <= 0) throw Error(Errc::BadParameters, "--scale must be positive");
      const FiniteMetricSpace s = io::metric(io::read_json_file(inputs[0]));
      const Partition p = s_components(s, S);
      rep.data = io::partition(s, p);
      rep.human = "scale=" + p.scale.str() + " blocks=" + std::to_string(p.blocks.size()) + "\n";
      for (const auto& b : p.blocks) rep.human += detail::block_text(s, b) + "\n";
    } else if (name == "subdominant") {
      const FiniteMetricSpace s = io::metric(io::read_json_file(inputs[0]));
      const SubdominantResult r = subdominant_ultrametric(s);
      rep.data = io::subdominant(r);
      rep.human = detail::matrix_text(r.rho) + "spanning edges:\n";
      for (const auto& e : r.spanning_edges)
        rep.human += "  " + s.label(e.i) + " - " + s.label(e.j) + "  " + e.weight.str() + "\n";
    } else if (name == "dim0-cert") {
      const FiniteMetricSpace s = io::metric(io::read_json_file(inputs[0]));
      const Dim0Certificate c = dim0_certificate(s);
      rep.data = io::certificate(c);
      rep.human = "m=" + c.m.str() + "\nS  D(S)\n";
      for (const auto& [S, D] : c.table) rep.human += S.str() + "  " + D.str() + "\n";
    } else if (name == "verify-bounds") {
      const FiniteMetricSpace s = io::metric(io::read_json_file(inputs[0]));
      const ScaleBoundsReport r = verify_scale_bounds(s, subdominant_ultrametric(s), dim0_certificate(s));
      rep.data = io::verification(s, r);
      rep.human = "pairs=" + std::to_string(r.checked_pairs) + " violations=" +
                  std::to_string(r.violations.size()) + (r.pass ? " pass\n" : " fail\n");
      for (const auto& v : r.violations)
        rep.human += std::string("  ") + to_string(v.bound) + " " + s.label(v.i) + " " + s.label(v.j) +
                     ": " + (v.lhs ? v.lhs->str() : "undefined") + " <= " + v.mid.str() + " <= " +
                     v.rhs.str() + "\n";
      rep.status = r.pass ? kOk : kFailed;
    } else if (name == "quantize") {
      const FiniteMetricSpace q = quantize_3adic(io::metric(io::read_json_file(inputs[0])));
      rep.data = io::metric(q);
      rep.human = detail::matrix_text(q);
    } else if (name == "embed-lomega" || name == "embed-universal") {
      const FiniteMetricSpace s = io::metric(io::read_json_file(inputs[0]));
      std::optional<UniversalEmbedding> u;
      std::optional<LOmegaEmbedding> e;
      EmbeddingDigest d;
      if (name == "embed-lomega") {
        e = embed_3n_valued(s, order.empty() ? std::vector<std::size_t>{}
                                             : detail::labels_arg(s, "order", order));
        d = verify_embedding(*e);
        rep.data = io::embedding(*e, d);
      } else {
        u = embed_universal(s);
        e = u->embedding;
        d = u->digest;
        rep.data = io::universal(*u);
      }
      rep.human = std::string("mode=") + to_string(e->mode) + " pairs=" + std::to_string(d.checked_pairs) +
                  " ratio=[" + d.min_ratio.str() + ", " + d.max_ratio.str() + "]";
      if (u) rep.human += " m=" + u->certificate.m.str() + " bound=" + u->upper_bound.str();
      rep.human += d.ok ? " ok\n" : " FAILED\n";
      for (std::size_t i = 0; i < s.size(); ++i)
        rep.human += "  " + s.label(i) + ": " + detail::support_text(e->images[i]) + "\n";
      rep.status = d.ok ? kOk : kFailed;
    } else if (name == "retract") {
      const Rational lam = detail::rational_arg("lambda", lambda);
      std::optional<Rational> del;
      if (!delta.empty()) del = detail::rational_arg("delta", delta);
      const FiniteMetricSpace s = io::metric(io::read_json_file(inputs[0]));
      std::size_t b = 0;
      if (!base.empty()) b = detail::labels_arg(s, "base", base).at(0);
      const RetractionMap r =
          lipschitz_retraction(PointedSpace(s, b), detail::labels_arg(s, "subset", subset), lam, del);
      const Rational audited = audit_lipschitz(r);
      bool fixes = true;
      for (const std::size_t a : r.subset) fixes = fixes && r.assignment[a] == a;
      rep.data = io::retraction(r, audited);
      rep.human = "lambda=" + r.lambda.str() + " delta=" + r.delta.str() + " audited=" + audited.str() +
                  " identity-on-subset=" + detail::yes_no(fixes) + "\n";
      for (std::size_t x = 0; x < s.size(); ++x)
        rep.human += "  " + s.label(x) + " -> " + s.label(r.assignment[x]) + "\n";
      rep.status = audited <= r.lambda && fixes ? kOk : kFailed;
    } else if (name == "group-dist") {
      const CyclicSumSpec spec = io::cyclic_spec(io::read_json_file(inputs[0]));
      const GroupElement p = detail::digits_arg("p", p_arg);
      const GroupElement q = detail::digits_arg("q", q_arg);
      const std::uint64_t d = d_filtration(spec, p, q);
      rep.data = {{"p", io::element(p)}, {"q", io::element(q)}, {"d", d}};
      rep.human = "d=" + std::to_string(d) + "\n";
    } else if (name == "group-ball") {
      const CyclicSumSpec spec = io::cyclic_spec(io::read_json_file(inputs[0]));
      const FiniteMetricSpace s = group_ball(spec, depth);
      rep.data = io::metric(s);
      rep.human = detail::matrix_text(s);
    } else if (name == "group-embed") {
      const CyclicSumSpec g = io::cyclic_spec(io::read_json_file(inputs[0]));
      const CyclicSumSpec h = io::cyclic_spec(io::read_json_file(inputs[1]));
      const GroupEmbedding e = group_isometric_embedding(g, h, depth);
      rep.data = io::group_embedding(e);
      const bool iso = rep.data["isometric"].get<bool>();
      rep.human = "points=" + std::to_string(e.source.size()) + " bijective=" + detail::yes_no(e.bijective) +
                  " isometric=" + detail::yes_no(iso) + "\n";
      for (std::size_t i = 0; i < e.assignment.size(); ++i)
        rep.human += "  " + e.source.label(i) + " -> " + e.target.label(e.assignment[i]) + "\n";
      rep.status = iso ? kOk : kFailed;
    } else if (name == "sylow") {
      const CyclicSumSpec spec = io::cyclic_spec(io::read_json_file(inputs[0]));
      const SylowNumber n = sylow_number(spec, prime);
      rep.data = io::sylow(n);
      rep.human = "p=" + std::to_string(n.prime) + " sylow=" + n.str() + "\n";
    } else if (name == "protasov") {
      const CyclicSumSpec g = io::cyclic_spec(io::read_json_file(inputs[0]));
      const CyclicSumSpec h = io::cyclic_spec(io::read_json_file(inputs[1]));
      const ProtasovReport r = protasov_equivalent(g, h);
      rep.data = io::protasov(r);
      rep.human = "p  G  H\n";
      for (const auto& row : r.table)
        rep.human += std::to_string(row.prime) + "  " + row.g.str() + "  " + row.h.str() + "\n";
      rep.human += r.equivalent ? "equivalent\n" : "not equivalent, witness prime " + std::to_string(*r.witness) + "\n";
      rep.status = r.equivalent ? kOk : kFailed;
    } else if (name == "m0-encode") {
      const GroupElement p = detail::digits_arg("p", p_arg);
      const std::uint64_t v = spec_path.empty()
                                  ? m0_encode(p)
                                  : m0_encode(io::cyclic_spec(io::read_json_file(spec_path)), p);
      rep.data = {{"p", io::element(p)}, {"value", v}, {"ternary", detail::ternary(v)}};
      rep.human = "f=" + std::to_string(v) + " ternary=" + detail::ternary(v) + "\n";
    } else if (name == "m0-check") {
      if (max_len < 1 || max_len > kMaxM0CheckLength)
        throw Error(Errc::BadParameters, "--max-len must be in [1, " + std::to_string(kMaxM0CheckLength) + "]");
      const M0Report r = m0_distortion_check(max_len);
      rep.data = io::m0_report(r);
      rep.human = "pairs=" + std::to_string(r.pairs) + (r.pass() ? " pass" : " FAIL") +
                  " sharp-bound; published bound: " +
                  (r.published_bound_holds ? "holds" : "fails (see report)") + "\n";
      rep.human += "digits_ok=" + detail::yes_no(r.digits_ok) + " injective=" + detail::yes_no(r.injective) +
                   " ratio=[" + r.min_ratio.str() + ", " + r.max_ratio.str() + "]\n";
      rep.human += "sharp violation: " + detail::witness_text(r.sharp_violation) + "\n";
      rep.human += "published-bound violation: " + detail::witness_text(r.published_violation) + "\n";
      rep.human += "recorded witness: " + detail::witness_text(r.recorded_witness) +
                   " published-bound=" + (r.recorded_witness_published_holds ? "holds" : "fails") + "\n";
      rep.status = r.pass() ? kOk : kFailed;
    } else if (name == "archipelago-build") {
      const Archipelago a = build_archipelago(io::plan(io::read_json_file(inputs[0])));
      rep.data = io::archipelago(a);
      rep.human = "points=" + std::to_string(a.space.space.size()) + " hub=" + a.space.space.label(a.space.base) + "\n";
      for (std::size_t i = 0; i < a.islands.size(); ++i)
        rep.human += "island " + std::to_string(i + 1) + ": n=" + std::to_string(a.islands[i].spec.size) +
                     " m=" + std::to_string(a.islands[i].spec.diameter) +
                     " k=" + std::to_string(a.islands[i].spec.separation) + " " +
                     detail::block_text(a.space.space, a.islands[i].points) + "\n";
    } else if (name == "archipelago-profile") {
      const PointedSpace ps = io::pointed(io::read_json_file(inputs[0]));
      const ProfileResult r = island_profile(ps);
      rep.data = io::profile_result(ps.space, r);
      rep.human = "n  N  S\n";
      for (const auto& e : r.profile)
        rep.human += std::to_string(e.size) + "  " + e.diameter.str() + "  " + e.separation.str() + "\n";
      for (const auto& why : r.issues) rep.human += "warning: " + why + "\n";
      rep.status = r.shaped ? kOk : kFailed;
    } else if (name == "archipelago-compare") {
      std::vector<std::string> issues;
      const IslandProfile a = detail::profile_from_file(io::read_json_file(inputs[0]), issues);
      const IslandProfile b = detail::profile_from_file(io::read_json_file(inputs[1]), issues);
      const FingerprintReport r = fingerprint_compare(a, b);
      rep.data = io::fingerprint(r);
      if (!issues.empty()) rep.data["issues"] = issues;
      auto sizes = [](const std::map<std::size_t, std::size_t>& m) {
        std::string s;
        for (const auto& [n, c] : m) s += (s.empty() ? "" : " ") + std::to_string(n) + "x" + std::to_string(c);
        return s.empty() ? std::string("-") : s;
      };
      rep.human = std::string("verdict: ") + to_string(r.verdict) + "\nsizes A: " + sizes(r.size_counts_a) +
                  "\nsizes B: " + sizes(r.size_counts_b) + "\n";
      for (const auto& why : issues) rep.human += "warning: " + why + "\n";
    } else if (name == "ball-audit") {
      const Archipelago a = detail::archipelago_from_file(io::read_json_file(inputs[0]));
      std::vector<BallSample> samples;
      if (centers.empty() && radius.empty()) {
        samples = exhaustive_ball_samples(a);
      } else {
        std::vector<std::size_t> cs;
        if (centers.empty()) {
          for (std::size_t c = 0; c < a.space.space.size(); ++c) cs.push_back(c);
        } else {
          cs = detail::labels_arg(a.space.space, "center", centers);
        }
        std::vector<Rational> radii;
        if (radius.empty()) {
          for (const auto& s : exhaustive_ball_samples(a))
            if (std::find(radii.begin(), radii.end(), s.radius) == radii.end()) radii.push_back(s.radius);
        } else {
          radii.push_back(detail::rational_arg("radius", radius));
          if (radii.back() < 0) throw Error(Errc::BadParameters, "--radius must be nonnegative");
        }
        for (const std::size_t c : cs)
          for (const auto& R : radii) samples.push_back({c, R});
      }
      const BallAuditReport r = ball_audit(a, samples);
      rep.data = io::ball_report(a.space.space, r);
      std::size_t bad = 0;
      for (const auto& rec : r.records) bad += rec.matches != 1 || !rec.within_bound;
      rep.human = "balls=" + std::to_string(r.records.size()) + " irregular=" + std::to_string(bad) +
                  (r.pass ? " pass\n" : " fail\n") + "R  c(R)\n";
      for (const auto& [R, c] : r.capacity) rep.human += R.str() + "  " + std::to_string(c) + "\n";
      rep.status = r.pass ? kOk : kFailed;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  const std::string text = human ? rep.human : rep.data.dump() + "\n";
  if (output.empty()) {
    out << text;
  } else {
    std::ofstream file(output);
    if (!(file << text)) {
      err << "error: cannot write '" << output << "'\n";
      return kInputError;
    }
  }
  return rep.status;
}

}  // namespace ultrazero::cli
