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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "ultrazero/cli.hpp"

using namespace ultrazero;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
  json data() const { return json::parse(out); }
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(ULTRAZERO_DATA_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / ("ultrazero_test_" + name);
  std::ofstream(path) << contents;
  return path.string();
}

}  // namespace

// --------------------------------------------------------------- exit codes

struct ExitCase {
  std::vector<std::string> args;
  int code;
};

class ExitCodes : public ::testing::TestWithParam<ExitCase> {};

TEST_P(ExitCodes, Matrix) {
  auto args = GetParam().args;
  for (auto& a : args)
    if (a.rfind("@", 0) == 0) a = data(a.substr(1));
  const auto r = invoke(args);
  EXPECT_EQ(r.code, GetParam().code) << r.out << r.err;
  if (r.code == cli::kInputError) {
    EXPECT_NE(r.err.find("error"), std::string::npos);
  }
}

INSTANTIATE_TEST_SUITE_P(
    Cli, ExitCodes,
    ::testing::Values(
        ExitCase{{"validate", "@line3.json"}, 0}, ExitCase{{"validate", "@asym.json"}, 1},
        ExitCase{{"validate", "@malformed.json"}, 2}, ExitCase{{"validate", "@missing.json"}, 2},
        ExitCase{{"ultra-check", "@ultra3.json"}, 0}, ExitCase{{"ultra-check", "@line3.json"}, 1},
        ExitCase{{"ultra-check", "@asym.json"}, 2}, ExitCase{{"components", "@line3.json", "--scale", "1"}, 0},
        ExitCase{{"components", "@line3.json", "--scale", "0"}, 2},
        ExitCase{{"components", "@line3.json", "--scale", "x"}, 2}, ExitCase{{"subdominant", "@line3.json"}, 0},
        ExitCase{{"dim0-cert", "@line3.json"}, 0}, ExitCase{{"verify-bounds", "@line3.json"}, 0},
        ExitCase{{"quantize", "@ultra3.json"}, 0}, ExitCase{{"quantize", "@line3.json"}, 2},
        ExitCase{{"embed-lomega", "@ultra3.json"}, 0}, ExitCase{{"embed-lomega", "@line3.json"}, 2},
        ExitCase{{"embed-lomega", "@ultra3.json", "--order", "c,b,a"}, 0},
        ExitCase{{"embed-lomega", "@ultra3.json", "--order", "c,c,a"}, 2},
        ExitCase{{"embed-universal", "@line3.json"}, 0},
        ExitCase{{"retract", "@ultra3.json", "--subset", "a", "--lambda", "2"}, 0},
        ExitCase{{"retract", "@ultra3.json", "--subset", "a,c", "--lambda", "3/2", "--base", "c"}, 0},
        ExitCase{{"retract", "@ultra3.json", "--subset", "a", "--lambda", "1"}, 2},
        ExitCase{{"retract", "@ultra3.json", "--subset", "zz", "--lambda", "2"}, 2},
        ExitCase{{"retract", "@line3.json", "--subset", "a", "--lambda", "2"}, 2},
        ExitCase{{"group-dist", "@z2inf_z3.json", "--p", "1,0,1", "--q", "[0,2]"}, 0},
        ExitCase{{"group-dist", "@z2inf.json", "--p", "1,2", "--q", "0"}, 2},
        ExitCase{{"group-ball", "@z2inf_z3.json", "--depth", "3"}, 0},
        ExitCase{{"group-embed", "@z2inf.json", "@z4inf.json", "--depth", "2"}, 0},
        ExitCase{{"sylow", "@z2inf_z3.json", "--prime", "3"}, 0},
        ExitCase{{"sylow", "@z2inf_z3.json", "--prime", "4"}, 2},
        ExitCase{{"protasov", "@z2inf.json", "@z4inf.json"}, 0},
        ExitCase{{"protasov", "@z2inf.json", "@z2inf_z3.json"}, 1},
        ExitCase{{"protasov", "@z2inf.json", "@line3.json"}, 2}, ExitCase{{"m0-encode", "--p", "1,1"}, 0},
        ExitCase{{"m0-encode", "--p", "1,2"}, 2}, ExitCase{{"m0-encode", "--p", "1", "--spec", "@z4inf.json"}, 2},
        ExitCase{{"m0-check", "--max-len", "4"}, 0}, ExitCase{{"m0-check", "--max-len", "0"}, 2},
        ExitCase{{"m0-check", "--max-len", "21"}, 2}, ExitCase{{"archipelago-build", "@plan_lambda2.json"}, 0},
        ExitCase{{"archipelago-build", "@line3.json"}, 2},
        ExitCase{{"archipelago-compare", "@plan_lambda2.json", "@plan_lambda3.json"}, 0},
        ExitCase{{"ball-audit", "@plan_strict.json"}, 0},
        ExitCase{{"ball-audit", "@plan_strict.json", "--center", "hub", "--radius", "5/2"}, 0},
        ExitCase{{"ball-audit", "@plan_strict.json", "--radius", "-1"}, 2}, ExitCase{{}, 2},
        ExitCase{{"no-such-command"}, 2}, ExitCase{{"validate"}, 2},
        ExitCase{{"--format", "xml", "validate", "@line3.json"}, 2}, ExitCase{{"--help"}, 0}));

// ------------------------------------------------------------ JSON reports

TEST(Reports, Dim0CertExact) {
  const auto r = invoke({"dim0-cert", data("line3.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "{\"m\":\"2\",\"table\":[[\"1\",\"2\"],[\"2\",\"2\"]]}\n");
}

TEST(Reports, UltraCheckWitness) {
  const auto j = invoke({"ultra-check", data("line3.json")}).data();
  EXPECT_FALSE(j["ultrametric"].get<bool>());
  EXPECT_EQ(j["triangle"], json::parse(R"(["a","b","c"])"));
  EXPECT_EQ(j["sides"], json::parse(R"(["1","1","2"])"));
}

TEST(Reports, ProtasovWitness) {
  const auto j = invoke({"protasov", data("z2inf.json"), data("z2inf_z3.json")}).data();
  EXPECT_FALSE(j["equivalent"].get<bool>());
  EXPECT_EQ(j["witness"], 3);
}

TEST(Reports, BallAuditAgreesWithLibrary) {
  const auto j = invoke({"ball-audit", data("plan_strict.json")}).data();
  const auto a = build_archipelago(io::plan(io::read_json_file(data("plan_strict.json"))));
  const auto r = ball_audit(a, exhaustive_ball_samples(a));
  EXPECT_EQ(j["pass"].get<bool>(), r.pass);
  EXPECT_EQ(j, io::ball_report(a.space.space, r));
}

TEST(Reports, CompareDistinct) {
  const auto j = invoke({"archipelago-compare", data("plan_lambda2.json"), data("plan_lambda3.json")}).data();
  EXPECT_EQ(j["verdict"], "distinct");
}

TEST(Reports, ProfileOfBuiltSpace) {
  const auto built = invoke({"archipelago-build", data("plan_strict.json")});
  const auto path = temp_file("strict_arch.json", built.out);
  const auto r = invoke({"archipelago-profile", path});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.data()["profile"], json::parse(R"([[2,"2","3"],[2,"3","6"]])"));
}

TEST(Reports, NonStrictProfileFails) {
  const auto built = invoke({"archipelago-build", data("plan_lambda2.json")});
  const auto r = invoke({"archipelago-profile", temp_file("lambda2_arch.json", built.out)});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.data()["shaped"].get<bool>());
}

TEST(Reports, GroupBallIsAMetricFile) {
  const auto r = invoke({"group-ball", data("z2inf_z3.json"), "--depth", "2"});
  const auto s = io::metric(r.data());
  EXPECT_EQ(s.size(), 6u);
  EXPECT_TRUE(is_ultrametric(s).verdict);
}

TEST(Reports, M0Encode) {
  const auto j = invoke({"m0-encode", "--p", "1,0,1"}).data();
  EXPECT_EQ(j["value"], 20);
  EXPECT_EQ(j["ternary"], "202");
}

// ------------------------------------------------------------- human mode

TEST(Human, M0CheckFirstLine) {
  const auto r = invoke({"--format", "human", "m0-check", "--max-len", "5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "pairs=496 pass sharp-bound; published bound: fails (see report)");
}

TEST(Human, ValidateLine) {
  const auto r = invoke({"--format", "human", "validate", data("line3.json")});
  EXPECT_EQ(r.out, "valid: 3 points, diameter 2\n");
}

// ---------------------------------------------------------------- -o flag

TEST(Output, WritesFile) {
  const auto path = (std::filesystem::temp_directory_path() / "ultrazero_test_out.json").string();
  std::filesystem::remove(path);
  const auto r = invoke({"-o", path, "dim0-cert", data("line3.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  EXPECT_EQ(json::parse(in)["m"], "2");
}

TEST(Output, UnwritablePath) {
  const auto r = invoke({"-o", "/nonexistent/dir/x.json", "dim0-cert", data("line3.json")});
  EXPECT_EQ(r.code, 2);
}

// -------------------------------------------------------------- round trip

TEST(RoundTrip, MetricAndPointed) {
  uzt::Rng rng(uzt::env_seed() + 60);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = uzt::random_metric(rng, static_cast<std::size_t>(uzt::uniform(rng, 1, 8)));
    EXPECT_EQ(io::metric(io::metric(s)), s);
    const PointedSpace p(s, s.size() - 1);
    EXPECT_EQ(io::pointed(io::pointed(p)), p);
  }
}

TEST(RoundTrip, MetricCoreAndScale) {
  uzt::Rng rng(uzt::env_seed() + 61);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = uzt::random_metric(rng, static_cast<std::size_t>(uzt::uniform(rng, 2, 8)));
    const auto w = is_ultrametric(s);
    EXPECT_EQ(io::ultra_witness(s, io::ultra_witness(s, w)), w);
    const auto p = s_components(s, s.diameter() / 3);
    EXPECT_EQ(io::partition(s, io::partition(s, p)), p);
    const auto c = dim0_certificate(s);
    EXPECT_EQ(io::certificate(io::certificate(c)), c);
    const auto sub = subdominant_ultrametric(s);
    const auto back = io::subdominant(io::subdominant(sub));
    EXPECT_EQ(back.rho, sub.rho);
    EXPECT_EQ(back.spanning_edges, sub.spanning_edges);
    const auto v = verify_scale_bounds(s, sub, c);
    EXPECT_EQ(io::verification(s, io::verification(s, v)), v);
  }
  const Gauge g({{0, 0}, {1, 2}, {Rational(5, 2), 3}});
  EXPECT_EQ(io::gauge(io::gauge(g)).breakpoints(), g.breakpoints());
}

TEST(RoundTrip, LOmega) {
  uzt::Rng rng(uzt::env_seed() + 62);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = uzt::random_3n_ultrametric(rng, static_cast<std::size_t>(uzt::uniform(rng, 1, 10)));
    const auto e = embed_3n_valued(s);
    const auto back = io::embedding(s, io::embedding(e));
    EXPECT_EQ(back.images, e.images);
    EXPECT_EQ(back.mode, e.mode);
    const auto d = verify_embedding(e);
    EXPECT_EQ(io::digest(io::digest(d)), d);
    for (const auto& img : e.images) EXPECT_EQ(io::lomega_point(io::lomega_point(img)), img);
  }
}

TEST(RoundTrip, Retraction) {
  uzt::Rng rng(uzt::env_seed() + 63);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = uzt::random_ultrametric(rng, static_cast<std::size_t>(uzt::uniform(rng, 2, 9)));
    const auto r = lipschitz_retraction(PointedSpace(s, 0), uzt::random_subset(rng, s.size()), 2);
    const auto back = io::retraction(s, io::retraction(r));
    EXPECT_EQ(back.space, r.space);
    EXPECT_EQ(back.subset, r.subset);
    EXPECT_EQ(back.delta, r.delta);
    EXPECT_EQ(back.lambda, r.lambda);
    EXPECT_EQ(back.assignment, r.assignment);
  }
}

TEST(RoundTrip, Groups) {
  uzt::Rng rng(uzt::env_seed() + 64);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = uzt::random_spec(rng, {2, 3, 4, 6}, 3, true);
    const auto h = uzt::random_spec(rng, {2, 3, 4, 6}, 3, true);
    EXPECT_EQ(io::cyclic_spec(io::cyclic_spec(g)), g);
    const auto r = protasov_equivalent(g, h);
    EXPECT_EQ(io::protasov(io::protasov(r)), r);
    for (const std::uint64_t p : {2, 3, 5}) {
      const auto n = sylow_number(g, p);
      EXPECT_EQ(io::sylow(io::sylow(n)), n);
    }
  }
  const GroupElement e(std::vector<std::uint64_t>{1, 0, 2});
  EXPECT_EQ(io::element(io::element(e)), e);
  const auto m = m0_distortion_check(4);
  EXPECT_EQ(io::m0_report(io::m0_report(m)), m);
}

TEST(RoundTrip, Archipelago) {
  const ArchipelagoPlan plan{{2, 3}, {{2, 2}, {3, 4}, {2, 5}}, true};
  EXPECT_EQ(io::plan(io::plan(plan)), plan);
  const auto a = build_archipelago(plan);
  const auto back = io::archipelago(io::archipelago(a));
  EXPECT_EQ(back.space, a.space);
  EXPECT_EQ(back.islands, a.islands);
  const auto prof = profile_of(plan);
  EXPECT_EQ(io::profile(io::profile(prof)), prof);
  const auto f = fingerprint_compare(prof, profile_of(ArchipelagoPlan{{2}, {{2, 2}}, false}));
  EXPECT_EQ(io::fingerprint(io::fingerprint(f)), f);
}

TEST(Parse, RejectsBadDocuments) {
  EXPECT_EQ(uzt::code_of([] { io::metric(json::parse(R"({"labels":["a"]})")); }), Errc::MalformedInput);
  EXPECT_EQ(uzt::code_of([] { io::metric(json::parse(R"({"labels":["a","b"],"dist":[[0,"1/0"],[1,0]]})")); }),
            Errc::MalformedInput);
  EXPECT_EQ(uzt::code_of([] { io::rational(json::parse("true")); }), Errc::MalformedInput);
  EXPECT_EQ(io::rational(json::parse("\"-6/4\"")), Rational(-3, 2));
  EXPECT_EQ(io::rational(json::parse("7")), Rational(7));
}
