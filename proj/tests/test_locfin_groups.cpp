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

#include <set>

#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "ultrazero/ultrazero.hpp"

using namespace ultrazero;

namespace {

GroupElement el(std::vector<std::uint64_t> d) { return GroupElement(std::move(d)); }

CyclicSumSpec inf(std::uint64_t a) { return CyclicSumSpec({{a, std::nullopt}}); }

}  // namespace

// --------------------------------------------------------------------- specs

TEST(CyclicSumSpec, Expansion) {
  const CyclicSumSpec s({{2, 2}, {3, 1}, {5, std::nullopt}});
  EXPECT_EQ(s.orders(5), (std::vector<std::uint64_t>{2, 2, 3, 5, 5}));
  EXPECT_FALSE(s.is_finite());
  EXPECT_FALSE(s.length());
  const CyclicSumSpec f = CyclicSumSpec::of_orders({2, 3, 2});
  EXPECT_EQ(f.length(), 3u);
  EXPECT_EQ(uzt::code_of([&] { f.orders(4); }), Errc::RadiusExceedsSpec);
}

TEST(CyclicSumSpec, TailIsRoundRobin) {
  const CyclicSumSpec s({{2, std::nullopt}, {3, 1}, {4, std::nullopt}});
  EXPECT_EQ(s.orders(6), (std::vector<std::uint64_t>{2, 3, 4, 2, 4, 2}));
}

TEST(CyclicSumSpec, Rejections) {
  EXPECT_EQ(uzt::code_of([] { CyclicSumSpec({{1, 1}}); }), Errc::MalformedInput);
  EXPECT_EQ(uzt::code_of([] { CyclicSumSpec({{2, 0}}); }), Errc::MalformedInput);
  EXPECT_EQ(uzt::code_of([] { CyclicSumSpec({{2, std::nullopt}, {2, std::nullopt}}); }), Errc::MalformedInput);
}

TEST(GroupElement, TrailingZerosTrimmed) {
  EXPECT_EQ(el({1, 0, 0}), el({1}));
  EXPECT_EQ(el({0, 0}).length(), 0u);
  EXPECT_EQ(el({}).label(), "e");
  EXPECT_EQ(el({1, 0, 1}).label(), "1.0.1");
}

// --------------------------------------------------------------- d_filtration

TEST(DFiltration, Examples) {
  const auto s232 = CyclicSumSpec::of_orders({2, 3, 2});
  EXPECT_EQ(d_filtration(s232, el({1, 1, 1}), el({1, 1})), 3u);
  EXPECT_EQ(d_filtration(s232, el({1, 2}), el({1, 2})), 0u);
  const auto s22 = CyclicSumSpec::of_orders({2, 2});
  EXPECT_EQ(d_filtration(s22, el({1, 1}), el({0, 1})), 1u);
}

TEST(DFiltration, DigitOutOfRange) {
  const auto s = CyclicSumSpec::of_orders({2, 3});
  EXPECT_EQ(uzt::code_of([&] { d_filtration(s, el({2}), el({})); }), Errc::DigitOutOfRange);
  EXPECT_EQ(uzt::indices_of([&] { d_filtration(s, el({0, 3}), el({})); }), (std::vector<std::size_t>{2}));
  EXPECT_EQ(uzt::code_of([&] { d_filtration(s, el({0, 1, 1}), el({})); }), Errc::DigitOutOfRange);
}

TEST(DFiltration, MatchesSubgroupDefinition) {
  uzt::Rng rng(uzt::env_seed() + 40);
  const std::vector<std::uint64_t> pool{2, 3, 4, 5, 8, 9};
  for (int trial = 0; trial < 30; ++trial) {
    const auto spec = uzt::random_spec(rng, pool, 3);
    std::size_t r = 4;
    std::vector<std::uint64_t> orders;
    try {
      orders = spec.orders(r);
    } catch (const Error&) {
      continue;
    }
    for (int k = 0; k < 50; ++k) {
      std::vector<std::uint64_t> x(r), y(r);
      for (std::size_t i = 0; i < r; ++i) {
        x[i] = static_cast<std::uint64_t>(uzt::uniform(rng, 0, static_cast<std::int64_t>(orders[i]) - 1));
        y[i] = static_cast<std::uint64_t>(uzt::uniform(rng, 0, static_cast<std::int64_t>(orders[i]) - 1));
      }
      EXPECT_EQ(d_filtration(spec, el(x), el(y)), uzt::filtration_distance_def(orders, x, y));
    }
  }
}

// ----------------------------------------------------------------- group_ball

TEST(GroupBall, Examples) {
  const auto b2 = group_ball(CyclicSumSpec::of_orders({2}), 1);
  EXPECT_EQ(b2.size(), 2u);
  EXPECT_EQ(b2(0, 1), Rational(1));
  const auto b22 = group_ball(CyclicSumSpec::of_orders({2, 2}), 2);
  EXPECT_EQ(b22.size(), 4u);
  EXPECT_EQ(b22(*b22.index_of("1"), *b22.index_of("0.1")), Rational(2));
  const auto b3 = group_ball(CyclicSumSpec::of_orders({3}), 1);
  EXPECT_EQ(b3.distinct_distances(), (std::vector<Rational>{1}));
  EXPECT_EQ(uzt::code_of([] { group_ball(CyclicSumSpec::of_orders({2}), 2); }), Errc::RadiusExceedsSpec);
}

TEST(GroupBall, UltrametricAndLeftInvariant) {
  uzt::Rng rng(uzt::env_seed() + 41);
  const std::vector<std::uint64_t> pool{2, 3, 4, 5, 8, 9};
  int tested = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto spec = uzt::random_spec(rng, pool, 4);
    const std::size_t r = static_cast<std::size_t>(uzt::uniform(rng, 1, 4));
    std::vector<GroupElement> elems;
    try {
      elems = ball_elements(spec, r);
    } catch (const Error&) {
      continue;
    }
    ++tested;
    const auto ball = group_ball(spec, r);
    EXPECT_TRUE(is_ultrametric(ball).verdict);
    const auto pick = [&] {
      return elems[static_cast<std::size_t>(uzt::uniform(rng, 0, static_cast<std::int64_t>(elems.size()) - 1))];
    };
    for (int k = 0; k < 100; ++k) {
      const auto g = pick(), x = pick(), y = pick();
      EXPECT_EQ(d_filtration(spec, group_add(spec, g, x), group_add(spec, g, y)), d_filtration(spec, x, y));
    }
  }
  EXPECT_GT(tested, 10);
}

// --------------------------------------------------------- isometric embedding

TEST(GroupEmbedding, Examples) {
  const auto e = group_isometric_embedding(CyclicSumSpec::of_orders({2, 2}), CyclicSumSpec::of_orders({3, 3}), 2);
  EXPECT_EQ(e.source.size(), 4u);
  EXPECT_EQ(e.target.size(), 9u);
  EXPECT_FALSE(e.bijective);
  EXPECT_FALSE(isometry_defect(e.source, e.target, e.assignment));
  EXPECT_EQ(e.target.label(e.assignment[0]), "e");
  const auto id = group_isometric_embedding(CyclicSumSpec::of_orders({2, 3}), CyclicSumSpec::of_orders({2, 3}), 2);
  EXPECT_TRUE(id.bijective);
  for (std::size_t i = 0; i < id.assignment.size(); ++i) EXPECT_EQ(id.assignment[i], i);
  EXPECT_EQ(uzt::code_of([] {
              group_isometric_embedding(CyclicSumSpec::of_orders({4}), CyclicSumSpec::of_orders({2}), 1);
            }),
            Errc::IndexConditionFails);
  EXPECT_EQ(uzt::indices_of([] {
              group_isometric_embedding(CyclicSumSpec::of_orders({2, 4}), CyclicSumSpec::of_orders({2, 2}), 2);
            }),
            (std::vector<std::size_t>{2}));
}

TEST(GroupEmbedding, RandomPairsAreIsometric) {
  uzt::Rng rng(uzt::env_seed() + 42);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t r = static_cast<std::size_t>(uzt::uniform(rng, 1, 3));
    std::vector<std::uint64_t> a(r), b(r);
    for (std::size_t i = 0; i < r; ++i) {
      a[i] = static_cast<std::uint64_t>(uzt::uniform(rng, 2, 5));
      b[i] = a[i] + static_cast<std::uint64_t>(uzt::uniform(rng, 0, 2));
    }
    const auto e = group_isometric_embedding(CyclicSumSpec::of_orders(a), CyclicSumSpec::of_orders(b), r);
    EXPECT_FALSE(isometry_defect(e.source, e.target, e.assignment));
    EXPECT_EQ(std::set<std::size_t>(e.assignment.begin(), e.assignment.end()).size(), e.assignment.size());
    EXPECT_EQ(e.bijective, a == b);
  }
}

// A ball rewritten through its own filtration is the same group, isometrically.
TEST(GroupEmbedding, FiltrationRoundTrip) {
  uzt::Rng rng(uzt::env_seed() + 43);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t r = static_cast<std::size_t>(uzt::uniform(rng, 1, 4));
    std::vector<std::uint64_t> a(r);
    for (auto& x : a) x = static_cast<std::uint64_t>(uzt::uniform(rng, 2, 5));
    const auto spec = CyclicSumSpec::of_orders(a);
    const auto ball = group_ball(spec, r);
    const auto again = spec_from_filtration(ball, *ball.index_of("e"));
    EXPECT_EQ(again.orders(r), a);
    const auto e = group_isometric_embedding(spec, again, r);
    EXPECT_TRUE(e.bijective);
    EXPECT_FALSE(isometry_defect(e.source, e.target, e.assignment));
  }
}

// ------------------------------------------------------------------ Sylow

TEST(Sylow, Examples) {
  EXPECT_EQ(sylow_number(CyclicSumSpec::of_orders({2, 4, 3, 5}), 2).str(), "8");
  EXPECT_TRUE(sylow_number(inf(2), 2).is_infinite());
  EXPECT_EQ(sylow_number(inf(2), 2).str(), "inf");
  EXPECT_EQ(sylow_number(CyclicSumSpec::of_orders({3}), 7).str(), "1");
  EXPECT_EQ(uzt::code_of([] { sylow_number(CyclicSumSpec::of_orders({3}), 6); }), Errc::NotPrime);
}

TEST(Sylow, MatchesTorsionCount) {
  uzt::Rng rng(uzt::env_seed() + 44);
  const std::vector<std::uint64_t> pool{2, 3, 4, 5, 6, 8, 9, 12};
  for (int trial = 0; trial < 100; ++trial) {
    const auto spec = uzt::random_spec(rng, pool, 4);
    for (const std::uint64_t p : {2, 3, 5, 7}) {
      const auto n = sylow_number(spec, p);
      const auto count = uzt::sylow_count(spec, p);
      ASSERT_EQ(n.is_infinite(), !count.has_value());
      if (count) EXPECT_EQ(n.str(), std::to_string(*count));
    }
  }
}

TEST(Protasov, Examples) {
  const auto r1 = protasov_equivalent(inf(2), inf(4));
  EXPECT_TRUE(r1.equivalent);
  EXPECT_FALSE(r1.witness);
  const auto r2 = protasov_equivalent(inf(2), CyclicSumSpec({{2, std::nullopt}, {3, 1}}));
  EXPECT_FALSE(r2.equivalent);
  EXPECT_EQ(r2.witness, 3u);
  ASSERT_EQ(r2.table.size(), 2u);
  EXPECT_EQ(r2.table[1].g.str(), "1");
  EXPECT_EQ(r2.table[1].h.str(), "3");
  const auto spec = CyclicSumSpec::of_orders({6, 10});
  EXPECT_TRUE(protasov_equivalent(spec, spec).equivalent);
}

TEST(Protasov, FiniteGroupsCompareOrdersPrimeByPrime) {
  EXPECT_TRUE(protasov_equivalent(CyclicSumSpec::of_orders({6}), CyclicSumSpec::of_orders({2, 3})).equivalent);
  EXPECT_FALSE(protasov_equivalent(CyclicSumSpec::of_orders({4}), CyclicSumSpec::of_orders({2, 3})).equivalent);
}

// ---------------------------------------------------------------------- M0

TEST(M0, EncodeExamples) {
  EXPECT_EQ(m0_encode(el({})), 0u);
  EXPECT_EQ(m0_encode(el({1})), 2u);
  EXPECT_EQ(m0_encode(el({1, 0, 1})), 20u);
  EXPECT_EQ(uzt::code_of([] { m0_encode(CyclicSumSpec::of_orders({2, 3}), el({1})); }), Errc::NotBinarySpec);
  EXPECT_EQ(m0_encode(inf(2), el({1, 1})), 8u);
}

TEST(M0, DigitsAndInjectivity) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t mask = 0; mask < (1u << 12); ++mask) {
    std::vector<std::uint64_t> d;
    for (int i = 0; i < 12; ++i) d.push_back((mask >> i) & 1u);
    const std::uint64_t v = m0_encode(el(d));
    EXPECT_TRUE(seen.insert(v).second);
    for (const int t : uzt::ternary_digits(v)) EXPECT_NE(t, 1);
    EXPECT_TRUE(ternary_digits_even(v));
  }
  uzt::Rng rng(uzt::env_seed() + 45);
  for (int k = 0; k < 1000; ++k) {
    std::vector<std::uint64_t> d(20);
    for (auto& x : d) x = static_cast<std::uint64_t>(uzt::uniform(rng, 0, 1));
    EXPECT_TRUE(ternary_digits_even(m0_encode(el(d))));
  }
  EXPECT_FALSE(ternary_digits_even(5));
}

TEST(M0, HandPairs) {
  const auto s = inf(2);
  // 101 vs 11: n = 3, |20 - 8| = 12, and 9 < 12 < 27
  EXPECT_EQ(d_filtration(s, el({1, 0, 1}), el({1, 1})), 3u);
  EXPECT_EQ(m0_encode(el({1, 0, 1})) - m0_encode(el({1, 1})), 12u);
  // 1 vs e: n = 1, gap 2, and 1 < 2 < 3
  EXPECT_EQ(d_filtration(s, el({1}), el({})), 1u);
}

TEST(M0, DistortionCheck) {
  const auto r = m0_distortion_check(7);
  EXPECT_EQ(r.pairs, 8128u);
  EXPECT_TRUE(r.pass());
  EXPECT_TRUE(r.sharp_bound_holds);
  EXPECT_FALSE(r.published_bound_holds);
  ASSERT_TRUE(r.recorded_witness);
  EXPECT_EQ(r.recorded_witness->gap, 12u);
  EXPECT_EQ(r.recorded_witness->distance, 3u);
  EXPECT_FALSE(r.recorded_witness_published_holds);
  EXPECT_GT(r.min_ratio, Rational(1, 3));
  EXPECT_LT(r.max_ratio, Rational(1));
  EXPECT_EQ(m0_distortion_check(1).pairs, 1u);
}

// Brute-force the sharp window 3^(n-1) < gap < 3^n over all pairs of length <= 5.
TEST(M0, SharpBoundByEnumeration) {
  std::vector<GroupElement> elems;
  for (std::uint64_t mask = 0; mask < 32; ++mask) {
    std::vector<std::uint64_t> d;
    for (int i = 0; i < 5; ++i) d.push_back((mask >> i) & 1u);
    elems.push_back(el(d));
  }
  const auto s = inf(2);
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = i + 1; j < elems.size(); ++j) {
      const std::uint64_t n = d_filtration(s, elems[i], elems[j]);
      const std::int64_t a = static_cast<std::int64_t>(m0_encode(elems[i]));
      const std::int64_t b = static_cast<std::int64_t>(m0_encode(elems[j]));
      const Rational gap(a > b ? a - b : b - a);
      EXPECT_LT(pow3(static_cast<std::int64_t>(n) - 1), gap);
      EXPECT_LT(gap, pow3(static_cast<std::int64_t>(n)));
    }
}
