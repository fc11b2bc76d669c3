#include <gtest/gtest.h>

#include <cmath>

#include "gwm/adversary.hpp"
#include "gwm/distance.hpp"
#include "gwm/random_models.hpp"
#include "gwm/watermark.hpp"
#include "oracles.hpp"

using namespace gwm;

TEST(RandomFlip, ProbabilityExtremes) {
  std::mt19937_64 rng(1);
  auto g = oracle::random_graph(30, 0.3, rng);
  EXPECT_EQ(random_flip_attack(g, 0.0, 5), g);
  auto all = random_flip_attack(g, 1.0, 5);
  for (Vertex u = 0; u < 30; ++u)
    for (Vertex v = u + 1; v < 30; ++v) EXPECT_NE(all.has_edge(u, v), g.has_edge(u, v));
  EXPECT_THROW(random_flip_attack(g, -0.1, 1), AttackError);
}

TEST(RandomFlip, FlipCountMoments) {
  const std::size_t n = 100;
  const double p = 0.01;
  const double pairs = static_cast<double>(potential_edges(n));
  const auto g = build_graph(n, {});
  const int seeds = 500;
  double sum = 0.0;
  for (int s = 0; s < seeds; ++s) sum += static_cast<double>(random_flip_attack(g, p, s).num_edges());
  const double sigma = std::sqrt(pairs * p * (1 - p));
  EXPECT_NEAR(sum / seeds, pairs * p, 3.0 * sigma / std::sqrt(seeds));
}

TEST(RandomFlip, PerPairFrequency) {
  const auto g = path_graph(5);
  const int samples = 4000;
  std::map<std::pair<int, int>, int> flipped;
  for (int s = 0; s < samples; ++s) {
    auto h = random_flip_attack(g, 0.2, 100 + s);
    for (Vertex u = 0; u < 5; ++u)
      for (Vertex v = u + 1; v < 5; ++v) flipped[{u, v}] += h.has_edge(u, v) != g.has_edge(u, v);
  }
  const double sigma = std::sqrt(samples * 0.2 * 0.8);
  for (const auto& [pair, c] : flipped) EXPECT_NEAR(c, 0.2 * samples, 3 * sigma);
}

TEST(UniformPairs, ExactEditDistance) {
  std::mt19937_64 rng(2);
  for (std::uint64_t k : {0u, 1u, 17u, 200u, 300u, 435u}) {
    auto g = oracle::random_graph(30, 0.2, rng);
    auto h = uniform_pair_attack(g, k, k + 3);
    EXPECT_EQ(identity_distances(g, h).edit, k);
  }
}

TEST(UniformPairs, AllPairsGiveComplement) {
  std::mt19937_64 rng(3);
  auto g = oracle::random_graph(12, 0.4, rng);
  auto h = uniform_pair_attack(g, potential_edges(12), 1);
  EXPECT_EQ(h.num_edges(), potential_edges(12) - g.num_edges());
  for (const auto& e : g.edges()) EXPECT_FALSE(h.has_edge(e));
  EXPECT_THROW(uniform_pair_attack(g, potential_edges(12) + 1, 1), AttackError);
}

TEST(UniformPairs, PairsAreUniform) {
  const auto g = build_graph(4, {});
  const int samples = 6000;
  std::map<VertexPair, int> hits;
  for (int s = 0; s < samples; ++s)
    for (const auto& e : uniform_pair_attack(g, 2, s).edges()) ++hits[e];
  ASSERT_EQ(hits.size(), 6u);
  const double q = 2.0 / 6.0;
  for (const auto& [pair, c] : hits) EXPECT_NEAR(c, q * samples, 3 * std::sqrt(samples * q * (1 - q)));
}

TEST(UniformPairs, PairsForFraction) {
  EXPECT_EQ(pairs_for_fraction(10000, 1e-3), 49995u);
  EXPECT_EQ(pairs_for_fraction(10000, 0.0), 0u);
  EXPECT_EQ(pairs_for_fraction(5, 1.0), 10u);
  EXPECT_THROW(pairs_for_fraction(10, 1.5), AttackError);
}

TEST(CappedAttack, ZeroBudgetLeavesGraphUnchanged) {
  std::mt19937_64 rng(4);
  auto g = oracle::random_graph(40, 0.2, rng);
  for (const char* name : {"uniform", "high-degree-first"}) {
    AttackBudget b{0, 0, std::nullopt};
    auto r = budget_capped_attack(g, b, make_strategy(name, b, 40), 9);
    EXPECT_EQ(r.graph, g);
    EXPECT_EQ(r.applied, 0u);
  }
}

TEST(CappedAttack, PerVertexCapAppliesOneOfThree) {
  FlipStrategy star = [](const Graph&, Rng&) {
    return std::vector<VertexPair>{{0, 1}, {0, 2}, {0, 3}};
  };
  auto g = build_graph(4, {});
  auto r = budget_capped_attack(g, {10, 1, std::nullopt}, star, 1);
  EXPECT_EQ(r.applied, 1u);
  EXPECT_EQ(r.skipped, 2u);
  EXPECT_EQ(r.graph, build_graph(4, {{0, 1}}));
}

TEST(CappedAttack, RepeatedProposalsCountOnce) {
  FlipStrategy rep = [](const Graph&, Rng&) {
    return std::vector<VertexPair>{{0, 1}, {1, 0}, {2, 3}};
  };
  auto r = budget_capped_attack(build_graph(4, {}), {10, 5, std::nullopt}, rep, 1);
  EXPECT_EQ(r.applied, 2u);
  EXPECT_EQ(r.graph, build_graph(4, {{0, 1}, {2, 3}}));
}

TEST(CappedAttack, BudgetsHoldForBothStrategies) {
  std::mt19937_64 rng(5);
  auto g = oracle::random_graph(60, 0.1, rng);
  for (const char* name : {"uniform", "high-degree-first"})
    for (std::size_t total : {5u, 40u, 400u})
      for (std::size_t per : {1u, 2u, 4u}) {
        AttackBudget b{total, per, std::nullopt};
        auto r = budget_capped_attack(g, b, make_strategy(name, b, 60), total * 7 + per);
        const auto d = identity_distances(g, r.graph);
        EXPECT_EQ(d.edit, r.applied);
        EXPECT_LE(d.edit, total);
        EXPECT_LE(d.vertex, per);
      }
  AttackBudget frac{1000, 3, 0.01};
  auto r = budget_capped_attack(g, frac, make_strategy("uniform", frac, 60), 1);
  EXPECT_LE(r.applied, pairs_for_fraction(60, 0.01));
}

TEST(CappedAttack, RejectsBadInput) {
  AttackBudget b{1, 1, std::nullopt};
  EXPECT_THROW(make_strategy("greedy", b, 10), AttackError);
  EXPECT_THROW(budget_capped_attack(path_graph(3), {1, 1, 2.0}, uniform_strategy(1), 1), AttackError);
  EXPECT_THROW(budget_capped_attack(path_graph(3), b, FlipStrategy{}, 1), AttackError);
}

TEST(CappedAttack, IdentifySurvivesHighDegreeFirst) {
  const auto p = derive_constants(10000, 1000, 20, 2.75);
  const auto t = explicit_thresholds(64, 374);
  int ok = 0;
  const int trials = 50;
  for (int trial = 0; trial < trials; ++trial) {
    auto g = sample_power_law(p, 500 + trial);
    auto labels = *label(g, t, LabelMode::relaxed).labels;
    auto key = keygen(219, g.num_vertices(), labels.size(), 1, trial);
    std::vector<MarkedCopy> copies;
    std::vector<WatermarkId> ids;
    for (std::uint64_t c = 0; c < 10; ++c) {
      copies.push_back(mark(key, g, labels, ResampleSource::constant(0.5), trial * 100 + c));
      ids.push_back(copies.back().id);
    }
    const std::size_t leak = trial % 10;
    AttackBudget b{200, 1, std::nullopt};
    auto attacked =
        budget_capped_attack(copies[leak].graph, b, make_strategy("high-degree-first", b, 10000), trial);
    auto r = identify(key, labels, ids, attacked.graph, t, LabelMode::relaxed, g.num_vertices());
    ok += !r.failed() && *r.index == leak;
  }
  EXPECT_GE(ok, 45) << ok << " of " << trials;
}

TEST(AttackSpec, FromKeyValues) {
  auto s = AttackSpec::from_key_values(KeyValues::parse("attack=uniform\nfraction=0.001"));
  EXPECT_EQ(s.kind, AttackSpec::Kind::uniform);
  auto g = build_graph(100, {});
  EXPECT_EQ(s.apply(g, 1).num_edges(), pairs_for_fraction(100, 0.001));
  EXPECT_EQ(s.at_strength(0.01).apply(g, 1).num_edges(), pairs_for_fraction(100, 0.01));
  auto c = AttackSpec::from_key_values(
      KeyValues::parse("attack=capped\nmax_total=10\nmax_per_vertex=1\nstrategy=high-degree-first"));
  EXPECT_LE(identity_distances(g, c.apply(g, 2)).vertex, 1u);
  EXPECT_THROW(AttackSpec::from_key_values(KeyValues::parse("attack=uniform")), ConfigError);
  EXPECT_THROW(AttackSpec::from_key_values(KeyValues::parse("attack=nuke")), ConfigError);
}
