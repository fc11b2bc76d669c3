#include <gtest/gtest.h>

#include <iostream>

#include "properties.hpp"

using namespace gwm;

TEST(Property, FlipInvolution) {
  auto t = props::flip_involution(props::kDefaultCases, 1, &std::cerr);
  EXPECT_EQ(t.failures, 0u);
}

TEST(Property, MarkEdgeContainment) {
  auto t = props::mark_edge_containment(props::kDefaultCases, 2, &std::cerr);
  EXPECT_EQ(t.failures, 0u);
}

TEST(Property, BudgetCaps) {
  auto t = props::budget_caps(props::kDefaultCases, 3, &std::cerr);
  EXPECT_EQ(t.failures, 0u);
}

TEST(Property, Dk2Pseudometric) {
  auto t = props::dk2_pseudometric(props::kDefaultCases, 4, &std::cerr);
  EXPECT_EQ(t.failures, 0u);
}

TEST(Property, DeterministicPerSeed) {
  auto t = props::determinism(props::kDefaultCases, 5, &std::cerr);
  EXPECT_EQ(t.failures, 0u);
}

// The union normalization breaks the triangle inequality; the plain distance keeps it.
TEST(Property, NormalizedDeviationIsNotAMetric) {
  DK2Series a, b, c;
  a.add(1, 1, 1);
  c.add(1, 1, 2);
  b.add(1, 1, 1);
  for (std::size_t k = 2; k <= 10; ++k) b.add(k, k, 1);
  EXPECT_DOUBLE_EQ(dk2_deviation(a, c), 1.0);
  EXPECT_LT(dk2_deviation(a, b) + dk2_deviation(b, c), dk2_deviation(a, c));
  EXPECT_LE(dk2_distance(a, c), dk2_distance(a, b) + dk2_distance(b, c));
}
