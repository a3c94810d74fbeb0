// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "plt/error.hpp"
#include "plt/trie.hpp"

using namespace plt;

TEST(Plt, MaterializesEveryPrefixUpToDepth) {
  auto trie = Plt::materialize(plt::testing::fig1_pure(), 2, Rational(0));
  EXPECT_EQ(trie.node_count(), 13U);
  EXPECT_EQ(trie.root().prefix_prob, 1);
  ASSERT_NE(trie.find(Sequence{1, 0}), nullptr);
  EXPECT_EQ(trie.find(Sequence{1, 0})->prefix_prob, Rational(27, 200));
  EXPECT_EQ(trie.find(Sequence{0, 0, 0}), nullptr);
}

TEST(Plt, FigureOneNodeBA) {
  auto trie = Plt::materialize(plt::testing::fig1_two_level(), 3, Rational(0));
  ASSERT_NE(trie.find(Sequence{1, 0}), nullptr);
  EXPECT_EQ(trie.find(Sequence{1, 0})->prefix_prob, Rational(3, 20));
  EXPECT_EQ(trie.find(Sequence{1})->prefix_prob, Rational(3, 10));
  // depth-2 nodes only continue with END, so nothing lives at depth 3
  EXPECT_EQ(trie.node_count(), 13U);
}

TEST(Plt, PrunesBelowThreshold) {
  auto trie = Plt::materialize(plt::testing::fig1_pure(), 2, Rational(1, 4));
  EXPECT_EQ(trie.node_count(), 4U);
  EXPECT_EQ(trie.find(Sequence{0, 0}), nullptr);
  EXPECT_EQ(trie.prefix_probability(Sequence{0, 0}), Rational(81, 400));
}

TEST(Plt, PrefixProbabilityBeyondMaterializedDepth) {
  auto trie = Plt::materialize(plt::testing::fig1_pure(), 1, Rational(0));
  EXPECT_EQ(trie.prefix_probability(Sequence{}), 1);
  EXPECT_EQ(trie.prefix_probability(Sequence{1, 1, 2}), Rational(3, 10) * Rational(3, 10) * Rational(1, 4));
}

TEST(Plt, UpdateMixesAndRefreshesDescendants) {
  auto trie = Plt::materialize(plt::testing::fig1_pure(), 2, Rational(1, 8));
  trie.update(Sequence{}, Distribution::point_mass(0), Rational(1, 2));
  EXPECT_EQ(trie.edge_distribution(Sequence{}).probability(0), Rational(29, 40));
  EXPECT_EQ(trie.find(Sequence{0})->prefix_prob, Rational(29, 40));
  EXPECT_EQ(trie.find(Sequence{0, 0})->prefix_prob, Rational(29, 40) * Rational(9, 20));
  // P(B) = 3/20 now, so BA = 27/400 < 1/8 is dropped
  EXPECT_EQ(trie.find(Sequence{1})->prefix_prob, Rational(3, 20));
  EXPECT_EQ(trie.find(Sequence{1, 0}), nullptr);
  EXPECT_EQ(trie.prefix_probability(Sequence{1, 0}), Rational(3, 20) * Rational(9, 20));
}

TEST(Plt, UpdateNeedsMaterializedPrefix) {
  auto trie = Plt::materialize(plt::testing::fig1_pure(), 1, Rational(0));
  EXPECT_THROW(trie.update(Sequence{0, 0}, Distribution::point_mass(0), Rational(1, 2)), InvalidArgument);
  EXPECT_THROW(trie.update(Sequence{}, Distribution::point_mass(0), Rational(2)), InvalidArgument);
}

TEST(Plt, VisitsAndDump) {
  auto trie = Plt::materialize(plt::testing::fig1_two_level(), 2, Rational(0));
  trie.record_visit(Sequence{1, 0});
  trie.record_visit(Sequence{1, 2, 2});
  EXPECT_EQ(trie.root().visit_count, 2U);
  EXPECT_EQ(trie.find(Sequence{1})->visit_count, 2U);
  EXPECT_EQ(trie.find(Sequence{1, 0})->visit_count, 1U);
  std::string dump = trie.dump();
  EXPECT_EQ(dump.substr(0, dump.find('\n')), "\t1/1\t2");
  EXPECT_NE(dump.find("\nBA\t3/20\t1\n"), std::string::npos);
}

TEST(TrieMetric, LongestCommonPrefixAndInformation) {
  auto trie = Plt::materialize(plt::testing::fig1_two_level(), 2, Rational(0));
  EXPECT_EQ(longest_common_prefix(Sequence{1, 0}, Sequence{1, 2}), Sequence{1});
  EXPECT_NEAR(prefix_information(trie, Sequence{1, 0}, Sequence{1, 2}), 1.7369655941662063, 1e-12);
  EXPECT_NEAR(prefix_information(trie, Sequence{1, 0}, Sequence{1, 0}), 2.736965594166206, 1e-12);
  EXPECT_EQ(prefix_information(trie, Sequence{0}, Sequence{1}), 0.0);
  EXPECT_TRUE(std::isinf(prefix_information(trie, Sequence{1, 0, 0}, Sequence{1, 0, 0})));
}

TEST(TrieMetric, NearestCoveredTieBreaks) {
  auto trie = Plt::materialize(plt::testing::fig1_two_level(), 2, Rational(0));
  std::vector<Sequence> covered{{2}, {1, 2}, {1, 0}, {0}};
  // longest shared prefix wins
  EXPECT_EQ(nearest_covered(trie, covered, Sequence{1, 0, 1}), (Sequence{1, 0}));
  // both share "B": BA (3/20) beats BC (3/50)
  EXPECT_EQ(nearest_covered(trie, covered, Sequence{1, 1}), (Sequence{1, 0}));
  // nothing shared: A (9/20) beats C (1/4)
  std::vector<Sequence> roots{{2}, {0}};
  EXPECT_EQ(nearest_covered(trie, roots, Sequence{1}), Sequence{0});
}
