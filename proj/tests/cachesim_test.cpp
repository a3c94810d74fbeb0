// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "fixtures.hpp"
#include "plt/cachesim.hpp"
#include "plt/error.hpp"

using namespace plt;
using namespace plt::cache;

namespace {

const double kH10 = 7381.0 / 2520.0;

Workload zipf10() { return Workload::zipf(10, 1.0); }

}  // namespace

TEST(Workload, ZipfAndExplicit) {
  auto w = zipf10();
  EXPECT_NEAR(w[0], 1 / kH10, 1e-15);
  EXPECT_NEAR(w[9], 0.1 / kH10, 1e-15);
  EXPECT_NEAR(w.top_mass(10), 1.0, 1e-15);
  EXPECT_EQ(Workload::zipf(4, 0)[3], 0.25);
  EXPECT_THROW(Workload::from_probabilities({0.3, 0.7}), InvalidArgument);
  EXPECT_THROW(Workload::from_probabilities({0.5, 0.4}), InvalidArgument);
  EXPECT_THROW(Workload::from_probabilities({1.0, 0.0}), InvalidArgument);
}

TEST(Analysis, BoundaryGap) {
  EXPECT_EQ(boundary_gap(Workload::zipf(8, 0), 3), 0.0);
  EXPECT_NEAR(boundary_gap(zipf10(), 3), 210.0 / 7381.0, 1e-15);
  EXPECT_THROW(boundary_gap(zipf10(), 10), InvalidArgument);
  EXPECT_THROW(boundary_gap(zipf10(), 0), InvalidArgument);
}

TEST(Analysis, BoundaryGapMatchesZipfAsymptotics) {
  // gap / (alpha K^(-alpha-1) / H) -> 1, H the normalizer of the workload
  const double alpha = 1.2;
  double previous = 0;
  for (std::size_t k : {1000, 10000, 100000}) {
    auto w = Workload::zipf(4 * k, alpha);
    double normalizer = 0;
    for (std::size_t j = 1; j <= 4 * k; ++j) normalizer += std::pow(static_cast<double>(j), -alpha);
    double ratio = boundary_gap(w, k) / (alpha * std::pow(static_cast<double>(k), -alpha - 1) / normalizer);
    EXPECT_NEAR(ratio, 1.0, 2.0 / static_cast<double>(k));
    previous = ratio;
  }
  EXPECT_GT(previous, 0.99);
}

TEST(Analysis, TRank) {
  auto w = Workload::from_probabilities({0.4, 0.3, 0.2, 0.1});
  EXPECT_NEAR(t_rank(w, 2, 0.5), 415.88830833596717, 1e-9);
  EXPECT_NEAR(t_rank(Workload::from_probabilities({0.75, 0.25}), 1, 1 - 1e-12), 0.0, 1e-9);
  EXPECT_NEAR(t_rank(zipf10(), 3, 0.5), 9234.698634887445, 1e-6);
  EXPECT_EQ(t_rank(Workload::zipf(5, 0), 2, 0.5), kNeverConverges);
  EXPECT_THROW(t_rank(zipf10(), 3, 1.0), InvalidArgument);
}

TEST(Analysis, TZeroBranches) {
  auto big_gap = Workload::from_probabilities({0.45, 0.45, 0.05, 0.05});
  auto z = t_zero(big_gap, 2, 0.5);
  EXPECT_EQ(z.branch, ZeroTime::Branch::swap);
  EXPECT_NEAR(z.value, 2 / 0.9, 1e-12);
  EXPECT_NEAR(t_rank(big_gap, 2, 0.5), 25.993019270997948, 1e-9);

  auto zipf = t_zero(zipf10(), 3, 0.5);
  EXPECT_EQ(zipf.branch, ZeroTime::Branch::swap);
  EXPECT_NEAR(zipf.value, 13.180357142857142, 1e-9);

  auto uniform = t_zero(Workload::zipf(6, 0), 2, 0.5);
  EXPECT_EQ(uniform.branch, ZeroTime::Branch::swap);
  EXPECT_NEAR(uniform.value, 6.0, 1e-12);

  auto ranking = t_zero(Workload::from_probabilities({0.9, 0.1}), 1, 0.9);
  EXPECT_EQ(ranking.branch, ZeroTime::Branch::ranking);
}

TEST(Analysis, ExpectedSwapTime) {
  EXPECT_EQ(expected_swap_time(Workload::from_probabilities({0.5, 0.5}), 1), 2.0);
  EXPECT_NEAR(expected_swap_time(zipf10(), 3), 17.573809523809523, 1e-12);
  EXPECT_NEAR(expected_swap_time(Workload::zipf(4, 0), 4), 16.0, 1e-12);
}

TEST(Analysis, BayesianEstimate) {
  EXPECT_EQ(bayesian_estimate(0, 0, 0.2, 5, 1), 0.2);
  EXPECT_EQ(bayesian_estimate(0, 0, 0.037, 50, 0.01), 0.037);
  EXPECT_NEAR(bayesian_estimate(3, 10, 0.2, 5, 1), 4.0 / 15, 1e-15);
  EXPECT_NEAR(bayesian_estimate(300000000, 1000000000, 0.9, 5, 1), 0.3, 1e-8);
  EXPECT_THROW(bayesian_estimate(1, 0, 0.2, 5, 1), InvalidArgument);
  EXPECT_THROW(bayesian_estimate(0, 1, 0.2, 5, 0), InvalidArgument);
}

TEST(Analysis, RetentionValue) {
  EXPECT_GT(retention_value(1e-9, CostModel{100, 1, 0}), 0);
  EXPECT_NEAR(retention_value(0.01, CostModel{100, 1, 2}), -1.0, 1e-12);
  EXPECT_NEAR(retention_value(0.05, CostModel{100, 1, 2}), 3.0, 1e-12);
}

TEST(Analysis, BreakEven) {
  EXPECT_NEAR(break_even(1000, CostModel{1, 0, 0}, 0.52), 1923.076923076923, 1e-9);
  EXPECT_EQ(break_even(1, CostModel{1, 0, 0}, 1), 1.0);
  EXPECT_NEAR(break_even(10, CostModel{8, 4, 0}, 0.5), 2 * break_even(10, CostModel{8, 0, 0}, 0.5), 1e-12);
  EXPECT_THROW(break_even(10, CostModel{1, 0, 0}, 0), InvalidArgument);
}

TEST(Analysis, ZipfCoverage) {
  EXPECT_EQ(zipf_coverage(7, 7, 1.3), 1.0);
  EXPECT_EQ(zipf_coverage(3, 12, 0), 0.25);
  EXPECT_NEAR(zipf_coverage(1000, 1000000, 1), 0.5200870554054346, 1e-14);
  EXPECT_NEAR(zipf_coverage(3, 10, 1), (1 + 0.5 + 1.0 / 3) / kH10, 1e-15);
}

TEST(Analysis, SelectiveInvalidation) {
  auto m1 = plt::testing::fig1_two_level();
  auto m2 = table_model(plt::testing::abc(),
                        {{Sequence{}, plt::testing::fig1_root()}, {Sequence{0}, plt::testing::fig1_root()},
                         {Sequence{1}, plt::testing::fig1_root()}, {Sequence{2}, plt::testing::fig1_root()}},
                        Distribution::point_mass(3));
  std::vector<Sequence> cached{{}, {0}, {1}, {2}, {1, 0}};
  auto same = selective_invalidation(*m1, *m1, cached, 0);
  EXPECT_EQ(same.keep.size(), cached.size());
  auto diff = selective_invalidation(*m1, *m2, cached, 0);
  EXPECT_EQ(diff.recompute, std::vector<Sequence>{Sequence{1}});
  EXPECT_EQ(diff.keep.size(), 4U);
  auto loose = selective_invalidation(*m1, *m2, cached, 0.05);
  EXPECT_TRUE(loose.recompute.empty());
  auto pure = plt::testing::fig1_pure();
  auto broken = selective_invalidation(*m1, *pure, cached, 100);
  EXPECT_EQ(broken.recompute.size(), 1U);  // {B, A} puts all mass on END, which pure lacks
}

TEST(Policies, LfuAdmissionNeedsStrictlyHigherCount) {
  LfuCache lfu(5, 2);
  EXPECT_FALSE(lfu.request(0));
  EXPECT_FALSE(lfu.request(1));
  EXPECT_FALSE(lfu.request(2));  // count 1 does not beat 1
  EXPECT_EQ(lfu.contents(), (std::vector<std::size_t>{0, 1}));
  EXPECT_FALSE(lfu.request(2));  // count 2 > 1: evicts the least recent count-1 item, 0
  EXPECT_EQ(lfu.contents(), (std::vector<std::size_t>{1, 2}));
  EXPECT_TRUE(lfu.request(2));
  EXPECT_EQ(lfu.count(2), 3U);
  EXPECT_FALSE(lfu.request(0));  // count 2 beats item 1's count 1
  EXPECT_EQ(lfu.contents(), (std::vector<std::size_t>{0, 2}));
}

TEST(Policies, LruEvictsLeastRecent) {
  auto lru = make_policy(PolicyKind::lru, Workload::zipf(5, 1), 2, CostModel{});
  lru->request(0);
  lru->request(1);
  EXPECT_TRUE(lru->request(0));
  EXPECT_FALSE(lru->request(2));
  EXPECT_EQ(lru->contents(), (std::vector<std::size_t>{0, 2}));
}

TEST(Policies, PriorNeverChanges) {
  auto prior = make_policy(PolicyKind::prior, zipf10(), 3, CostModel{});
  EXPECT_FALSE(prior->request(7));
  EXPECT_TRUE(prior->request(2));
  EXPECT_EQ(prior->contents(), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Policies, BayesianWarmStartIsThePriorCache) {
  auto w = zipf10();
  BayesianCache cache(w, 3, CostModel{100, 1, 0}, {1.0, true});
  EXPECT_EQ(cache.contents(), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(cache.estimate(4), w[4]);
}

TEST(Policies, BayesianReleasesNonPositiveValue) {
  auto w = zipf10();
  // V = p_hat * 100 - 20 > 0 needs p_hat > 0.2; only item 0 (0.341) qualifies at the start.
  BayesianCache cache(w, 3, CostModel{100, 1, 20}, {1.0, true});
  EXPECT_EQ(cache.contents(), std::vector<std::size_t>{0});
  for (int i = 0; i < 20; ++i) cache.request(5);
  EXPECT_EQ(cache.contents(), std::vector<std::size_t>{5});
}

TEST(Policies, BayesianWithZeroBetaMatchesLfu) {
  auto w = zipf10();
  std::mt19937_64 rng(1);
  std::discrete_distribution<std::size_t> draw(w.probabilities().begin(), w.probabilities().end());
  for (int trace = 0; trace < 50; ++trace) {
    LfuCache lfu(w.size(), 3);
    BayesianCache bayes(w, 3, CostModel{100, 1, 0}, {0.0, false});
    for (int i = 0; i < 300; ++i) {
      std::size_t item = draw(rng);
      ASSERT_EQ(lfu.request(item), bayes.request(item));
      ASSERT_EQ(lfu.contents(), bayes.contents());
    }
  }
}

TEST(Simulation, SampledSteps) {
  const double markers[] = {13.18, kNeverConverges};
  const std::uint64_t extra[] = {100, 5000};
  EXPECT_EQ(sampled_steps(100, markers, extra), (std::vector<std::uint64_t>{1, 2, 4, 8, 13, 16, 32, 64, 100}));
}

TEST(Simulation, FullCacheHitsOnceEverythingWasSeen) {
  WorkloadSpec spec{Workload::zipf(4, 1), 64, 17};
  SimulationOptions opt;
  opt.policies = {PolicyKind::prior, PolicyKind::lfu, PolicyKind::lru, PolicyKind::bayesian};
  opt.replications = 200;
  auto report = simulate(spec, 4, CostModel{10, 1, 0}, opt);
  for (const auto& st : report.policy(PolicyKind::prior).steps) {
    EXPECT_EQ(st.realized_hit_rate, 1.0);
    EXPECT_EQ(st.cost_mean, 1.0);
  }
  EXPECT_EQ(report.policy(PolicyKind::lfu).steps.back().hit_probability, 1.0 - 0.0);
  for (auto kind : {PolicyKind::lfu, PolicyKind::lru}) {
    const auto& steps = report.policy(kind).steps;
    EXPECT_LT(steps.front().hit_probability, 1.0);
    for (const auto& st : steps) {
      EXPECT_GE(st.cost_mean, 1.0);
      EXPECT_LE(st.cost_mean, 10.0);
      EXPECT_GE(st.gap_mean, 0.0);
    }
  }
}

TEST(Simulation, ReproducibleAndThreadIndependent) {
  WorkloadSpec spec{Workload::zipf(50, 1.1), 3000, 99};
  SimulationOptions opt;
  opt.policies = {PolicyKind::prior, PolicyKind::lfu, PolicyKind::lru, PolicyKind::bayesian};
  opt.replications = 64;
  opt.direct_limit = 1000;
  opt.threads = 1;
  auto a = simulate(spec, 5, CostModel{100, 1, 0}, opt);
  opt.threads = 4;
  auto b = simulate(spec, 5, CostModel{100, 1, 0}, opt);
  std::ostringstream ta, tb;
  write_report(ta, a, ReportFormat::csv);
  write_report(tb, b, ReportFormat::csv);
  EXPECT_EQ(ta.str(), tb.str());
  spec.seed = 100;
  auto c = simulate(spec, 5, CostModel{100, 1, 0}, opt);
  std::ostringstream tc;
  write_report(tc, c, ReportFormat::csv);
  EXPECT_NE(ta.str(), tc.str());
}

TEST(Simulation, PriorCostMatchesAnalytic) {
  WorkloadSpec spec{zipf10(), 256, 4};
  SimulationOptions opt;
  opt.replications = 4000;
  auto report = simulate(spec, 3, CostModel{100, 1, 0}, opt);
  double p_star = (1 + 0.5 + 1.0 / 3) / kH10;
  EXPECT_NEAR(report.prior_analytic_cost, (1 - p_star) * 100 + p_star, 1e-12);
  for (const auto& st : report.policy(PolicyKind::prior).steps) {
    EXPECT_NEAR(st.cost_mean, report.prior_analytic_cost, 1e-9);
    EXPECT_NEAR(st.realized_cost_mean, report.prior_analytic_cost, 5 * st.realized_cost_se);
  }
}

TEST(Simulation, JumpAheadAgreesWithReplay) {
  // Same sampled step reached by replay (limit high) and by count sampling (limit low).
  WorkloadSpec spec{Workload::zipf(20, 1.0), 4096, 8};
  SimulationOptions opt;
  opt.policies = {PolicyKind::prior, PolicyKind::lfu, PolicyKind::lru};
  opt.replications = 3000;
  auto replay = simulate(spec, 4, CostModel{100, 1, 0}, opt);
  opt.direct_limit = 16;
  auto jump = simulate(spec, 4, CostModel{100, 1, 0}, opt);
  for (auto kind : {PolicyKind::lfu, PolicyKind::lru}) {
    const auto& a = replay.policy(kind).steps.back();
    const auto& b = jump.policy(kind).steps.back();
    double se = std::hypot(a.cost_se, b.cost_se);
    EXPECT_NEAR(a.cost_mean, b.cost_mean, 4 * se + 1e-9) << to_string(kind);
  }
  EXPECT_NEAR(replay.swap_pending.back(), jump.swap_pending.back(), 0.01);
}

TEST(Simulation, MisrankAndSwapTimes) {
  auto w = zipf10();
  const std::uint64_t steps[] = {10, 100};
  auto mr = misrank_frequency(w, 3, steps, 2000, 5);
  EXPECT_EQ(mr.pairs.size(), 21U);
  for (std::size_t q = 0; q < mr.pairs.size(); ++q) EXPECT_LE(mr.frequency[1][q], mr.frequency[0][q] + 0.05);
  auto times = swap_times(w, 3, 20000, 6);
  double mean = std::accumulate(times.begin(), times.end(), 0.0) / static_cast<double>(times.size());
  EXPECT_NEAR(mean, 1739903.0 / 151200.0, 0.3);
}

TEST(Campaign, ParsesKeysAndReportsColumns) {
  auto c = parse_campaign(
      "# test\nworkload = zipf\nitems = 20\nalpha = 1\ncapacity = 3\ncompute_cost = 10\nlookup_cost = 1\n"
      "horizon = 50\nreplications = 10\npolicies = prior, lru\nseed = 3\nbayesian_start = cold\n");
  EXPECT_EQ(c.spec.workload.size(), 20U);
  EXPECT_EQ(c.capacity, 3U);
  EXPECT_EQ(c.options.policies, (std::vector<PolicyKind>{PolicyKind::prior, PolicyKind::lru}));
  EXPECT_FALSE(c.options.bayes.warm_start);
  auto report = simulate(c.spec, c.capacity, c.cost, c.options);
  std::ostringstream csv;
  write_report(csv, report, ReportFormat::csv);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')),
            "policy,t,cost,cost_se,realized_cost,realized_cost_se,hit_probability,realized_hit_rate,mismatch,"
            "swap_pending,gap_vs_prior,gap_se");
  EXPECT_THROW(parse_campaign("workload = zipf\nitems = 3\n"), FormatError);
  EXPECT_THROW(parse_campaign("workload = zipf\ncolour = red\n"), FormatError);
  EXPECT_THROW(parse_campaign("workload = explicit\nprobabilities = 0.2, 0.8\ncapacity = 1\nhorizon = 1\n"
                              "compute_cost = 2\n"),
               FormatError);
}
