// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "plt/model.hpp"

namespace plt::cache {

/// Returned by t_rank / t_zero when the boundary gap is zero.
inline constexpr double kNeverConverges = std::numeric_limits<double>::infinity();

/// Item popularities p_1 >= ... >= p_M > 0, summing to 1. Item ids are 0-based ranks.
class Workload {
 public:
  static Workload zipf(std::size_t items, double alpha);
  /// Validates order, positivity and normalization (within 1e-9).
  static Workload from_probabilities(std::vector<double> p);

  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  std::span<const double> probabilities() const noexcept { return p_; }
  /// p* = p_1 + ... + p_K.
  double top_mass(std::size_t k) const;

 private:
  std::vector<double> p_;
};

struct WorkloadSpec {
  Workload workload;
  std::uint64_t horizon = 0;
  std::uint64_t seed = 0;
};

struct CostModel {
  double compute = 1;  // C_c
  double lookup = 0;   // C_l
  double storage = 0;  // C_s

  double rho() const noexcept { return compute - lookup; }
  /// Throws InvalidArgument unless compute > lookup >= 0 and storage >= 0.
  void validate() const;
};

/// p_K - p_{K+1} (K is 1-based).
double boundary_gap(const Workload& w, std::size_t k);

/// (2 / gap^2) ln(K (M - K) / delta), or kNeverConverges when gap = 0.
double t_rank(const Workload& w, std::size_t k, double delta);

struct ZeroTime {
  enum class Branch { ranking, swap };
  double value;
  Branch branch;
};

/// min(t_rank, K / (2 p_K)).
ZeroTime t_zero(const Workload& w, std::size_t k, double delta);

/// sum_{j <= K} 1/p_j.
double expected_swap_time(const Workload& w, std::size_t k);

/// (n_a + beta K prior) / (N + beta K). Requires beta > 0 and n_a <= N.
double bayesian_estimate(std::uint64_t n_a, std::uint64_t n, double prior, std::size_t k, double beta);

/// p_hat C_c - C_s.
double retention_value(double p_hat, const CostModel& cost);

/// |C_T| C_c / (p* rho).
double break_even(std::uint64_t covered_size, const CostModel& cost, double p_star);

/// H_{K,alpha} / H_{M,alpha} with compensated summation.
double zipf_coverage(std::uint64_t k, std::uint64_t m, double alpha);

struct Invalidation {
  std::vector<Sequence> keep;
  std::vector<Sequence> recompute;
};

/// Keeps cached prefixes whose conditional KL divergence is at most eta bits.
/// Prefixes where m1 is not absolutely continuous w.r.t. m2 are recomputed.
Invalidation selective_invalidation(const GenerativeModel& m1, const GenerativeModel& m2,
                                    std::span<const Sequence> cached, double eta);

enum class PolicyKind { prior, lfu, lru, bayesian };

std::string to_string(PolicyKind kind);
PolicyKind parse_policy(const std::string& name);

struct BayesianOptions {
  double beta = 1;
  bool warm_start = true;  // preload the top-K items by prior
};

/// A capacity-K cache fed one request at a time.
class CachePolicy {
 public:
  virtual ~CachePolicy() = default;
  /// Serves one request and updates the state. Returns true on a hit.
  virtual bool request(std::size_t item) = 0;
  virtual bool contains(std::size_t item) const = 0;
  /// Resident items, ascending.
  virtual std::vector<std::size_t> contents() const = 0;
  virtual PolicyKind kind() const = 0;
};

std::unique_ptr<CachePolicy> make_policy(PolicyKind kind, const Workload& w, std::size_t k,
                                         const CostModel& cost, const BayesianOptions& bayes = {});

/// LFU with admission: a missed item enters a full cache only if its count,
/// current request included, is strictly above the smallest resident count.
/// The victim has the smallest count; count ties evict the least recently
/// requested, then the higher id.
class LfuCache : public CachePolicy {
 public:
  LfuCache(std::size_t items, std::size_t k);
  bool request(std::size_t item) override;
  bool contains(std::size_t item) const override { return resident_[item]; }
  std::vector<std::size_t> contents() const override;
  PolicyKind kind() const override { return PolicyKind::lfu; }
  std::uint64_t count(std::size_t item) const { return counts_[item]; }

 private:
  struct Key {
    std::uint64_t count;
    std::uint64_t last;
    std::size_t id;
    bool operator<(const Key& o) const;
  };
  std::size_t k_;
  std::uint64_t clock_ = 0;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> last_;
  std::vector<bool> resident_;
  std::set<Key> order_;  // residents, eviction candidate first
};

/// Bayesian retention: items are ranked by V(a) = p_hat(a) C_c - C_s. A missed
/// item is admitted when V > 0 and (if full) V exceeds the smallest resident V;
/// residents whose V drops to 0 or below are released. beta = 0 ranks by raw
/// counts and reproduces LfuCache exactly (cold start).
class BayesianCache : public CachePolicy {
 public:
  BayesianCache(const Workload& w, std::size_t k, const CostModel& cost, const BayesianOptions& options);
  bool request(std::size_t item) override;
  bool contains(std::size_t item) const override { return resident_[item]; }
  std::vector<std::size_t> contents() const override;
  PolicyKind kind() const override { return PolicyKind::bayesian; }
  double estimate(std::size_t item) const;
  double value(std::size_t item) const;

 private:
  struct Key {
    double score;
    std::uint64_t last;
    std::size_t id;
    bool operator<(const Key& o) const;
  };
  double score(std::size_t item) const;
  Key key(std::size_t item) const { return {score(item), last_[item], item}; }

  const Workload* w_;
  std::size_t k_;
  CostModel cost_;
  BayesianOptions options_;
  std::uint64_t clock_ = 0;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> last_;
  std::vector<bool> resident_;
  std::set<Key> order_;
};

/// Every sampled step t reports the cost of request t+1 served by the state
/// reached after t requests.
struct StepStats {
  std::uint64_t t = 0;
  double cost_mean = 0;  // E[cost | state] = C_c - rho * sum of resident p
  double cost_se = 0;
  double realized_cost_mean = 0;
  double realized_cost_se = 0;
  double hit_probability = 0;  // mean resident mass
  double realized_hit_rate = 0;
  double mismatch = 0;        // P(cache != top-K)
  double gap_mean = 0;        // E[cost_policy - cost_prior], paired within replications
  double gap_se = 0;
};

struct PolicyReport {
  PolicyKind kind;
  std::vector<StepStats> steps;
};

struct SimulationOptions {
  std::vector<PolicyKind> policies{PolicyKind::prior, PolicyKind::lfu};
  std::uint64_t replications = 1000;
  double delta = 0.5;
  BayesianOptions bayes;
  /// Extra sampled steps on top of the geometric grid and the T_0 / T_rank markers.
  std::vector<std::uint64_t> extra_steps;
  /// Requests replayed one by one; later sampled steps are drawn from the exact
  /// count distribution (LFU: top-K counts, LRU: last K distinct, bayesian: top-K scores).
  std::uint64_t direct_limit = 1 << 16;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct CacheSimReport {
  std::size_t items = 0;
  std::size_t capacity = 0;
  CostModel cost;
  double p_star = 0;
  double gap = 0;
  double t_rank = 0;
  ZeroTime t_zero{0, ZeroTime::Branch::ranking};
  double swap_time_formula = 0;
  double prior_analytic_cost = 0;
  std::uint64_t replications = 0;
  std::vector<std::uint64_t> steps;
  std::vector<double> swap_pending;  // P(T_swap > t) per step
  std::vector<PolicyReport> policies;

  const PolicyReport& policy(PolicyKind kind) const;
};

/// Geometric grid 1, 2, 4, ... up to horizon, plus the markers and extras that fall within it.
std::vector<std::uint64_t> sampled_steps(std::uint64_t horizon, std::span<const double> markers,
                                         std::span<const std::uint64_t> extra);

CacheSimReport simulate(const WorkloadSpec& spec, std::size_t k, const CostModel& cost,
                        const SimulationOptions& options = {});

/// Seed of replication `index`, split from the campaign seed.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

struct MisrankReport {
  std::vector<std::uint64_t> steps;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (j, l), j <= K < l, 0-based
  std::vector<std::vector<double>> frequency;            // [step][pair]: P(n_j <= n_l)
  std::uint64_t replications = 0;
};

/// Empirical frequency with which a boundary pair is misranked by request counts.
MisrankReport misrank_frequency(const Workload& w, std::size_t k, std::span<const std::uint64_t> steps,
                                std::uint64_t replications, std::uint64_t seed);

/// Samples of the first time every one of the K most popular items has been requested.
std::vector<std::uint64_t> swap_times(const Workload& w, std::size_t k, std::uint64_t replications,
                                      std::uint64_t seed);

struct Campaign {
  WorkloadSpec spec;
  std::size_t capacity = 1;
  CostModel cost;
  SimulationOptions options;
};

/// key = value lines; `#` starts a comment. Keys: workload (zipf|explicit), items,
/// alpha, probabilities, capacity, compute_cost, lookup_cost, storage_cost,
/// horizon, replications, policies, seed (optional), delta, beta, bayesian_start (warm|cold),
/// extra_steps, direct_limit, threads.
Campaign parse_campaign(const std::string& text);

enum class ReportFormat { csv, text };

/// Columns: policy,t,cost,cost_se,realized_cost,realized_cost_se,hit_probability,
/// realized_hit_rate,mismatch,swap_pending,gap_vs_prior,gap_se
void write_report(std::ostream& out, const CacheSimReport& report, ReportFormat format);

}  // namespace plt::cache
