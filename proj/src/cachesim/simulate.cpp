// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "plt/cachesim.hpp"
#include "plt/error.hpp"

namespace plt::cache {

namespace {

// Runs body(rep) for every replication; body must only touch per-rep state.
template <typename Body>
void for_each_replication(std::uint64_t replications, unsigned threads, Body body) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, replications));
  if (threads <= 1) {
    for (std::uint64_t r = 0; r < replications; ++r) body(r, 0U);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::uint64_t r = t; r < replications; r += threads) body(r, t);
    });
  }
  for (auto& th : pool) th.join();
}

std::discrete_distribution<std::size_t> item_sampler(const Workload& w) {
  auto p = w.probabilities();
  return std::discrete_distribution<std::size_t>(p.begin(), p.end());
}

// Request counts after n i.i.d. draws, one binomial per item.
std::vector<std::uint64_t> multinomial(const Workload& w, std::uint64_t n, std::mt19937_64& rng) {
  std::vector<std::uint64_t> counts(w.size(), 0);
  double rest = 1;
  for (std::size_t i = 0; i < w.size() && n > 0; ++i) {
    double q = i + 1 == w.size() ? 1 : std::clamp(w[i] / rest, 0.0, 1.0);
    std::binomial_distribution<std::uint64_t> draw(n, q);
    counts[i] = draw(rng);
    n -= counts[i];
    rest -= w[i];
  }
  return counts;
}

// The K largest scores; equal scores favour the lower id.
std::vector<std::size_t> top_by_score(const std::vector<double>& score, std::size_t k) {
  std::vector<std::size_t> ids(score.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k), ids.end(),
                    [&](std::size_t a, std::size_t b) { return score[a] != score[b] ? score[a] > score[b] : a < b; });
  ids.resize(k);
  return ids;
}

struct Sample {
  double cost = 0;
  double realized = 0;
  double mass = 0;
  double hit = 0;
  double mismatch = 0;
};

struct Moments {
  double sum = 0;
  double sumsq = 0;
  void add(double x) {
    sum += x;
    sumsq += x * x;
  }
  double mean(double n) const { return sum / n; }
  double se(double n) const {
    if (n < 2) return 0;
    double m = sum / n;
    double var = std::max(0.0, (sumsq - n * m * m) / (n - 1));
    return std::sqrt(var / n);
  }
};

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<std::uint64_t> sampled_steps(std::uint64_t horizon, std::span<const double> markers,
                                         std::span<const std::uint64_t> extra) {
  std::vector<std::uint64_t> steps;
  for (std::uint64_t t = 1; t <= horizon; t *= 2) {
    steps.push_back(t);
    if (t > horizon / 2) break;
  }
  if (horizon > 0) steps.push_back(horizon);
  for (double m : markers) {
    if (std::isfinite(m) && m >= 1 && m <= static_cast<double>(horizon)) steps.push_back(static_cast<std::uint64_t>(m));
  }
  for (auto t : extra) {
    if (t >= 1 && t <= horizon) steps.push_back(t);
  }
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  return steps;
}

const PolicyReport& CacheSimReport::policy(PolicyKind kind) const {
  for (const auto& p : policies) {
    if (p.kind == kind) return p;
  }
  throw InvalidArgument("policy " + to_string(kind) + " was not simulated");
}

CacheSimReport simulate(const WorkloadSpec& spec, std::size_t k, const CostModel& cost,
                        const SimulationOptions& options) {
  const Workload& w = spec.workload;
  cost.validate();
  if (k < 1 || k > w.size()) throw InvalidArgument("capacity must satisfy 1 <= K <= M");
  if (options.replications < 1) throw InvalidArgument("replications must be >= 1");
  if (options.policies.empty()) throw InvalidArgument("no policies to simulate");

  CacheSimReport report;
  report.items = w.size();
  report.capacity = k;
  report.cost = cost;
  report.p_star = w.top_mass(k);
  report.replications = options.replications;
  report.prior_analytic_cost = (1 - report.p_star) * cost.compute + report.p_star * cost.lookup;
  report.swap_time_formula = expected_swap_time(w, k);
  if (k < w.size()) {
    report.gap = boundary_gap(w, k);
    report.t_rank = t_rank(w, k, options.delta);
    report.t_zero = t_zero(w, k, options.delta);
  }
  const double markers[] = {report.t_zero.value, report.t_rank};
  report.steps = sampled_steps(spec.horizon, markers, options.extra_steps);

  std::vector<PolicyKind> kinds = options.policies;
  std::sort(kinds.begin(), kinds.end());
  kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());
  const std::size_t n_steps = report.steps.size();
  const std::size_t n_pol = kinds.size();

  // [rep][step][policy] and [rep][step]
  std::vector<Sample> samples(options.replications * n_steps * n_pol);
  std::vector<unsigned char> pending(options.replications * n_steps, 0);
  auto resident_mass = [&](const std::vector<std::size_t>& ids) {
    double m = 0;
    for (auto i : ids) m += w[i];
    return m;
  };
  auto is_optimal = [&](const std::vector<std::size_t>& ids) {
    if (ids.size() != k) return false;
    for (std::size_t i = 0; i < k; ++i) {
      if (ids[i] != i) return false;
    }
    return true;
  };

  for_each_replication(options.replications, options.threads, [&](std::uint64_t rep, unsigned) {
    std::mt19937_64 rng(stream_seed(spec.seed, rep));
    auto sampler = item_sampler(w);
    std::vector<std::unique_ptr<CachePolicy>> caches;
    for (auto kind : kinds) caches.push_back(make_policy(kind, w, k, cost, options.bayes));
    Sample* out = &samples[rep * n_steps * n_pol];
    unsigned char* out_pending = &pending[rep * n_steps];

    auto record_state = [&](std::size_t s, std::size_t p, const std::vector<std::size_t>& ids) {
      Sample& x = out[s * n_pol + p];
      x.mass = resident_mass(ids);
      x.cost = cost.compute - cost.rho() * x.mass;
      x.mismatch = is_optimal(ids) ? 0 : 1;
    };
    auto record_next = [&](std::size_t s, std::size_t p, bool hit) {
      Sample& x = out[s * n_pol + p];
      x.hit = hit ? 1 : 0;
      x.realized = hit ? cost.lookup : cost.compute;
    };

    // Direct replay.
    std::vector<bool> seen(k, false);
    std::size_t missing = k;
    std::size_t s = 0;
    std::uint64_t last_direct = 0;
    while (s < n_steps && report.steps[s] <= options.direct_limit) last_direct = report.steps[s++];
    std::size_t next = 0;
    for (std::uint64_t t = 0; t <= last_direct; ++t) {
      bool sampled = next < n_steps && report.steps[next] == t;
      if (sampled) {
        for (std::size_t p = 0; p < n_pol; ++p) record_state(next, p, caches[p]->contents());
        out_pending[next] = missing > 0 ? 1 : 0;
      }
      std::size_t item = sampler(rng);
      if (item < k && !seen[item]) {
        seen[item] = true;
        --missing;
      }
      for (std::size_t p = 0; p < n_pol; ++p) {
        bool hit = caches[p]->request(item);
        if (sampled) record_next(next, p, hit);
      }
      if (sampled) ++next;
    }

    // Jump-ahead: each remaining step is drawn from its own exact marginal.
    for (; s < n_steps; ++s) {
      std::uint64_t t = report.steps[s];
      auto counts = multinomial(w, t, rng);
      bool all_seen = true;
      for (std::size_t i = 0; i < k; ++i) all_seen = all_seen && counts[i] > 0;
      out_pending[s] = all_seen ? 0 : 1;
      std::size_t item = sampler(rng);
      for (std::size_t p = 0; p < n_pol; ++p) {
        std::vector<std::size_t> ids;
        switch (kinds[p]) {
          case PolicyKind::prior:
            ids = caches[p]->contents();
            break;
          case PolicyKind::lfu: {
            std::vector<double> score(counts.begin(), counts.end());
            ids = top_by_score(score, k);
            ids.erase(std::remove_if(ids.begin(), ids.end(), [&](std::size_t i) { return counts[i] == 0; }), ids.end());
            break;
          }
          case PolicyKind::bayesian: {
            double pseudo = options.bayes.beta * static_cast<double>(k);
            std::vector<double> score(w.size());
            for (std::size_t i = 0; i < w.size(); ++i) score[i] = static_cast<double>(counts[i]) + pseudo * w[i];
            ids = top_by_score(score, k);
            double denominator = static_cast<double>(t) + pseudo;
            ids.erase(std::remove_if(ids.begin(), ids.end(),
                                     [&](std::size_t i) {
                                       return score[i] == 0 || retention_value(score[i] / denominator, cost) <= 0;
                                     }),
                      ids.end());
            break;
          }
          case PolicyKind::lru: {
            // Walk the request history backwards until K distinct items appear.
            std::vector<bool> in(w.size(), false);
            for (std::uint64_t back = 0; back < t && ids.size() < k; ++back) {
              std::size_t x = sampler(rng);
              if (!in[x]) {
                in[x] = true;
                ids.push_back(x);
              }
            }
            break;
          }
        }
        std::sort(ids.begin(), ids.end());
        record_state(s, p, ids);
        record_next(s, p, std::binary_search(ids.begin(), ids.end(), item));
      }
    }
  });

  // Deterministic merge in replication order.
  const double n = static_cast<double>(options.replications);
  std::size_t prior_index = n_pol;
  for (std::size_t p = 0; p < n_pol; ++p) {
    if (kinds[p] == PolicyKind::prior) prior_index = p;
  }
  report.swap_pending.assign(n_steps, 0);
  for (std::size_t s = 0; s < n_steps; ++s) {
    std::uint64_t c = 0;
    for (std::uint64_t r = 0; r < options.replications; ++r) c += pending[r * n_steps + s];
    report.swap_pending[s] = static_cast<double>(c) / n;
  }
  for (std::size_t p = 0; p < n_pol; ++p) {
    PolicyReport pr{kinds[p], {}};
    for (std::size_t s = 0; s < n_steps; ++s) {
      Moments cost_m, realized_m, gap_m;
      double mass = 0, hit = 0, mismatch = 0;
      for (std::uint64_t r = 0; r < options.replications; ++r) {
        const Sample& x = samples[(r * n_steps + s) * n_pol + p];
        cost_m.add(x.cost);
        realized_m.add(x.realized);
        mass += x.mass;
        hit += x.hit;
        mismatch += x.mismatch;
        double base = prior_index < n_pol ? samples[(r * n_steps + s) * n_pol + prior_index].cost : report.prior_analytic_cost;
        gap_m.add(x.cost - base);
      }
      StepStats st;
      st.t = report.steps[s];
      st.cost_mean = cost_m.mean(n);
      st.cost_se = cost_m.se(n);
      st.realized_cost_mean = realized_m.mean(n);
      st.realized_cost_se = realized_m.se(n);
      st.hit_probability = mass / n;
      st.realized_hit_rate = hit / n;
      st.mismatch = mismatch / n;
      st.gap_mean = gap_m.mean(n);
      st.gap_se = gap_m.se(n);
      pr.steps.push_back(st);
    }
    report.policies.push_back(std::move(pr));
  }
  return report;
}

MisrankReport misrank_frequency(const Workload& w, std::size_t k, std::span<const std::uint64_t> steps,
                                std::uint64_t replications, std::uint64_t seed) {
  if (k < 1 || k >= w.size()) throw InvalidArgument("capacity K must satisfy 1 <= K < M");
  if (replications < 1) throw InvalidArgument("replications must be >= 1");
  MisrankReport out;
  out.steps.assign(steps.begin(), steps.end());
  std::sort(out.steps.begin(), out.steps.end());
  out.replications = replications;
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t l = k; l < w.size(); ++l) out.pairs.emplace_back(j, l);
  }
  const std::size_t cells = out.steps.size() * out.pairs.size();
  unsigned threads = std::max(1U, std::thread::hardware_concurrency());
  std::vector<std::vector<std::uint64_t>> tallies(threads, std::vector<std::uint64_t>(cells, 0));
  for_each_replication(replications, threads, [&](std::uint64_t rep, unsigned worker) {
    std::mt19937_64 rng(stream_seed(seed, rep));
    auto sampler = item_sampler(w);
    std::vector<std::uint64_t> counts(w.size(), 0);
    std::uint64_t t = 0;
    for (std::size_t s = 0; s < out.steps.size(); ++s) {
      for (; t < out.steps[s]; ++t) ++counts[sampler(rng)];
      for (std::size_t q = 0; q < out.pairs.size(); ++q) {
        auto [j, l] = out.pairs[q];
        if (counts[j] <= counts[l]) ++tallies[worker][s * out.pairs.size() + q];
      }
    }
  });
  out.frequency.assign(out.steps.size(), std::vector<double>(out.pairs.size(), 0));
  for (std::size_t c = 0; c < cells; ++c) {
    std::uint64_t total = 0;
    for (const auto& tally : tallies) total += tally[c];
    out.frequency[c / out.pairs.size()][c % out.pairs.size()] =
        static_cast<double>(total) / static_cast<double>(replications);
  }
  return out;
}

std::vector<std::uint64_t> swap_times(const Workload& w, std::size_t k, std::uint64_t replications,
                                      std::uint64_t seed) {
  if (k < 1 || k > w.size()) throw InvalidArgument("capacity must satisfy 1 <= K <= M");
  std::vector<std::uint64_t> out(replications, 0);
  for_each_replication(replications, 0, [&](std::uint64_t rep, unsigned) {
    std::mt19937_64 rng(stream_seed(seed, rep));
    auto sampler = item_sampler(w);
    std::vector<bool> seen(k, false);
    std::size_t missing = k;
    std::uint64_t t = 0;
    while (missing > 0) {
      ++t;
      std::size_t item = sampler(rng);
      if (item < k && !seen[item]) {
        seen[item] = true;
        --missing;
      }
    }
    out[rep] = t;
  });
  return out;
}

}  // namespace plt::cache
