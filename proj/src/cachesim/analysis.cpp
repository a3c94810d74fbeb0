// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#include <algorithm>
#include <cmath>

#include "plt/cachesim.hpp"
#include "plt/error.hpp"

namespace plt::cache {

namespace {

void check_capacity(const Workload& w, std::size_t k) {
  if (k < 1 || k >= w.size()) throw InvalidArgument("capacity K must satisfy 1 <= K < M");
}

// Kahan-Babuska sum of j^-alpha for j = from..to.
long double power_sum(std::uint64_t from, std::uint64_t to, long double alpha, long double& carry) {
  long double sum = 0;
  for (std::uint64_t j = from; j <= to; ++j) {
    long double term = alpha == 0 ? 1.0L : std::pow(static_cast<long double>(j), -alpha);
    long double t = sum + term;
    carry += std::fabs(sum) >= std::fabs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  return sum;
}

}  // namespace

Workload Workload::zipf(std::size_t items, double alpha) {
  if (items == 0) throw InvalidArgument("workload needs at least one item");
  if (!(alpha >= 0)) throw InvalidArgument("Zipf exponent must be >= 0");
  long double carry = 0;
  long double total = power_sum(1, items, alpha, carry) + carry;
  Workload w;
  w.p_.resize(items);
  for (std::size_t j = 0; j < items; ++j) {
    long double weight = alpha == 0 ? 1.0L : std::pow(static_cast<long double>(j + 1), -static_cast<long double>(alpha));
    w.p_[j] = static_cast<double>(weight / total);
  }
  return w;
}

Workload Workload::from_probabilities(std::vector<double> p) {
  if (p.empty()) throw InvalidArgument("workload needs at least one item");
  double total = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0)) throw InvalidArgument("workload probabilities must be positive");
    if (i > 0 && p[i] > p[i - 1]) throw InvalidArgument("workload probabilities must be nonincreasing");
    total += p[i];
  }
  if (std::fabs(total - 1) > 1e-9) throw InvalidArgument("workload probabilities must sum to 1");
  Workload w;
  w.p_ = std::move(p);
  return w;
}

double Workload::top_mass(std::size_t k) const {
  if (k > p_.size()) throw InvalidArgument("K exceeds the support size");
  long double s = 0;
  for (std::size_t i = 0; i < k; ++i) s += p_[i];
  return static_cast<double>(s);
}

void CostModel::validate() const {
  if (!(lookup >= 0) || !(compute > lookup)) throw InvalidArgument("costs must satisfy C_c > C_l >= 0");
  if (!(storage >= 0)) throw InvalidArgument("storage cost must be >= 0");
}

double boundary_gap(const Workload& w, std::size_t k) {
  check_capacity(w, k);
  return w[k - 1] - w[k];
}

double t_rank(const Workload& w, std::size_t k, double delta) {
  if (!(delta > 0 && delta < 1)) throw InvalidArgument("delta must lie in (0, 1)");
  double gap = boundary_gap(w, k);
  if (gap <= 0) return kNeverConverges;
  double pairs = static_cast<double>(k) * static_cast<double>(w.size() - k);
  return 2.0 / (gap * gap) * std::log(pairs / delta);
}

ZeroTime t_zero(const Workload& w, std::size_t k, double delta) {
  double ranking = t_rank(w, k, delta);
  double swap = static_cast<double>(k) / (2 * w[k - 1]);
  if (ranking < swap) return {ranking, ZeroTime::Branch::ranking};
  return {swap, ZeroTime::Branch::swap};
}

double expected_swap_time(const Workload& w, std::size_t k) {
  if (k < 1 || k > w.size()) throw InvalidArgument("K must satisfy 1 <= K <= M");
  double sum = 0;
  for (std::size_t j = 0; j < k; ++j) sum += 1 / w[j];
  return sum;
}

double bayesian_estimate(std::uint64_t n_a, std::uint64_t n, double prior, std::size_t k, double beta) {
  if (!(beta > 0)) throw InvalidArgument("beta must be > 0");
  if (n_a > n) throw InvalidArgument("n_a must not exceed N");
  if (n == 0) return prior;  // the formula's exact value; floating evaluation could round it
  double pseudo = beta * static_cast<double>(k);
  return (static_cast<double>(n_a) + pseudo * prior) / (static_cast<double>(n) + pseudo);
}

double retention_value(double p_hat, const CostModel& cost) { return p_hat * cost.compute - cost.storage; }

double break_even(std::uint64_t covered_size, const CostModel& cost, double p_star) {
  if (!(p_star > 0)) throw InvalidArgument("p* must be > 0");
  if (!(cost.rho() > 0)) throw InvalidArgument("rho must be > 0");
  return static_cast<double>(covered_size) * cost.compute / (p_star * cost.rho());
}

double zipf_coverage(std::uint64_t k, std::uint64_t m, double alpha) {
  if (k > m || m == 0) throw InvalidArgument("coverage needs K <= M and M >= 1");
  if (!(alpha >= 0)) throw InvalidArgument("Zipf exponent must be >= 0");
  long double head_carry = 0;
  long double tail_carry = 0;
  long double head = power_sum(1, k, alpha, head_carry);
  long double tail = power_sum(k + 1, m, alpha, tail_carry);
  head += head_carry;
  return static_cast<double>(head / (head + tail + tail_carry));
}

Invalidation selective_invalidation(const GenerativeModel& m1, const GenerativeModel& m2,
                                    std::span<const Sequence> cached, double eta) {
  Invalidation out;
  for (const auto& s : cached) {
    bool keep = false;
    try {
      keep = kl_at_prefix(m1, m2, s) <= eta;
    } catch (const AbsoluteContinuityError&) {
      keep = false;
    }
    (keep ? out.keep : out.recompute).push_back(s);
  }
  return out;
}

}  // namespace plt::cache
