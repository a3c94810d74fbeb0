// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#include <algorithm>
#include <list>
#include <unordered_map>

#include "plt/cachesim.hpp"
#include "plt/error.hpp"

namespace plt::cache {

namespace {

class PriorCache : public CachePolicy {
 public:
  explicit PriorCache(std::size_t k) : k_(k) {}
  bool request(std::size_t item) override { return item < k_; }
  bool contains(std::size_t item) const override { return item < k_; }
  std::vector<std::size_t> contents() const override {
    std::vector<std::size_t> out(k_);
    for (std::size_t i = 0; i < k_; ++i) out[i] = i;
    return out;
  }
  PolicyKind kind() const override { return PolicyKind::prior; }

 private:
  std::size_t k_;
};

class LruCache : public CachePolicy {
 public:
  LruCache(std::size_t items, std::size_t k) : k_(k), where_(items, order_.end()) {}

  bool request(std::size_t item) override {
    auto it = where_[item];
    if (it != order_.end()) {
      order_.splice(order_.begin(), order_, it);
      return true;
    }
    if (order_.size() == k_) {
      where_[order_.back()] = order_.end();
      order_.pop_back();
    }
    order_.push_front(item);
    where_[item] = order_.begin();
    return false;
  }
  bool contains(std::size_t item) const override { return where_[item] != order_.end(); }
  std::vector<std::size_t> contents() const override {
    std::vector<std::size_t> out(order_.begin(), order_.end());
    std::sort(out.begin(), out.end());
    return out;
  }
  PolicyKind kind() const override { return PolicyKind::lru; }

 private:
  std::size_t k_;
  std::list<std::size_t> order_;  // most recent first
  std::vector<std::list<std::size_t>::iterator> where_;
};

}  // namespace

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::prior: return "prior";
    case PolicyKind::lfu: return "lfu";
    case PolicyKind::lru: return "lru";
    case PolicyKind::bayesian: return "bayesian";
  }
  return "?";
}

PolicyKind parse_policy(const std::string& name) {
  for (auto kind : {PolicyKind::prior, PolicyKind::lfu, PolicyKind::lru, PolicyKind::bayesian}) {
    if (to_string(kind) == name) return kind;
  }
  throw InvalidArgument("unknown policy '" + name + "'");
}

bool LfuCache::Key::operator<(const Key& o) const {
  if (count != o.count) return count < o.count;
  if (last != o.last) return last < o.last;
  return id > o.id;
}

LfuCache::LfuCache(std::size_t items, std::size_t k)
    : k_(k), counts_(items, 0), last_(items, 0), resident_(items, false) {
  if (k == 0) throw InvalidArgument("capacity must be >= 1");
}

bool LfuCache::request(std::size_t item) {
  ++clock_;
  if (resident_[item]) {
    order_.erase({counts_[item], last_[item], item});
    ++counts_[item];
    last_[item] = clock_;
    order_.insert({counts_[item], last_[item], item});
    return true;
  }
  ++counts_[item];
  last_[item] = clock_;
  if (order_.size() == k_) {
    auto victim = order_.begin();
    if (counts_[item] <= victim->count) return false;
    resident_[victim->id] = false;
    order_.erase(victim);
  }
  order_.insert({counts_[item], last_[item], item});
  resident_[item] = true;
  return false;
}

std::vector<std::size_t> LfuCache::contents() const {
  std::vector<std::size_t> out;
  for (const auto& key : order_) out.push_back(key.id);
  std::sort(out.begin(), out.end());
  return out;
}

bool BayesianCache::Key::operator<(const Key& o) const {
  if (score != o.score) return score < o.score;
  if (last != o.last) return last < o.last;
  return id > o.id;
}

BayesianCache::BayesianCache(const Workload& w, std::size_t k, const CostModel& cost,
                             const BayesianOptions& options)
    : w_(&w), k_(k), cost_(cost), options_(options), counts_(w.size(), 0), last_(w.size(), 0),
      resident_(w.size(), false) {
  if (k == 0) throw InvalidArgument("capacity must be >= 1");
  if (!(options.beta >= 0)) throw InvalidArgument("beta must be >= 0");
  if (options.warm_start && options.beta > 0) {
    for (std::size_t i = 0; i < std::min(k, w.size()); ++i) {
      if (value(i) <= 0) continue;
      resident_[i] = true;
      order_.insert(key(i));
    }
  }
}

double BayesianCache::score(std::size_t item) const {
  return static_cast<double>(counts_[item]) + options_.beta * static_cast<double>(k_) * (*w_)[item];
}

double BayesianCache::estimate(std::size_t item) const {
  if (options_.beta > 0) return bayesian_estimate(counts_[item], clock_, (*w_)[item], k_, options_.beta);
  return clock_ == 0 ? 0 : static_cast<double>(counts_[item]) / static_cast<double>(clock_);
}

double BayesianCache::value(std::size_t item) const { return retention_value(estimate(item), cost_); }

bool BayesianCache::request(std::size_t item) {
  ++clock_;
  bool hit = resident_[item];
  if (hit) order_.erase(key(item));
  ++counts_[item];
  last_[item] = clock_;
  if (hit) {
    order_.insert(key(item));
  } else if (value(item) > 0) {
    Key incoming = key(item);
    bool admit = true;
    if (order_.size() == k_) {
      auto victim = order_.begin();
      admit = victim->score < incoming.score;
      if (admit) {
        resident_[victim->id] = false;
        order_.erase(victim);
      }
    }
    if (admit) {
      order_.insert(incoming);
      resident_[item] = true;
    }
  }
  while (!order_.empty() && value(order_.begin()->id) <= 0) {
    resident_[order_.begin()->id] = false;
    order_.erase(order_.begin());
  }
  return hit;
}

std::vector<std::size_t> BayesianCache::contents() const {
  std::vector<std::size_t> out;
  for (const auto& key : order_) out.push_back(key.id);
  std::sort(out.begin(), out.end());
  return out;
}

std::unique_ptr<CachePolicy> make_policy(PolicyKind kind, const Workload& w, std::size_t k,
                                         const CostModel& cost, const BayesianOptions& bayes) {
  if (k == 0 || k > w.size()) throw InvalidArgument("capacity must satisfy 1 <= K <= M");
  switch (kind) {
    case PolicyKind::prior: return std::make_unique<PriorCache>(k);
    case PolicyKind::lfu: return std::make_unique<LfuCache>(w.size(), k);
    case PolicyKind::lru: return std::make_unique<LruCache>(w.size(), k);
    case PolicyKind::bayesian: return std::make_unique<BayesianCache>(w, k, cost, bayes);
  }
  throw InvalidArgument("unknown policy");
}

}  // namespace plt::cache
