// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#include "plt/distribution.hpp"

#include <algorithm>
#include <map>

#include "plt/error.hpp"

namespace plt {

Distribution Distribution::from_weights(std::vector<std::pair<Token, BigInt>> weights) {
  std::map<Token, BigInt> merged;
  for (auto& [token, w] : weights) {
    if (sgn(w) < 0) throw InvalidArgument("negative weight for token " + std::to_string(token));
    if (sgn(w) == 0) continue;
    merged[token] += w;
  }
  Distribution d;
  for (auto& [token, w] : merged) {
    d.denominator_ += w;
    d.entries_.push_back({token, std::move(w)});
  }
  if (d.entries_.empty()) throw InvalidArgument("distribution has zero total mass");
  // Reduce by the common gcd so equal distributions compare equal structurally.
  BigInt g = d.denominator_;
  for (const auto& e : d.entries_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.weight.get_mpz_t());
    if (g == 1) break;
  }
  if (g != 1) {
    for (auto& e : d.entries_) mpz_divexact(e.weight.get_mpz_t(), e.weight.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(d.denominator_.get_mpz_t(), d.denominator_.get_mpz_t(), g.get_mpz_t());
  }
  return d;
}

Distribution Distribution::from_probabilities(std::vector<std::pair<Token, Rational>> probs) {
  Rational total = 0;
  BigInt lcm = 1;
  for (const auto& [token, p] : probs) {
    if (sgn(p) < 0) throw InvalidArgument("negative probability for token " + std::to_string(token));
    total += p;
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), p.get_den_mpz_t());
  }
  if (total != 1) {
    throw InvalidArgument("probabilities sum to " + to_string(total) + ", not exactly 1");
  }
  std::vector<std::pair<Token, BigInt>> weights;
  weights.reserve(probs.size());
  for (const auto& [token, p] : probs) {
    BigInt w = p.get_num() * (lcm / p.get_den());
    weights.emplace_back(token, std::move(w));
  }
  return from_weights(std::move(weights));
}

Distribution Distribution::point_mass(Token t) {
  Distribution d;
  d.entries_.push_back({t, BigInt(1)});
  d.denominator_ = 1;
  return d;
}

const BigInt* Distribution::weight(Token t) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), t,
                             [](const Entry& e, Token v) { return e.token < v; });
  if (it == entries_.end() || it->token != t) return nullptr;
  return &it->weight;
}

Rational Distribution::probability(Token t) const {
  const BigInt* w = weight(t);
  if (!w) return Rational(0);
  Rational q(*w, denominator_);
  q.canonicalize();
  return q;
}

Distribution Distribution::with_escape(const Rational& epsilon, Token escape) const {
  if (sgn(epsilon) <= 0 || epsilon >= 1) throw InvalidArgument("escape probability must lie in (0, 1)");
  const BigInt& en = epsilon.get_num();
  const BigInt& ed = epsilon.get_den();
  BigInt keep = ed - en;
  std::vector<std::pair<Token, BigInt>> weights;
  weights.reserve(entries_.size() + 1);
  for (const auto& e : entries_) weights.emplace_back(e.token, e.weight * keep);
  weights.emplace_back(escape, en * denominator_);
  return from_weights(std::move(weights));
}

Distribution Distribution::mix(const Distribution& other, const Rational& alpha) const {
  if (sgn(alpha) < 0 || alpha > 1) throw InvalidArgument("mixing weight must lie in [0, 1]");
  if (alpha == 0) return *this;
  if (alpha == 1) return other;
  // Common denominator: alpha.den * den_a * den_b.
  const BigInt& an = alpha.get_num();
  const BigInt& ad = alpha.get_den();
  std::vector<std::pair<Token, BigInt>> weights;
  weights.reserve(entries_.size() + other.entries_.size());
  BigInt self_scale = (ad - an) * other.denominator_;
  BigInt other_scale = an * denominator_;
  for (const auto& e : entries_) weights.emplace_back(e.token, e.weight * self_scale);
  for (const auto& e : other.entries_) weights.emplace_back(e.token, e.weight * other_scale);
  return from_weights(std::move(weights));
}

bool Distribution::operator==(const Distribution& other) const {
  return denominator_ == other.denominator_ && entries_ == other.entries_;
}

}  // namespace plt
