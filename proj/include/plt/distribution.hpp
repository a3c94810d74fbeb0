// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "plt/rational.hpp"
#include "plt/vocabulary.hpp"

namespace plt {

/// Exact conditional distribution P(. | x) over tokens, stored as integer
/// weights over a common denominator. Entries are sorted by token id, weights
/// are strictly positive, and the weights sum to the denominator exactly.
class Distribution {
 public:
  struct Entry {
    Token token;
    BigInt weight;
    bool operator==(const Entry&) const = default;
  };

  Distribution() = default;

  /// Normalizes non-negative integer weights. Zero weights are dropped;
  /// duplicate tokens are merged. Throws if the total is zero.
  static Distribution from_weights(std::vector<std::pair<Token, BigInt>> weights);

  /// Builds from exact probabilities, which must be non-negative and sum to exactly 1.
  static Distribution from_probabilities(std::vector<std::pair<Token, Rational>> probs);

  static Distribution point_mass(Token t);

  std::span<const Entry> entries() const noexcept { return entries_; }
  const BigInt& denominator() const noexcept { return denominator_; }
  std::size_t support_size() const noexcept { return entries_.size(); }

  Rational probability(Token t) const;
  const BigInt* weight(Token t) const;

  /// (1 - eps) * P on every existing token plus eps on `escape`.
  Distribution with_escape(const Rational& epsilon, Token escape) const;

  /// (1 - alpha) * this + alpha * other, exactly.
  Distribution mix(const Distribution& other, const Rational& alpha) const;

  bool operator==(const Distribution& other) const;

 private:
  std::vector<Entry> entries_;
  BigInt denominator_ = 0;
};

}  // namespace plt
