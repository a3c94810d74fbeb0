// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "plt/distribution.hpp"
#include "plt/rational.hpp"
#include "plt/vocabulary.hpp"

namespace plt {

/// A family of exact conditional distributions P(. | x), one for every
/// prefix x. Implementations are immutable after construction, so concurrent
/// queries are safe.
class GenerativeModel {
 public:
  virtual ~GenerativeModel() = default;

  virtual const Vocabulary& vocabulary() const = 0;

  /// Distribution over user tokens, END, and possibly ESCAPE. Deterministic in `prefix`.
  virtual Distribution conditional(std::span<const Token> prefix) const = 0;

  /// Canonical model file text (see model_io). Byte-identical for identical models.
  virtual std::string serialize() const = 0;

  virtual std::string_view kind() const = 0;

  std::size_t vocab_size() const { return vocabulary().size(); }

  /// L(M): bit length of the canonical serialization.
  std::uint64_t description_bits() const { return 8 * static_cast<std::uint64_t>(serialize().size()); }
};

using ModelPtr = std::shared_ptr<const GenerativeModel>;

/// Explicit prefix -> distribution table with a fallback row.
ModelPtr table_model(Vocabulary vocab, std::map<Sequence, Distribution> entries, Distribution fallback);

/// Add-constant smoothed n-gram model over the last (order - 1) tokens,
/// padded with a begin-of-sequence marker. Every token in V and END gets
/// positive mass.
ModelPtr ngram_model(Vocabulary vocab, std::span<const Sequence> corpus, std::size_t order,
                     const Rational& smoothing);

/// Depth-1 model over `items` atomic items with p_j proportional to j^-alpha
/// (item j is token j-1). Every item is followed by END with probability 1.
ModelPtr zipf_model(std::size_t items, const Rational& alpha);

/// Exact Zipf probabilities p_1..p_M as used by zipf_model.
std::vector<Rational> zipf_probabilities(std::size_t items, const Rational& alpha);

/// Non-negative weights pi(state, action); states are prefixes.
struct PolicyTable {
  Vocabulary actions;
  std::map<Sequence, std::map<Token, Rational>> weights;
};

/// P(a | s) = pi(s, a) / sum_a' pi(s, a'). States without actions are terminal (END with probability 1).
ModelPtr from_policy(const PolicyTable& policy);

/// Scales every conditional by (1 - eps) and gives eps to ESCAPE.
ModelPtr with_escape(ModelPtr model, const Rational& epsilon);

/// KL(P1(.|x) || P2(.|x)) in bits. Throws AbsoluteContinuityError when P2 has
/// zero mass where P1 does not.
double kl_at_prefix(const GenerativeModel& m1, const GenerativeModel& m2, std::span<const Token> prefix);

/// P(s) including the final P(END | s).
Rational sequence_probability(const GenerativeModel& model, std::span<const Token> seq);

/// Draws a sequence by ancestral sampling until END. Throws DecodeError past `max_length`.
Sequence sample_sequence(const GenerativeModel& model, std::mt19937_64& rng, std::size_t max_length = 4096);

/// Parses a canonical (or hand-written) model file.
ModelPtr parse_model(std::string_view text);

}  // namespace plt
