// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "plt/bitstream.hpp"
#include "plt/distribution.hpp"
#include "plt/model.hpp"
#include "plt/rational.hpp"

namespace plt {

/// Half-open [low, high) inside [0, 1).
struct Interval {
  Rational low = 0;
  Rational high = 1;

  Rational width() const { return high - low; }
  bool contains(const Rational& z) const { return low <= z && z < high; }
  bool contains(const Interval& inner) const { return low <= inner.low && inner.high <= high; }
  bool operator==(const Interval&) const = default;
};

/// Code length in bits, ceil(-log2 w) + 1 for an interval of width w.
struct CodeLength {
  std::uint32_t bits = 0;

  static constexpr CodeLength unbounded() { return {std::numeric_limits<std::uint32_t>::max()}; }
  auto operator<=>(const CodeLength&) const = default;
};

/// The bijection sigma fixing the left-to-right order of sibling intervals.
/// Default-constructed orders are ascending by token id.
class TokenOrder {
 public:
  TokenOrder() = default;
  /// Uniformly random order over `token_count` ids (user tokens plus END and ESCAPE).
  static TokenOrder shuffled(std::size_t token_count, std::mt19937_64& rng);

  bool ascending() const noexcept { return rank_.empty(); }
  std::uint64_t rank(Token t) const { return ascending() || t >= rank_.size() ? t : rank_[t]; }

 private:
  std::vector<std::uint32_t> rank_;
};

/// Per-node cumulative table: start of each token is the mass of all tokens before it under sigma.
struct CumulativeTable {
  struct Row {
    Token token;
    Rational start;
    Rational mass;
  };
  std::vector<Row> rows;

  static CumulativeTable build(const Distribution& d, const TokenOrder& order = {});
};

struct IntervalCode {
  Interval interval;
  CodeLength length;
};

inline constexpr std::size_t kDefaultDepthCap = 1 << 16;

/// Exact interval coding of s followed by END.
IntervalCode encode_interval(const GenerativeModel& model, std::span<const Token> s, const TokenOrder& order = {});

/// Walks child intervals containing z until END. z must lie in [0, 1).
Sequence decode_interval(const GenerativeModel& model, const Rational& z, std::size_t depth_cap = kDefaultDepthCap,
                         const TokenOrder& order = {});

/// ceil(-log2 p) + 1 for p in (0, 1].
CodeLength code_length_of(const Rational& probability);

/// Code length of s (END included). Throws UnencodableError for zero-probability sequences.
CodeLength code_length(const GenerativeModel& model, std::span<const Token> s);

/// Range-coded bitstream for s: the shortest dyadic interval inside the coder's final interval.
Bitstream encode_bits(const GenerativeModel& model, std::span<const Token> s);

/// Inverse of encode_bits. Throws DecodeError for truncated or non-terminating streams.
Sequence decode_bits(const GenerativeModel& model, const Bitstream& bits, std::size_t depth_cap = kDefaultDepthCap);

}  // namespace plt
