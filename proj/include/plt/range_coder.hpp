// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

// Fixed-precision realization of the interval coder. A 64-bit window over the
// coding interval is renormalized one bit at a time, and carries out of the
// window ripple into bits already emitted.

#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "plt/bitstream.hpp"
#include "plt/codec.hpp"
#include "plt/distribution.hpp"
#include "plt/model.hpp"

namespace plt {

/// A conditional distribution quantized to integer frequencies summing to 2^31.
/// Largest-remainder apportionment; every nonzero-mass token gets at least one quantum.
struct QuantizedTable {
  static constexpr unsigned kPrecisionBits = 31;
  static constexpr std::uint32_t kTotal = 1U << kPrecisionBits;

  std::vector<Token> tokens;          // sigma order
  std::vector<std::uint32_t> starts;  // cumulative frequency before each token
  std::vector<std::uint32_t> freqs;
  bool ascending = true;              // tokens sorted by id

  static QuantizedTable build(const Distribution& d, const TokenOrder& order = {});

  /// Index of t in `tokens`, or npos if t has zero mass.
  std::size_t index_of(Token t) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

class RangeEncoder {
 public:
  void encode(const QuantizedTable& table, std::size_t index);

  /// Emits the shortest bitstream whose dyadic interval lies in the current coding interval.
  Bitstream finish() const;

  /// Exact current coding interval (prefix bits plus window).
  Interval interval() const;

 private:
  using u128 = unsigned __int128;
  void carry();

  std::vector<std::uint8_t> bits_;  // one entry per emitted bit; carries rewrite the tail
  u128 low_ = 0;
  u128 range_ = u128(1) << 64;
};

class RangeDecoder {
 public:
  explicit RangeDecoder(const Bitstream& bits);

  /// Decodes one symbol. Throws DecodeError when the stream's dyadic interval
  /// straddles two children, i.e. the stream is truncated or not from this model.
  std::size_t decode(const QuantizedTable& table);

 private:
  using u128 = unsigned __int128;
  u128 tail() const;

  const Bitstream& bits_;
  std::size_t pos_ = 0;  // renormalization shifts so far
  u128 diff_ = 0;        // stream value minus interval low, in window units
  u128 range_ = u128(1) << 64;
};

/// Stateful coder bound to one model; caches quantized tables per prefix.
/// One instance per thread.
class BitCoder {
 public:
  explicit BitCoder(const GenerativeModel& model, std::size_t cache_limit = 1 << 16);

  Bitstream encode(std::span<const Token> s);
  Sequence decode(const Bitstream& bits, std::size_t depth_cap = kDefaultDepthCap);

  /// Coding interval the encoder ends in for s; the emitted stream's dyadic interval sits inside it.
  Interval coder_interval(std::span<const Token> s);

 private:
  struct SequenceHash {
    std::size_t operator()(const Sequence& s) const noexcept;
  };
  const QuantizedTable& table_for(std::span<const Token> prefix);
  RangeEncoder run_encoder(std::span<const Token> s);

  const GenerativeModel& model_;
  std::size_t cache_limit_;
  std::unordered_map<Sequence, QuantizedTable, SequenceHash> cache_;
};

}  // namespace plt
