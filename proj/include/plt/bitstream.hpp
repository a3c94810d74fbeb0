// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "plt/rational.hpp"

namespace plt {

/// Bits packed most-significant-bit first; pad bits in the last byte are zero.
class Bitstream {
 public:
  Bitstream() = default;

  /// From a string of '0'/'1' characters.
  static Bitstream from_string(std::string_view bits);

  void push_back(bool bit);
  bool operator[](std::size_t i) const { return (bytes_[i / 8] >> (7 - i % 8)) & 1U; }
  /// Bit i, or 0 past the end.
  bool padded(std::size_t i) const { return i < bit_count_ && (*this)[i]; }

  std::size_t size() const noexcept { return bit_count_; }
  bool empty() const noexcept { return bit_count_ == 0; }
  std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }

  /// Drops bits beyond `bits` (pad bits are cleared).
  void truncate(std::size_t bits);

  /// The dyadic point 0.b1 b2 ... bL.
  Rational value() const;

  std::string to_string() const;

  /// Encoded record: little-endian u16 bit count, then ceil(bits/8) bytes.
  std::vector<std::uint8_t> to_record() const;
  /// Parses one record at the front of `data`; `consumed` receives its size.
  static Bitstream from_record(std::span<const std::uint8_t> data, std::size_t& consumed);

  bool operator==(const Bitstream&) const = default;

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t bit_count_ = 0;
};

}  // namespace plt
