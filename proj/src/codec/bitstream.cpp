// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#include "plt/bitstream.hpp"

#include <limits>

#include "plt/error.hpp"

namespace plt {

Bitstream Bitstream::from_string(std::string_view bits) {
  Bitstream out;
  for (char c : bits) {
    if (c != '0' && c != '1') throw InvalidArgument("bit strings may only contain '0' and '1'");
    out.push_back(c == '1');
  }
  return out;
}

void Bitstream::push_back(bool bit) {
  if (bit_count_ % 8 == 0) bytes_.push_back(0);
  if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80U >> (bit_count_ % 8));
  ++bit_count_;
}

void Bitstream::truncate(std::size_t bits) {
  if (bits >= bit_count_) return;
  bit_count_ = bits;
  bytes_.resize((bits + 7) / 8);
  if (bits % 8 != 0) bytes_.back() &= static_cast<std::uint8_t>(0xFFU << (8 - bits % 8));
}

Rational Bitstream::value() const {
  BigInt num = 0;
  for (std::size_t i = 0; i < bit_count_; ++i) {
    num <<= 1;
    if ((*this)[i]) num += 1;
  }
  Rational q(num);
  mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), bit_count_);
  return q;
}

std::string Bitstream::to_string() const {
  std::string out;
  out.reserve(bit_count_);
  for (std::size_t i = 0; i < bit_count_; ++i) out += (*this)[i] ? '1' : '0';
  return out;
}

std::vector<std::uint8_t> Bitstream::to_record() const {
  if (bit_count_ > std::numeric_limits<std::uint16_t>::max()) {
    throw InvalidArgument("bitstream of " + std::to_string(bit_count_) + " bits exceeds the record limit");
  }
  std::vector<std::uint8_t> out;
  out.reserve(2 + bytes_.size());
  out.push_back(static_cast<std::uint8_t>(bit_count_ & 0xFF));
  out.push_back(static_cast<std::uint8_t>(bit_count_ >> 8));
  out.insert(out.end(), bytes_.begin(), bytes_.end());
  return out;
}

Bitstream Bitstream::from_record(std::span<const std::uint8_t> data, std::size_t& consumed) {
  if (data.size() < 2) throw FormatError("record header truncated", 0);
  std::size_t bits = data[0] | (static_cast<std::size_t>(data[1]) << 8);
  std::size_t nbytes = (bits + 7) / 8;
  if (data.size() < 2 + nbytes) throw FormatError("record payload truncated", 2);
  Bitstream out;
  out.bytes_.assign(data.begin() + 2, data.begin() + 2 + static_cast<std::ptrdiff_t>(nbytes));
  out.bit_count_ = bits;
  if (bits % 8 != 0 && (out.bytes_.back() & static_cast<std::uint8_t>(0xFFU >> (bits % 8))) != 0) {
    throw FormatError("record has non-zero pad bits", 1 + nbytes);
  }
  consumed = 2 + nbytes;
  return out;
}

}  // namespace plt
