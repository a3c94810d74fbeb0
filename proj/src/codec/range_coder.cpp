// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#include "plt/range_coder.hpp"

#include <algorithm>
#include <numeric>

#include "plt/error.hpp"

namespace plt {

namespace {

using u128 = unsigned __int128;
constexpr u128 kWindow = u128(1) << 64;
constexpr u128 kRenormBelow = u128(1) << 62;  // renormalize while range <= 2^62

}  // namespace

QuantizedTable QuantizedTable::build(const Distribution& d, const TokenOrder& order) {
  const std::size_t n = d.support_size();
  if (n > kTotal) throw InvalidArgument("distribution support exceeds the coder precision");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  auto entries = d.entries();
  if (!order.ascending()) {
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return order.rank(entries[a].token) < order.rank(entries[b].token); });
  }

  std::vector<std::int64_t> q(n);
  std::vector<BigInt> rem(n);
  std::int64_t sum = 0;
  BigInt scaled;
  BigInt quot;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& e = entries[idx[k]];
    mpz_mul_2exp(scaled.get_mpz_t(), e.weight.get_mpz_t(), kPrecisionBits);
    mpz_fdiv_qr(quot.get_mpz_t(), rem[k].get_mpz_t(), scaled.get_mpz_t(), d.denominator().get_mpz_t());
    q[k] = std::max<std::int64_t>(1, static_cast<std::int64_t>(quot.get_ui()));
    sum += q[k];
  }
  std::vector<std::size_t> by_remainder(n);
  std::iota(by_remainder.begin(), by_remainder.end(), 0);
  std::stable_sort(by_remainder.begin(), by_remainder.end(),
                   [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
  const auto total = static_cast<std::int64_t>(kTotal);
  // Deficit: one extra quantum to the largest remainders.
  for (std::size_t i = 0; sum < total; i = (i + 1) % n) {
    ++q[by_remainder[i]];
    ++sum;
  }
  // Excess (from the one-quantum floor): take from the smallest remainders with room.
  while (sum > total) {
    bool took = false;
    for (auto it = by_remainder.rbegin(); it != by_remainder.rend() && sum > total; ++it) {
      if (q[*it] > 1) {
        --q[*it];
        --sum;
        took = true;
      }
    }
    if (!took) throw InvalidArgument("cannot quantize distribution");
  }

  QuantizedTable table;
  table.ascending = order.ascending();
  table.tokens.reserve(n);
  table.starts.reserve(n);
  table.freqs.reserve(n);
  std::uint32_t start = 0;
  for (std::size_t k = 0; k < n; ++k) {
    table.tokens.push_back(entries[idx[k]].token);
    table.starts.push_back(start);
    table.freqs.push_back(static_cast<std::uint32_t>(q[k]));
    start += static_cast<std::uint32_t>(q[k]);
  }
  return table;
}

std::size_t QuantizedTable::index_of(Token t) const {
  if (ascending) {
    auto it = std::lower_bound(tokens.begin(), tokens.end(), t);
    return it != tokens.end() && *it == t ? static_cast<std::size_t>(it - tokens.begin()) : npos;
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == t) return i;
  }
  return npos;
}

void RangeEncoder::carry() {
  auto it = bits_.rbegin();
  for (; it != bits_.rend() && *it == 1; ++it) *it = 0;
  if (it == bits_.rend()) throw std::logic_error("range coder carry out of [0, 1)");
  *it = 1;
}

void RangeEncoder::encode(const QuantizedTable& table, std::size_t index) {
  const u128 r = range_ >> QuantizedTable::kPrecisionBits;
  const u128 start = r * table.starts[index];
  const bool last = index + 1 == table.tokens.size();
  const u128 size = last ? range_ - start : r * table.freqs[index];
  low_ += start;
  if (low_ >= kWindow) {
    carry();
    low_ -= kWindow;
  }
  range_ = size;
  while (range_ <= kRenormBelow) {
    bits_.push_back(static_cast<std::uint8_t>(low_ >> 63));
    low_ = (low_ << 1) & (kWindow - 1);
    range_ <<= 1;
  }
}

Bitstream RangeEncoder::finish() const {
  for (unsigned k = 0; k <= 64; ++k) {
    const u128 step = u128(1) << (64 - k);
    const u128 m = (low_ + step - 1) / step;
    if ((m + 1) * step > low_ + range_) continue;
    u128 value = m * step;
    RangeEncoder copy = *this;
    if (value >= kWindow) {
      copy.carry();
      value -= kWindow;
    }
    Bitstream out;
    for (auto b : copy.bits_) out.push_back(b != 0);
    for (unsigned i = 0; i < k; ++i) out.push_back(((value >> (63 - i)) & 1U) != 0);
    return out;
  }
  throw std::logic_error("range coder interval too narrow to flush");
}

Interval RangeEncoder::interval() const {
  BigInt prefix = 0;
  for (auto b : bits_) {
    prefix <<= 1;
    if (b) prefix += 1;
  }
  auto to_big = [](u128 v) {
    BigInt hi(static_cast<unsigned long>(v >> 64));
    BigInt lo(static_cast<unsigned long>(v & (kWindow - 1)));
    return BigInt((hi << 64) + lo);
  };
  BigInt low = (prefix << 64) + to_big(low_);
  BigInt high = low + to_big(range_);
  const auto shift = static_cast<mp_bitcnt_t>(64 + bits_.size());
  Rational lo(low);
  Rational hi(high);
  mpq_div_2exp(lo.get_mpq_t(), lo.get_mpq_t(), shift);
  mpq_div_2exp(hi.get_mpq_t(), hi.get_mpq_t(), shift);
  return {lo, hi};
}

RangeDecoder::RangeDecoder(const Bitstream& bits) : bits_(bits) {
  for (std::size_t i = 0; i < 64; ++i) diff_ = (diff_ << 1) | (bits_.padded(i) ? 1U : 0U);
}

RangeDecoder::u128 RangeDecoder::tail() const {
  // Width of the stream's dyadic interval in window units, at least one unit.
  const std::size_t scale = 64 + pos_;
  if (bits_.size() >= scale) return 1;
  const std::size_t shift = scale - bits_.size();
  return shift >= 66 ? (u128(1) << 66) : (u128(1) << shift);
}

std::size_t RangeDecoder::decode(const QuantizedTable& table) {
  const u128 r = range_ >> QuantizedTable::kPrecisionBits;
  const u128 slot = diff_ / r;
  auto it = std::upper_bound(table.starts.begin(), table.starts.end(), slot,
                             [](u128 v, std::uint32_t s) { return v < s; });
  // upper_bound finds the last start <= slot; the last symbol also owns the
  // leftover range beyond r * 2^31.
  const std::size_t index = static_cast<std::size_t>(it - table.starts.begin()) - 1;
  const std::size_t last = table.tokens.size() - 1;
  const u128 s = r * table.starts[index];
  const u128 e = index == last ? range_ : s + r * table.freqs[index];
  if (diff_ < s || diff_ + tail() > e) {
    throw DecodeError("bitstream is truncated or does not belong to this model");
  }
  diff_ -= s;
  range_ = e - s;
  while (range_ <= kRenormBelow) {
    range_ <<= 1;
    diff_ = (diff_ << 1) | (bits_.padded(64 + pos_) ? 1U : 0U);
    ++pos_;
  }
  return index;
}

std::size_t BitCoder::SequenceHash::operator()(const Sequence& s) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (Token t : s) {
    h ^= t;
    h *= 1099511628211ULL;
  }
  return h ^ s.size();
}

BitCoder::BitCoder(const GenerativeModel& model, std::size_t cache_limit) : model_(model), cache_limit_(cache_limit) {}

const QuantizedTable& BitCoder::table_for(std::span<const Token> prefix) {
  Sequence key(prefix.begin(), prefix.end());
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  if (cache_.size() >= cache_limit_) cache_.clear();
  return cache_.emplace(std::move(key), QuantizedTable::build(model_.conditional(prefix))).first->second;
}

RangeEncoder BitCoder::run_encoder(std::span<const Token> s) {
  RangeEncoder enc;
  const Token end = model_.vocabulary().end();
  for (std::size_t i = 0; i <= s.size(); ++i) {
    const Token t = i < s.size() ? s[i] : end;
    const QuantizedTable& table = table_for(s.first(i));
    std::size_t index = table.index_of(t);
    if (index == QuantizedTable::npos) {
      throw UnencodableError(t == end ? "END has zero probability" : "token has zero probability", i);
    }
    enc.encode(table, index);
  }
  return enc;
}

Bitstream BitCoder::encode(std::span<const Token> s) { return run_encoder(s).finish(); }

Interval BitCoder::coder_interval(std::span<const Token> s) { return run_encoder(s).interval(); }

Sequence BitCoder::decode(const Bitstream& bits, std::size_t depth_cap) {
  RangeDecoder dec(bits);
  const Token end = model_.vocabulary().end();
  Sequence out;
  for (;;) {
    const QuantizedTable& table = table_for(out);
    Token t = table.tokens[dec.decode(table)];
    if (t == end) return out;
    if (out.size() == depth_cap) throw DecodeError("no END within the decode depth cap");
    out.push_back(t);
  }
}

Bitstream encode_bits(const GenerativeModel& model, std::span<const Token> s) { return BitCoder(model).encode(s); }

Sequence decode_bits(const GenerativeModel& model, const Bitstream& bits, std::size_t depth_cap) {
  return BitCoder(model).decode(bits, depth_cap);
}

}  // namespace plt
