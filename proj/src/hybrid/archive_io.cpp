// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

// Archive layout (all integers little-endian):
//
//   "PLTA" u8:version=1 u8:flags u32:tau u32:dataset_size u16:len epsilon-text
//   model block:    u32:len  canonical model text
//   covered block:  u32:len  u32:count  { u32:index  u16:bits  bytes }*
//   residual block: u32:len  u32:extra_count  u32:names  { u16:len bytes }*
//                            u32:count  { u32:index  varint:length  packed tokens }*
//                            u32:aliases  { u32:index  u32:covered_position }*
//
// flags bit 0 marks a lossy archive (aliases present).

#include <cstring>

#include "plt/error.hpp"
#include "plt/hybrid.hpp"
#include "raw_code.hpp"

namespace plt {

namespace {

constexpr std::uint8_t kVersion = 1;

void put_u16(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_block(std::vector<std::uint8_t>& out, const std::vector<std::uint8_t>& block) {
  if (block.size() > UINT32_MAX) throw InvalidArgument("archive block too large");
  put_u32(out, static_cast<std::uint32_t>(block.size()));
  out.insert(out.end(), block.begin(), block.end());
}

class Reader {
 public:
  Reader(std::span<const std::uint8_t> bytes, std::size_t base) : bytes_(bytes), base_(base) {}

  std::size_t offset() const { return base_ + pos_; }
  bool done() const { return pos_ == bytes_.size(); }

  [[noreturn]] void fail(const std::string& what) const { throw FormatError("archive: " + what, offset()); }

  std::span<const std::uint8_t> take(std::size_t n, const char* what) {
    if (bytes_.size() - pos_ < n) fail(std::string("truncated ") + what);
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  std::uint32_t u8(const char* what) { return take(1, what)[0]; }
  std::uint32_t u16(const char* what) {
    auto b = take(2, what);
    return b[0] | (static_cast<std::uint32_t>(b[1]) << 8);
  }
  std::uint32_t u32(const char* what) {
    auto b = take(4, what);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[static_cast<std::size_t>(i)];
    return v;
  }
  std::uint64_t varint(const char* what) {
    std::uint64_t v = 0;
    for (unsigned shift = 0; shift < 64; shift += 7) {
      std::uint32_t b = u8(what);
      v |= static_cast<std::uint64_t>(b & 0x7F) << shift;
      if ((b & 0x80) == 0) return v;
    }
    fail(std::string("overlong varint in ") + what);
  }
  std::span<const std::uint8_t> rest() {
    auto out = bytes_.subspan(pos_);
    pos_ = bytes_.size();
    return out;
  }
  Reader block(const char* what) {
    std::uint32_t len = u32(what);
    std::size_t start = offset();
    return Reader(take(len, what), start);
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> write_archive(const HybridArchive& archive) {
  std::vector<std::uint8_t> out{'P', 'L', 'T', 'A', kVersion};
  out.push_back(archive.aliases.empty() ? 0 : 1);
  put_u32(out, archive.tau.bits);
  put_u32(out, archive.dataset_size);
  std::string eps = to_string(archive.epsilon);
  put_u16(out, static_cast<std::uint32_t>(eps.size()));
  out.insert(out.end(), eps.begin(), eps.end());

  put_block(out, std::vector<std::uint8_t>(archive.model_text.begin(), archive.model_text.end()));

  std::vector<std::uint8_t> covered;
  put_u32(covered, static_cast<std::uint32_t>(archive.covered.size()));
  for (const auto& rec : archive.covered) {
    put_u32(covered, rec.index);
    auto bytes = rec.bits.to_record();
    covered.insert(covered.end(), bytes.begin(), bytes.end());
  }
  put_block(out, covered);

  std::vector<std::uint8_t> residual;
  put_u32(residual, archive.extra_symbol_count);
  put_u32(residual, static_cast<std::uint32_t>(archive.extra_symbols.size()));
  for (const auto& name : archive.extra_symbols) {
    put_u16(residual, static_cast<std::uint32_t>(name.size()));
    residual.insert(residual.end(), name.begin(), name.end());
  }
  put_u32(residual, static_cast<std::uint32_t>(archive.residuals.size()));
  const unsigned width = archive.residual_token_bits();
  for (const auto& rec : archive.residuals) {
    put_u32(residual, rec.index);
    raw::put_sequence(residual, rec.tokens, width);
  }
  put_u32(residual, static_cast<std::uint32_t>(archive.aliases.size()));
  for (const auto& rec : archive.aliases) {
    put_u32(residual, rec.index);
    put_u32(residual, rec.representative);
  }
  put_block(out, residual);
  return out;
}

HybridArchive read_archive(std::span<const std::uint8_t> bytes) {
  Reader in(bytes, 0);
  auto magic = in.take(4, "magic");
  if (std::memcmp(magic.data(), "PLTA", 4) != 0) throw FormatError("archive: bad magic", 0);
  if (in.u8("version") != kVersion) throw FormatError("archive: unsupported version", 4);
  std::uint32_t flags = in.u8("flags");
  if (flags > 1) in.fail("unknown flags");

  HybridArchive archive;
  archive.tau = {in.u32("tau")};
  archive.dataset_size = in.u32("dataset size");
  std::size_t eps_at = in.offset();
  auto eps_bytes = in.take(in.u16("epsilon"), "epsilon");
  try {
    archive.epsilon = parse_rational(std::string(eps_bytes.begin(), eps_bytes.end()));
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("archive: ") + e.what(), eps_at);
  }
  if (sgn(archive.epsilon) <= 0 || archive.epsilon >= 1) throw FormatError("archive: epsilon out of range", eps_at);

  Reader model_block = in.block("model block");
  std::size_t model_at = model_block.offset();
  auto model_bytes = model_block.rest();
  archive.model_text.assign(model_bytes.begin(), model_bytes.end());
  try {
    archive.model = parse_model(archive.model_text);
  } catch (const FormatError& e) {
    throw FormatError(std::string("archive: ") + e.what(), model_at + e.position());
  }

  Reader covered = in.block("covered block");
  std::uint32_t covered_count = covered.u32("covered count");
  for (std::uint32_t i = 0; i < covered_count; ++i) {
    std::uint32_t index = covered.u32("covered index");
    std::uint32_t nbits = covered.u16("record bit count");
    std::size_t record_at = covered.offset();
    auto payload = covered.take((nbits + 7) / 8, "record payload");
    std::vector<std::uint8_t> record{static_cast<std::uint8_t>(nbits), static_cast<std::uint8_t>(nbits >> 8)};
    record.insert(record.end(), payload.begin(), payload.end());
    std::size_t consumed = 0;
    try {
      archive.covered.push_back({index, Bitstream::from_record(record, consumed)});
    } catch (const FormatError& e) {
      throw FormatError(std::string("archive: ") + e.what(), record_at);
    }
  }
  if (!covered.done()) covered.fail("trailing bytes in covered block");

  Reader residual = in.block("residual block");
  archive.extra_symbol_count = residual.u32("extra symbol count");
  std::uint32_t names = residual.u32("extra symbol names");
  for (std::uint32_t i = 0; i < names; ++i) {
    auto name = residual.take(residual.u16("name length"), "name");
    archive.extra_symbols.emplace_back(name.begin(), name.end());
  }
  const unsigned width = archive.residual_token_bits();
  const std::uint64_t symbol_limit = archive.model->vocab_size() + 2 + archive.extra_symbol_count;
  std::uint32_t residual_count = residual.u32("residual count");
  for (std::uint32_t i = 0; i < residual_count; ++i) {
    ResidualRecord rec{residual.u32("residual index"), {}};
    std::uint64_t length = residual.varint("residual length");
    std::size_t nbytes = (length * width + 7) / 8;
    if (length > (std::uint64_t{1} << 32)) residual.fail("residual length out of range");
    std::size_t at = residual.offset();
    auto packed = residual.take(nbytes, "residual tokens");
    std::uint64_t bitpos = 0;
    for (std::uint64_t k = 0; k < length; ++k) {
      Token t = 0;
      for (unsigned b = 0; b < width; ++b, ++bitpos) {
        t = (t << 1) | ((packed[bitpos / 8] >> (7 - bitpos % 8)) & 1U);
      }
      if (t >= symbol_limit || t == archive.model->vocabulary().end() || t == archive.model->vocabulary().escape()) {
        throw FormatError("archive: residual token out of range", at);
      }
      rec.tokens.push_back(t);
    }
    archive.residuals.push_back(std::move(rec));
  }
  std::uint32_t alias_count = residual.u32("alias count");
  for (std::uint32_t i = 0; i < alias_count; ++i) {
    std::uint32_t index = residual.u32("alias index");
    archive.aliases.push_back({index, residual.u32("alias target")});
  }
  if (!residual.done()) residual.fail("trailing bytes in residual block");
  if (!in.done()) in.fail("trailing bytes after residual block");
  if ((flags & 1U) != (archive.aliases.empty() ? 0U : 1U)) throw FormatError("archive: lossy flag mismatch", 5);
  return archive;
}

}  // namespace plt
