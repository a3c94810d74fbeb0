// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#include "plt/hybrid.hpp"

#include <algorithm>

#include "plt/error.hpp"
#include "plt/range_coder.hpp"
#include "raw_code.hpp"

namespace plt {

namespace raw {

void put_varint(std::vector<std::uint8_t>& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<std::uint8_t>(v | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<std::uint8_t>(v));
}

std::size_t varint_size(std::uint64_t v) {
  std::size_t n = 1;
  while (v >= 0x80) {
    v >>= 7;
    ++n;
  }
  return n;
}

void put_sequence(std::vector<std::uint8_t>& out, std::span<const Token> seq, unsigned width) {
  put_varint(out, seq.size());
  std::uint64_t acc = 0;
  unsigned filled = 0;
  for (Token t : seq) {
    for (unsigned b = width; b-- > 0;) {
      acc = (acc << 1) | ((t >> b) & 1U);
      if (++filled == 8) {
        out.push_back(static_cast<std::uint8_t>(acc));
        acc = 0;
        filled = 0;
      }
    }
  }
  if (filled > 0) out.push_back(static_cast<std::uint8_t>(acc << (8 - filled)));
}

std::size_t sequence_size(std::size_t length, unsigned width) {
  return varint_size(length) + (length * width + 7) / 8;
}

unsigned ceil_log2(std::uint64_t n) {
  unsigned k = 0;
  while ((std::uint64_t{1} << k) < n) ++k;
  return k;
}

}  // namespace raw

namespace {

bool in_vocabulary(const GenerativeModel& model, std::span<const Token> s) {
  const auto& vocab = model.vocabulary();
  return std::all_of(s.begin(), s.end(), [&](Token t) { return vocab.is_user(t); });
}

std::uint32_t checked_index(std::size_t i) {
  if (i > UINT32_MAX) throw InvalidArgument("dataset too large for the archive format");
  return static_cast<std::uint32_t>(i);
}

std::uint32_t extra_count(const GenerativeModel& model, std::span<const Sequence> dataset) {
  const Token escape = model.vocabulary().escape();
  std::uint32_t count = 0;
  for (const auto& s : dataset) {
    for (Token t : s) {
      if (t > escape) count = std::max(count, t - escape);
      if (t == escape || t == model.vocabulary().end()) {
        throw InvalidArgument("dataset sequences may not contain END or ESCAPE");
      }
    }
  }
  return count;
}

}  // namespace

unsigned HybridArchive::residual_token_bits() const {
  std::uint64_t symbols = model->vocab_size() + 2 + extra_symbol_count;
  return std::max(1U, raw::ceil_log2(symbols));
}

Split split(const GenerativeModel& model, std::span<const Sequence> dataset, CodeLength tau) {
  if (tau.bits < 1) throw InvalidArgument("tau must be at least 1");
  Split out;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    bool covered = false;
    if (in_vocabulary(model, dataset[i])) {
      try {
        covered = code_length(model, dataset[i]) <= tau;
      } catch (const UnencodableError&) {
        covered = false;
      }
    }
    (covered ? out.covered : out.residual).push_back(i);
  }
  return out;
}

HybridArchive pack(ModelPtr model, std::span<const Sequence> dataset, CodeLength tau, const Rational& epsilon,
                   std::vector<std::string> extra_symbols) {
  if (!model) throw InvalidArgument("pack needs a model");
  if (sgn(epsilon) <= 0 || epsilon >= 1) throw InvalidArgument("escape probability must lie in (0, 1)");
  HybridArchive archive;
  archive.model_text = model->serialize();
  archive.model = model;
  archive.tau = tau;
  archive.epsilon = epsilon;
  archive.dataset_size = checked_index(dataset.size());
  archive.extra_symbol_count = extra_count(*model, dataset);
  archive.extra_symbols = std::move(extra_symbols);
  if (!archive.extra_symbols.empty() && archive.extra_symbols.size() < archive.extra_symbol_count) {
    throw InvalidArgument("fewer out-of-vocabulary spellings than out-of-vocabulary ids");
  }
  archive.extra_symbol_count = std::max<std::uint32_t>(archive.extra_symbol_count,
                                                       static_cast<std::uint32_t>(archive.extra_symbols.size()));

  Split parts = split(*model, dataset, tau);
  ModelPtr escaped = with_escape(model, epsilon);
  BitCoder coder(*escaped);
  for (std::size_t i : parts.covered) {
    Bitstream bits = coder.encode(dataset[i]);
    if (bits.size() > UINT16_MAX) {
      // Too long for a record; keep it raw.
      parts.residual.push_back(i);
      continue;
    }
    archive.covered.push_back({checked_index(i), std::move(bits)});
  }
  std::sort(parts.residual.begin(), parts.residual.end());
  for (std::size_t i : parts.residual) archive.residuals.push_back({checked_index(i), dataset[i]});
  return archive;
}

std::vector<Sequence> unpack(const HybridArchive& archive) {
  std::vector<Sequence> out(archive.dataset_size);
  std::vector<bool> seen(archive.dataset_size, false);
  auto claim = [&](std::uint32_t index) {
    if (index >= archive.dataset_size || seen[index]) {
      throw FormatError("archive index " + std::to_string(index) + " is out of range or duplicated");
    }
    seen[index] = true;
  };
  ModelPtr escaped = with_escape(archive.model, archive.epsilon);
  BitCoder coder(*escaped);
  for (const auto& rec : archive.covered) {
    claim(rec.index);
    try {
      out[rec.index] = coder.decode(rec.bits);
    } catch (const DecodeError& e) {
      throw FormatError("covered record for item " + std::to_string(rec.index) + ": " + e.what());
    }
  }
  for (const auto& rec : archive.residuals) {
    claim(rec.index);
    out[rec.index] = rec.tokens;
  }
  for (const auto& rec : archive.aliases) {
    claim(rec.index);
    if (rec.representative >= archive.covered.size()) {
      throw FormatError("alias for item " + std::to_string(rec.index) + " points past the covered block");
    }
    out[rec.index] = out[archive.covered[rec.representative].index];
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw FormatError("archive does not cover every dataset index");
  }
  return out;
}

DescriptionLength description_length(const HybridArchive& archive) {
  DescriptionLength dl;
  dl.model_bits = 8 * static_cast<std::uint64_t>(archive.model_text.size());
  ModelPtr escaped = with_escape(archive.model, archive.epsilon);
  BitCoder coder(*escaped);
  for (const auto& rec : archive.covered) {
    dl.covered_bits += code_length(*archive.model, coder.decode(rec.bits)).bits;
  }
  const unsigned width = archive.residual_token_bits();
  std::uint64_t residual_bytes = 0;
  for (const auto& rec : archive.residuals) residual_bytes += raw::sequence_size(rec.tokens.size(), width);
  if (!archive.residuals.empty()) {
    for (const auto& name : archive.extra_symbols) residual_bytes += raw::varint_size(name.size()) + name.size();
  }
  dl.residual_bits = 8 * residual_bytes;
  if (!archive.aliases.empty()) {
    dl.residual_bits += archive.aliases.size() * raw::ceil_log2(archive.covered.size());
  }
  return dl;
}

LossyPack lossy_pack(ModelPtr model, const Plt& plt, std::span<const Sequence> dataset, CodeLength tau,
                     const Rational& epsilon) {
  LossyPack out{pack(model, dataset, tau, epsilon), std::vector<double>(dataset.size(), 0.0)};
  HybridArchive& archive = out.archive;
  if (archive.covered.empty()) throw InvalidArgument("lossy packing needs at least one covered item");

  std::vector<Sequence> representatives;
  representatives.reserve(archive.covered.size());
  for (const auto& rec : archive.covered) representatives.push_back(dataset[rec.index]);

  auto distortion = [&](std::span<const Token> s, std::span<const Token> rep) {
    return prefix_information(plt, s, rep);
  };
  for (const auto& rec : archive.covered) out.distortions[rec.index] = distortion(dataset[rec.index], dataset[rec.index]);

  const unsigned pointer_bits = raw::ceil_log2(archive.covered.size());
  const unsigned width = archive.residual_token_bits();
  std::vector<ResidualRecord> kept;
  for (auto& rec : archive.residuals) {
    std::uint64_t raw_bits = 8 * raw::sequence_size(rec.tokens.size(), width);
    if (pointer_bits > raw_bits) {
      kept.push_back(std::move(rec));
      continue;
    }
    Sequence rep = nearest_covered(plt, representatives, rec.tokens);
    auto pos = static_cast<std::uint32_t>(std::find(representatives.begin(), representatives.end(), rep) -
                                          representatives.begin());
    out.distortions[rec.index] = distortion(rec.tokens, rep);
    archive.aliases.push_back({rec.index, pos});
  }
  archive.residuals = std::move(kept);
  // Out-of-vocabulary spellings are only needed while a raw residual remains.
  if (archive.residuals.empty()) {
    archive.extra_symbol_count = 0;
    archive.extra_symbols.clear();
  }
  return out;
}

void TierThresholds::validate() const {
  if (!(tau1 < tau2 && tau2 < tau3)) throw InvalidArgument("tier thresholds must satisfy tau1 < tau2 < tau3");
}

int route_tier(CodeLength length, const TierThresholds& thresholds) {
  thresholds.validate();
  if (length <= thresholds.tau1) return 1;
  if (length <= thresholds.tau2) return 2;
  if (length <= thresholds.tau3) return 3;
  return 4;
}

}  // namespace plt
