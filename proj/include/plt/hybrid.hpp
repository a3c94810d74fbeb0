// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "plt/bitstream.hpp"
#include "plt/codec.hpp"
#include "plt/model.hpp"
#include "plt/trie.hpp"

namespace plt {

/// Default escape probability for covered records.
inline Rational default_escape_probability() { return Rational(1, 256); }

/// Dataset partition by code length: indices into the dataset, ascending.
struct Split {
  std::vector<std::size_t> covered;
  std::vector<std::size_t> residual;
};

/// Covered iff every token is in the vocabulary and code_length(s) <= tau.
Split split(const GenerativeModel& model, std::span<const Sequence> dataset, CodeLength tau);

struct CoveredRecord {
  std::uint32_t index;
  Bitstream bits;  // range-coded under the escape-augmented model
};

struct ResidualRecord {
  std::uint32_t index;
  Sequence tokens;  // ids above ESCAPE name out-of-vocabulary symbols
};

/// Lossy mode only: a dataset item stored as a pointer to a covered record.
struct AliasRecord {
  std::uint32_t index;
  std::uint32_t representative;  // position in HybridArchive::covered
};

struct HybridArchive {
  std::string model_text;
  ModelPtr model;
  CodeLength tau;
  Rational epsilon = default_escape_probability();
  std::uint32_t dataset_size = 0;
  std::vector<CoveredRecord> covered;
  std::vector<ResidualRecord> residuals;
  std::vector<AliasRecord> aliases;
  /// Spellings for ids above ESCAPE (may be empty when only ids matter).
  std::vector<std::string> extra_symbols;
  /// Number of out-of-vocabulary ids the residual code must represent.
  std::uint32_t extra_symbol_count = 0;

  /// Bits per residual token: ceil(log2(|V| + 2 + extra_symbol_count)), at least 1.
  unsigned residual_token_bits() const;
};

struct DescriptionLength {
  std::uint64_t model_bits = 0;
  std::uint64_t covered_bits = 0;
  std::uint64_t residual_bits = 0;
  std::uint64_t total() const { return model_bits + covered_bits + residual_bits; }
};

/// Splits at tau; covered items are range-coded under with_escape(model, epsilon),
/// residuals are stored raw. Items keep their dataset index.
HybridArchive pack(ModelPtr model, std::span<const Sequence> dataset, CodeLength tau,
                   const Rational& epsilon = default_escape_probability(),
                   std::vector<std::string> extra_symbols = {});

/// Dataset in original order. Lossy aliases come back as their representative.
std::vector<Sequence> unpack(const HybridArchive& archive);

/// model bits from the serialized model; covered bits are the analytic L_M(s);
/// residual bits are the stored bytes of the residual entries (and OOV table),
/// plus ceil(log2 |covered|) per alias.
DescriptionLength description_length(const HybridArchive& archive);

struct LossyPack {
  HybridArchive archive;
  /// Per dataset item: -log2 P(s ^ s~). Items kept raw report 0.
  std::vector<double> distortions;
};

/// Like pack, but residuals become pointers to their nearest covered representative
/// whenever the pointer is no larger than the raw entry.
LossyPack lossy_pack(ModelPtr model, const Plt& plt, std::span<const Sequence> dataset, CodeLength tau,
                     const Rational& epsilon = default_escape_probability());

struct TierThresholds {
  CodeLength tau1;
  CodeLength tau2;
  CodeLength tau3;

  /// Throws InvalidArgument unless tau1 < tau2 < tau3.
  void validate() const;
};

/// 1 if L <= tau1, 2 if L <= tau2, 3 if L <= tau3, else 4.
int route_tier(CodeLength length, const TierThresholds& thresholds);

/// Archive file bytes ("PLTA", version 1, little-endian).
std::vector<std::uint8_t> write_archive(const HybridArchive& archive);
HybridArchive read_archive(std::span<const std::uint8_t> bytes);

}  // namespace plt
