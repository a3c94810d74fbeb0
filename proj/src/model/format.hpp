// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

// Shared pieces of the PLTMODEL text format.

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "plt/distribution.hpp"
#include "plt/model.hpp"
#include "plt/vocabulary.hpp"

namespace plt::format {

inline constexpr std::string_view kMagic = "PLTMODEL 1";
inline constexpr std::string_view kBeginMarker = "^";

std::string header(std::string_view kind, const Vocabulary& vocab);

/// `name:num/den ...` in ascending token order.
std::string distribution_fields(const Distribution& d, const Vocabulary& vocab);

/// Space-separated token names; empty for the empty prefix.
std::string prefix_fields(std::span<const Token> prefix, const Vocabulary& vocab);

/// One non-empty line of a model file, split on whitespace.
struct Line {
  std::vector<std::string_view> fields;
  std::size_t offset;  // byte offset of the line in the file
};

/// Splits text into non-blank lines. Lines starting with '#' are comments.
std::vector<Line> split_lines(std::string_view text);

[[noreturn]] void fail(const Line& line, const std::string& what);

Token parse_token(const Line& line, std::string_view field, const Vocabulary& vocab);

/// Parses `name:q name:q ...` starting at field `first`.
std::vector<std::pair<Token, Rational>> parse_pairs(const Line& line, std::size_t first, char separator,
                                                    const Vocabulary& vocab);

/// Reads `a b c :` prefix fields up to the colon; returns the index after the colon.
std::size_t parse_prefix(const Line& line, std::size_t first, const Vocabulary& vocab, Sequence& out,
                         bool allow_begin_marker = false, std::size_t* begin_markers = nullptr);

Vocabulary parse_vocab(const Line& line);

}  // namespace plt::format
