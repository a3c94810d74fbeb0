// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace plt {

using Token = std::uint32_t;

/// Tokens in emission order. END is implicit and never stored in a sequence.
using Sequence = std::vector<Token>;

inline constexpr std::string_view kEndSpelling = "$";
inline constexpr std::string_view kEscapeSpelling = "<esc>";

/// Ordered symbol table. User symbols take ids [0, size()); END and ESCAPE
/// occupy the two ids directly above them.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> names);

  /// Vocabulary whose symbol names are the 1-based ranks "1".."size".
  static Vocabulary ranked(std::size_t size);

  std::size_t size() const noexcept { return size_; }
  Token end() const noexcept { return static_cast<Token>(size_); }
  Token escape() const noexcept { return static_cast<Token>(size_ + 1); }
  bool implicit_names() const noexcept { return names_.empty() && size_ > 0; }

  bool is_user(Token t) const noexcept { return t < size_; }
  bool is_reserved(Token t) const noexcept { return t == end() || t == escape(); }

  std::string name(Token t) const;
  std::optional<Token> find(std::string_view name) const;

  /// Splits a sequence spelled in text. Whitespace-separated names are used
  /// when the text contains whitespace; otherwise, if every symbol is a single
  /// character, the text is split per character; else the text is one symbol.
  /// Unknown symbols are reported through `unknown` (as their spelling) and
  /// mapped to ids above ESCAPE in first-seen order when `unknown` is non-null.
  Sequence parse_sequence(std::string_view text, std::vector<std::string>* unknown = nullptr) const;

  /// Inverse of parse_sequence for in-vocabulary sequences. Ids above ESCAPE
  /// are spelled from `extra` when provided.
  std::string format_sequence(std::span<const Token> seq,
                              std::span<const std::string> extra = {}) const;

  bool operator==(const Vocabulary& other) const noexcept {
    return size_ == other.size_ && names_ == other.names_;
  }

 private:
  std::size_t size_ = 0;
  std::vector<std::string> names_;
  std::unordered_map<std::string, Token> index_;
  bool single_char_ = true;
};

bool valid_symbol_name(std::string_view name);

}  // namespace plt
