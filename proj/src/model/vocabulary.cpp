// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#include "plt/vocabulary.hpp"

#include <cctype>
#include <charconv>

#include "plt/error.hpp"

namespace plt {

bool valid_symbol_name(std::string_view name) {
  if (name.empty() || name == kEndSpelling || name == kEscapeSpelling || name == "^") return false;
  for (char c : name) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ':' || c == '=') return false;
  }
  return true;
}

Vocabulary::Vocabulary(std::vector<std::string> names) : size_(names.size()), names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!valid_symbol_name(names_[i])) {
      throw InvalidArgument("invalid symbol name '" + names_[i] + "'");
    }
    if (!index_.emplace(names_[i], static_cast<Token>(i)).second) {
      throw InvalidArgument("duplicate symbol name '" + names_[i] + "'");
    }
    if (names_[i].size() != 1) single_char_ = false;
  }
}

Vocabulary Vocabulary::ranked(std::size_t size) {
  Vocabulary v;
  v.size_ = size;
  v.single_char_ = size <= 9;
  return v;
}

std::string Vocabulary::name(Token t) const {
  if (t == end()) return std::string(kEndSpelling);
  if (t == escape()) return std::string(kEscapeSpelling);
  if (t >= size_) return "#" + std::to_string(t);
  if (names_.empty()) return std::to_string(t + 1);
  return names_[t];
}

std::optional<Token> Vocabulary::find(std::string_view name) const {
  if (name == kEndSpelling) return end();
  if (name == kEscapeSpelling) return escape();
  if (names_.empty()) {
    std::size_t rank = 0;
    auto [ptr, ec] = std::from_chars(name.data(), name.data() + name.size(), rank);
    if (ec != std::errc() || ptr != name.data() + name.size() || rank == 0 || rank > size_) {
      return std::nullopt;
    }
    return static_cast<Token>(rank - 1);
  }
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Sequence Vocabulary::parse_sequence(std::string_view text, std::vector<std::string>* unknown) const {
  std::vector<std::string_view> parts;
  bool has_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) has_space = true;
  }
  if (has_space) {
    std::size_t i = 0;
    while (i < text.size()) {
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
      if (j > i) parts.push_back(text.substr(i, j - i));
      i = j;
    }
  } else if (single_char_) {
    for (std::size_t i = 0; i < text.size(); ++i) parts.push_back(text.substr(i, 1));
  } else if (!text.empty()) {
    parts.push_back(text);
  }

  Sequence seq;
  seq.reserve(parts.size());
  for (auto part : parts) {
    auto id = find(part);
    if (id && is_user(*id)) {
      seq.push_back(*id);
      continue;
    }
    if (!unknown || (id && is_reserved(*id))) {
      throw InvalidArgument("symbol '" + std::string(part) + "' is not in the vocabulary");
    }
    std::size_t slot = 0;
    while (slot < unknown->size() && (*unknown)[slot] != part) ++slot;
    if (slot == unknown->size()) unknown->emplace_back(part);
    seq.push_back(static_cast<Token>(size_ + 2 + slot));
  }
  return seq;
}

std::string Vocabulary::format_sequence(std::span<const Token> seq, std::span<const std::string> extra) const {
  std::string out;
  bool compact = single_char_ && size_ > 0;
  for (Token t : seq) {
    std::string piece;
    if (t > escape() && t - escape() - 1 < extra.size()) {
      piece = extra[t - escape() - 1];
    } else {
      piece = name(t);
    }
    if (piece.size() != 1) compact = false;
    out += piece;
    out += ' ';
  }
  if (!out.empty()) out.pop_back();
  if (compact) {
    std::string joined;
    for (char c : out) {
      if (c != ' ') joined += c;
    }
    return joined;
  }
  return out;
}

}  // namespace plt
