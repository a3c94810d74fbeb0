// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#include "format.hpp"

#include <cctype>
#include <charconv>

#include "plt/error.hpp"

namespace plt::format {

std::string header(std::string_view kind, const Vocabulary& vocab) {
  std::string out(kMagic);
  out += "\nkind ";
  out += kind;
  out += "\nvocab ";
  out += std::to_string(vocab.size());
  if (vocab.implicit_names()) {
    out += " ranked";
  } else {
    for (Token t = 0; t < vocab.size(); ++t) {
      out += ' ';
      out += vocab.name(t);
    }
  }
  out += '\n';
  return out;
}

std::string distribution_fields(const Distribution& d, const Vocabulary& vocab) {
  std::string out;
  for (const auto& e : d.entries()) {
    if (!out.empty()) out += ' ';
    out += vocab.name(e.token);
    out += ':';
    out += to_string(Rational(e.weight, d.denominator()));
  }
  return out;
}

std::string prefix_fields(std::span<const Token> prefix, const Vocabulary& vocab) {
  std::string out;
  for (Token t : prefix) {
    out += vocab.name(t);
    out += ' ';
  }
  return out;
}

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    Line line{{}, pos};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      std::size_t j = i;
      while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
      if (j > i) line.fields.push_back(raw.substr(i, j - i));
      i = j;
    }
    if (!line.fields.empty() && line.fields.front().front() != '#') lines.push_back(std::move(line));
    pos = end + 1;
  }
  return lines;
}

void fail(const Line& line, const std::string& what) { throw FormatError("model file: " + what, line.offset); }

Token parse_token(const Line& line, std::string_view field, const Vocabulary& vocab) {
  auto id = vocab.find(field);
  if (!id) fail(line, "unknown symbol '" + std::string(field) + "'");
  return *id;
}

std::vector<std::pair<Token, Rational>> parse_pairs(const Line& line, std::size_t first, char separator,
                                                    const Vocabulary& vocab) {
  std::vector<std::pair<Token, Rational>> out;
  for (std::size_t i = first; i < line.fields.size(); ++i) {
    std::string_view f = line.fields[i];
    // Split at the last separator: rationals never contain ':' or '='.
    auto cut = f.rfind(separator);
    if (cut == std::string_view::npos || cut == 0) {
      fail(line, "expected name" + std::string(1, separator) + "value, got '" + std::string(f) + "'");
    }
    Token t = parse_token(line, f.substr(0, cut), vocab);
    try {
      out.emplace_back(t, parse_rational(f.substr(cut + 1)));
    } catch (const InvalidArgument& e) {
      fail(line, e.what());
    }
  }
  return out;
}

std::size_t parse_prefix(const Line& line, std::size_t first, const Vocabulary& vocab, Sequence& out,
                         bool allow_begin_marker, std::size_t* begin_markers) {
  std::size_t i = first;
  for (; i < line.fields.size() && line.fields[i] != ":"; ++i) {
    if (allow_begin_marker && line.fields[i] == kBeginMarker) {
      if (!out.empty()) fail(line, "begin marker after a symbol");
      ++*begin_markers;
      continue;
    }
    Token t = parse_token(line, line.fields[i], vocab);
    if (!vocab.is_user(t)) fail(line, "reserved symbol inside a prefix");
    out.push_back(t);
  }
  if (i == line.fields.size()) fail(line, "missing ':' after prefix");
  return i + 1;
}

Vocabulary parse_vocab(const Line& line) {
  if (line.fields.size() < 2 || line.fields[0] != "vocab") fail(line, "expected 'vocab <n> ...'");
  std::size_t n = 0;
  auto f = line.fields[1];
  auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), n);
  if (ec != std::errc() || ptr != f.data() + f.size()) fail(line, "bad vocabulary size");
  if (line.fields.size() == 3 && line.fields[2] == "ranked") return Vocabulary::ranked(n);
  if (line.fields.size() != n + 2) fail(line, "vocabulary size does not match the listed symbols");
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 2; i < line.fields.size(); ++i) names.emplace_back(line.fields[i]);
  try {
    return Vocabulary(std::move(names));
  } catch (const InvalidArgument& e) {
    fail(line, e.what());
  }
}

}  // namespace plt::format
