// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#include "plt/error.hpp"
#include "plt/model.hpp"
#include "format.hpp"

namespace plt {

namespace {

void check_tokens(const Distribution& d, const Vocabulary& vocab) {
  for (const auto& e : d.entries()) {
    if (e.token > vocab.escape()) {
      throw InvalidArgument("distribution mentions token " + std::to_string(e.token) + " outside the vocabulary");
    }
  }
}

class TableModel final : public GenerativeModel {
 public:
  TableModel(Vocabulary vocab, std::map<Sequence, Distribution> entries, Distribution fallback)
      : vocab_(std::move(vocab)), entries_(std::move(entries)), fallback_(std::move(fallback)) {
    check_tokens(fallback_, vocab_);
    for (const auto& [prefix, d] : entries_) {
      for (Token t : prefix) {
        if (!vocab_.is_user(t)) throw InvalidArgument("table prefix contains a non-user token");
      }
      check_tokens(d, vocab_);
    }
  }

  const Vocabulary& vocabulary() const override { return vocab_; }

  Distribution conditional(std::span<const Token> prefix) const override {
    auto it = entries_.find(Sequence(prefix.begin(), prefix.end()));
    return it == entries_.end() ? fallback_ : it->second;
  }

  std::string serialize() const override {
    std::string out = format::header(kind(), vocab_);
    out += "default " + format::distribution_fields(fallback_, vocab_) + "\n";
    for (const auto& [prefix, d] : entries_) {
      out += "row " + format::prefix_fields(prefix, vocab_) + ": " + format::distribution_fields(d, vocab_) + "\n";
    }
    return out;
  }

  std::string_view kind() const override { return "table"; }

 private:
  Vocabulary vocab_;
  std::map<Sequence, Distribution> entries_;
  Distribution fallback_;
};

}  // namespace

ModelPtr table_model(Vocabulary vocab, std::map<Sequence, Distribution> entries, Distribution fallback) {
  return std::make_shared<TableModel>(std::move(vocab), std::move(entries), std::move(fallback));
}

namespace detail {

ModelPtr parse_table(const Vocabulary& vocab, std::span<const format::Line> body) {
  std::map<Sequence, Distribution> entries;
  std::optional<Distribution> fallback;
  for (const auto& line : body) {
    auto head = line.fields[0];
    try {
      if (head == "default") {
        if (fallback) format::fail(line, "duplicate default row");
        fallback = Distribution::from_probabilities(format::parse_pairs(line, 1, ':', vocab));
      } else if (head == "row") {
        Sequence prefix;
        std::size_t next = format::parse_prefix(line, 1, vocab, prefix);
        auto d = Distribution::from_probabilities(format::parse_pairs(line, next, ':', vocab));
        if (!entries.emplace(std::move(prefix), std::move(d)).second) format::fail(line, "duplicate row");
      } else {
        format::fail(line, "unexpected '" + std::string(head) + "' in table model");
      }
    } catch (const InvalidArgument& e) {
      format::fail(line, e.what());
    }
  }
  if (!fallback) throw FormatError("model file: table model without a default row");
  return table_model(vocab, std::move(entries), std::move(*fallback));
}

}  // namespace detail

}  // namespace plt
