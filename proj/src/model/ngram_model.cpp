// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#include <charconv>
#include <limits>

#include "plt/error.hpp"
#include "plt/model.hpp"
#include "format.hpp"

namespace plt {

namespace {

// Context slot for "before the first token".
constexpr Token kBegin = std::numeric_limits<Token>::max();

class NgramModel final : public GenerativeModel {
 public:
  using Context = std::vector<Token>;
  using Counts = std::map<Context, std::map<Token, std::uint64_t>>;

  NgramModel(Vocabulary vocab, std::size_t order, Rational smoothing, Counts counts)
      : vocab_(std::move(vocab)), order_(order), smoothing_(std::move(smoothing)), counts_(std::move(counts)) {
    if (order_ < 1) throw InvalidArgument("n-gram order must be at least 1");
    if (sgn(smoothing_) <= 0) throw InvalidArgument("smoothing constant must be positive");
  }

  const Vocabulary& vocabulary() const override { return vocab_; }

  Distribution conditional(std::span<const Token> prefix) const override {
    Context ctx = context_of(prefix);
    auto it = counts_.find(ctx);
    const std::size_t outcomes = vocab_.size() + 1;  // V plus END
    const BigInt& k_num = smoothing_.get_num();
    const BigInt& k_den = smoothing_.get_den();
    std::vector<std::pair<Token, BigInt>> weights;
    weights.reserve(outcomes);
    for (Token t = 0; t < outcomes; ++t) {
      std::uint64_t c = 0;
      if (it != counts_.end()) {
        if (auto hit = it->second.find(t); hit != it->second.end()) c = hit->second;
      }
      // (c + k) scaled by k_den keeps every weight integral.
      weights.emplace_back(t, BigInt(static_cast<unsigned long>(c)) * k_den + k_num);
    }
    return Distribution::from_weights(std::move(weights));
  }

  std::string serialize() const override {
    std::string out = format::header(kind(), vocab_);
    out += "order " + std::to_string(order_) + "\n";
    out += "smoothing " + to_string(smoothing_) + "\n";
    for (const auto& [ctx, next] : counts_) {
      out += "count";
      for (Token t : ctx) {
        out += ' ';
        out += t == kBegin ? std::string(format::kBeginMarker) : vocab_.name(t);
      }
      out += " :";
      for (const auto& [t, c] : next) {
        out += ' ' + vocab_.name(t) + '=' + std::to_string(c);
      }
      out += '\n';
    }
    return out;
  }

  std::string_view kind() const override { return "ngram"; }

  Context context_of(std::span<const Token> prefix) const {
    const std::size_t width = order_ - 1;
    Context ctx(width, kBegin);
    std::size_t take = std::min(width, prefix.size());
    for (std::size_t i = 0; i < take; ++i) ctx[width - take + i] = prefix[prefix.size() - take + i];
    return ctx;
  }

 private:
  Vocabulary vocab_;
  std::size_t order_;
  Rational smoothing_;
  Counts counts_;
};

}  // namespace

ModelPtr ngram_model(Vocabulary vocab, std::span<const Sequence> corpus, std::size_t order, const Rational& smoothing) {
  if (corpus.empty()) throw InvalidArgument("n-gram corpus is empty");
  if (order < 1) throw InvalidArgument("n-gram order must be at least 1");
  NgramModel::Counts counts;
  const std::size_t width = order - 1;
  for (const auto& seq : corpus) {
    NgramModel::Context ctx(width, kBegin);
    auto bump = [&](Token next) {
      ++counts[ctx][next];
      if (width > 0) {
        ctx.erase(ctx.begin());
        ctx.push_back(next);
      }
    };
    for (Token t : seq) {
      if (!vocab.is_user(t)) throw InvalidArgument("corpus contains a token outside the vocabulary");
      bump(t);
    }
    ++counts[ctx][vocab.end()];
  }
  return std::make_shared<NgramModel>(std::move(vocab), order, smoothing, std::move(counts));
}

namespace detail {

ModelPtr parse_ngram(const Vocabulary& vocab, std::span<const format::Line> body) {
  std::size_t order = 0;
  std::optional<Rational> smoothing;
  NgramModel::Counts counts;
  for (const auto& line : body) {
    auto head = line.fields[0];
    if (head == "order" && line.fields.size() == 2) {
      auto f = line.fields[1];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), order);
      if (ec != std::errc() || ptr != f.data() + f.size() || order < 1) format::fail(line, "bad order");
    } else if (head == "smoothing" && line.fields.size() == 2) {
      try {
        smoothing = parse_rational(line.fields[1]);
      } catch (const InvalidArgument& e) {
        format::fail(line, e.what());
      }
    } else if (head == "count") {
      if (order == 0) format::fail(line, "count row before order");
      Sequence ctx;
      std::size_t markers = 0;
      std::size_t next = format::parse_prefix(line, 1, vocab, ctx, true, &markers);
      if (ctx.size() + markers != order - 1) format::fail(line, "context width does not match the order");
      NgramModel::Context key(markers, kBegin);
      key.insert(key.end(), ctx.begin(), ctx.end());
      auto& row = counts[key];
      for (const auto& [t, q] : format::parse_pairs(line, next, '=', vocab)) {
        if (q.get_den() != 1 || sgn(q) < 0 || !q.get_num().fits_ulong_p()) format::fail(line, "bad count");
        if (t == vocab.escape()) format::fail(line, "n-gram counts cannot mention ESCAPE");
        row[t] += q.get_num().get_ui();
      }
    } else {
      format::fail(line, "unexpected '" + std::string(head) + "' in n-gram model");
    }
  }
  if (order == 0 || !smoothing) throw FormatError("model file: n-gram model needs order and smoothing");
  try {
    return std::make_shared<NgramModel>(vocab, order, *smoothing, std::move(counts));
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("model file: ") + e.what());
  }
}

}  // namespace detail

}  // namespace plt
