// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#include "plt/error.hpp"
#include "plt/model.hpp"
#include "format.hpp"

namespace plt {

namespace {

class PolicyModel final : public GenerativeModel {
 public:
  explicit PolicyModel(const PolicyTable& policy) : vocab_(policy.actions), weights_(policy.weights) {
    for (const auto& [state, actions] : weights_) {
      std::vector<std::pair<Token, Rational>> row;
      for (const auto& [action, w] : actions) {
        if (!vocab_.is_user(action)) throw InvalidArgument("policy action outside the action vocabulary");
        if (sgn(w) < 0) throw InvalidArgument("policy weights must be non-negative");
      }
      if (actions.empty()) continue;
      // Common denominator of the row, then integer weights.
      BigInt lcm = 1;
      for (const auto& [action, w] : actions) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), w.get_den_mpz_t());
      std::vector<std::pair<Token, BigInt>> ints;
      BigInt total = 0;
      for (const auto& [action, w] : actions) {
        BigInt v = w.get_num() * (lcm / w.get_den());
        total += v;
        ints.emplace_back(action, std::move(v));
      }
      if (total == 0) {
        throw InvalidArgument("policy state '" + vocab_.format_sequence(state) + "' has only zero weights");
      }
      normalized_.emplace(state, Distribution::from_weights(std::move(ints)));
    }
  }

  const Vocabulary& vocabulary() const override { return vocab_; }

  Distribution conditional(std::span<const Token> prefix) const override {
    auto it = normalized_.find(Sequence(prefix.begin(), prefix.end()));
    if (it == normalized_.end()) return Distribution::point_mass(vocab_.end());
    return it->second;
  }

  std::string serialize() const override {
    std::string out = format::header(kind(), vocab_);
    for (const auto& [state, actions] : weights_) {
      out += "weight " + format::prefix_fields(state, vocab_) + ":";
      for (const auto& [action, w] : actions) out += ' ' + vocab_.name(action) + '=' + to_string(w);
      out += '\n';
    }
    return out;
  }

  std::string_view kind() const override { return "policy"; }

 private:
  Vocabulary vocab_;
  std::map<Sequence, std::map<Token, Rational>> weights_;
  std::map<Sequence, Distribution> normalized_;
};

}  // namespace

ModelPtr from_policy(const PolicyTable& policy) { return std::make_shared<PolicyModel>(policy); }

namespace detail {

ModelPtr parse_policy(const Vocabulary& vocab, std::span<const format::Line> body) {
  PolicyTable table{vocab, {}};
  for (const auto& line : body) {
    if (line.fields[0] != "weight") format::fail(line, "unexpected '" + std::string(line.fields[0]) + "' in policy model");
    Sequence state;
    std::size_t next = format::parse_prefix(line, 1, vocab, state);
    auto& row = table.weights[state];
    for (auto& [t, w] : format::parse_pairs(line, next, '=', vocab)) row[t] += w;
  }
  try {
    return from_policy(table);
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("model file: ") + e.what());
  }
}

}  // namespace detail

}  // namespace plt
