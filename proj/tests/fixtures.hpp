// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#pragma once

#include <random>

#include "plt/distribution.hpp"
#include "plt/model.hpp"

namespace plt::testing {

inline Vocabulary abc() { return Vocabulary({"A", "B", "C"}); }

inline Distribution fig1_root() {
  return Distribution::from_probabilities({{0, Rational(9, 20)}, {1, Rational(3, 10)}, {2, Rational(1, 4)}});
}

inline Distribution fig1_after_b() {
  return Distribution::from_probabilities({{0, Rational(1, 2)}, {1, Rational(3, 10)}, {2, Rational(1, 5)}});
}

// Every prefix draws from the root distribution; no END mass.
inline ModelPtr fig1_pure() { return table_model(abc(), {}, fig1_root()); }

// One token, then END.
inline ModelPtr fig1_one_level() {
  return table_model(abc(), {{Sequence{}, fig1_root()}}, Distribution::point_mass(abc().end()));
}

// Two tokens, then END; after B the edges follow fig1_after_b.
inline ModelPtr fig1_two_level() {
  return table_model(abc(),
                     {{Sequence{}, fig1_root()}, {Sequence{0}, fig1_root()}, {Sequence{1}, fig1_after_b()},
                      {Sequence{2}, fig1_root()}},
                     Distribution::point_mass(abc().end()));
}

inline Sequence random_sequence(std::mt19937_64& rng, std::size_t vocab, std::size_t max_length) {
  std::uniform_int_distribution<std::size_t> len(0, max_length);
  std::uniform_int_distribution<Token> tok(0, static_cast<Token>(vocab - 1));
  Sequence s(len(rng));
  for (auto& t : s) t = tok(rng);
  return s;
}

// Full-support conditional over user tokens and END with random integer weights.
inline Distribution random_distribution(std::mt19937_64& rng, std::size_t vocab) {
  std::uniform_int_distribution<int> w(1, 40);
  std::vector<std::pair<Token, BigInt>> weights;
  for (Token t = 0; t <= vocab; ++t) weights.emplace_back(t, BigInt(w(rng)));
  return Distribution::from_weights(std::move(weights));
}

// Table model over 2..5 symbols with random rows for up to 12 random prefixes of length <= 3.
inline ModelPtr random_table_model(std::mt19937_64& rng) {
  std::size_t vocab = std::uniform_int_distribution<std::size_t>(2, 5)(rng);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < vocab; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
  std::map<Sequence, Distribution> rows;
  std::size_t n_rows = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
  for (std::size_t i = 0; i < n_rows; ++i) rows[random_sequence(rng, vocab, 3)] = random_distribution(rng, vocab);
  return table_model(Vocabulary(names), std::move(rows), random_distribution(rng, vocab));
}

}  // namespace plt::testing
