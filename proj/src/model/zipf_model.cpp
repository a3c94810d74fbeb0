// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#include <cmath>

#include "plt/error.hpp"
#include "plt/model.hpp"
#include "format.hpp"

namespace plt {

namespace {

// Weights j^-alpha as exact dyadic rationals lifted to a common power-of-two
// denominator. Returns integer numerators; their sum is the denominator.
std::vector<BigInt> zipf_weights(std::size_t items, const Rational& alpha) {
  if (items < 1) throw InvalidArgument("Zipf support size must be at least 1");
  if (sgn(alpha) < 0) throw InvalidArgument("Zipf exponent must be non-negative");
  const long double a = to_long_double(alpha);
  std::vector<unsigned long long> mantissas(items);
  std::vector<long> exponents(items);
  long min_exp = 0;
  for (std::size_t j = 1; j <= items; ++j) {
    long double w = std::pow(static_cast<long double>(j), -a);
    int e = 0;
    long double m = std::frexp(w, &e);
    mantissas[j - 1] = static_cast<unsigned long long>(std::ldexp(m, 64));
    exponents[j - 1] = static_cast<long>(e) - 64;
    if (j == 1 || exponents[j - 1] < min_exp) min_exp = exponents[j - 1];
  }
  std::vector<BigInt> out(items);
  for (std::size_t i = 0; i < items; ++i) {
    BigInt& w = out[i];
    mpz_import(w.get_mpz_t(), 1, 1, sizeof(unsigned long long), 0, 0, &mantissas[i]);
    mpz_mul_2exp(w.get_mpz_t(), w.get_mpz_t(), static_cast<mp_bitcnt_t>(exponents[i] - min_exp));
  }
  return out;
}

class ZipfModel final : public GenerativeModel {
 public:
  ZipfModel(std::size_t items, Rational alpha) : vocab_(Vocabulary::ranked(items)), alpha_(std::move(alpha)) {
    auto weights = zipf_weights(items, alpha_);
    std::vector<std::pair<Token, BigInt>> pairs;
    pairs.reserve(items);
    for (std::size_t i = 0; i < items; ++i) pairs.emplace_back(static_cast<Token>(i), std::move(weights[i]));
    root_ = Distribution::from_weights(std::move(pairs));
  }

  const Vocabulary& vocabulary() const override { return vocab_; }

  Distribution conditional(std::span<const Token> prefix) const override {
    if (prefix.empty()) return root_;
    return Distribution::point_mass(vocab_.end());
  }

  std::string serialize() const override {
    return format::header(kind(), vocab_) + "alpha " + to_string(alpha_) + "\n";
  }

  std::string_view kind() const override { return "zipf"; }

 private:
  Vocabulary vocab_;
  Rational alpha_;
  Distribution root_;
};

}  // namespace

ModelPtr zipf_model(std::size_t items, const Rational& alpha) { return std::make_shared<ZipfModel>(items, alpha); }

std::vector<Rational> zipf_probabilities(std::size_t items, const Rational& alpha) {
  auto weights = zipf_weights(items, alpha);
  BigInt total = 0;
  for (const auto& w : weights) total += w;
  std::vector<Rational> out;
  out.reserve(items);
  for (auto& w : weights) {
    Rational q(w, total);
    q.canonicalize();
    out.push_back(std::move(q));
  }
  return out;
}

namespace detail {

ModelPtr parse_zipf(const Vocabulary& vocab, std::span<const format::Line> body) {
  if (!vocab.implicit_names()) throw FormatError("model file: Zipf model requires 'vocab <M> ranked'");
  if (body.size() != 1 || body[0].fields.size() != 2 || body[0].fields[0] != "alpha") {
    throw FormatError("model file: Zipf model body must be a single 'alpha <q>' line");
  }
  try {
    return zipf_model(vocab.size(), parse_rational(body[0].fields[1]));
  } catch (const InvalidArgument& e) {
    format::fail(body[0], e.what());
  }
}

}  // namespace detail

}  // namespace plt
