// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#include <cmath>

#include "plt/error.hpp"
#include "plt/model.hpp"
#include "format.hpp"

namespace plt {

namespace detail {
ModelPtr parse_table(const Vocabulary& vocab, std::span<const format::Line> body);
ModelPtr parse_ngram(const Vocabulary& vocab, std::span<const format::Line> body);
ModelPtr parse_zipf(const Vocabulary& vocab, std::span<const format::Line> body);
ModelPtr parse_policy(const Vocabulary& vocab, std::span<const format::Line> body);
}  // namespace detail

ModelPtr parse_model(std::string_view text) {
  auto lines = format::split_lines(text);
  if (lines.empty() || lines[0].fields.size() != 2 || lines[0].fields[0] != "PLTMODEL") {
    throw FormatError("model file: missing 'PLTMODEL 1' header", 0);
  }
  if (lines[0].fields[1] != "1") format::fail(lines[0], "unsupported model format version");
  if (lines.size() < 2 || lines[1].fields.size() != 2 || lines[1].fields[0] != "kind") {
    throw FormatError("model file: missing 'kind' line", lines.size() > 1 ? lines[1].offset : 0);
  }
  const auto kind = lines[1].fields[1];

  if (kind == "escape") {
    if (lines.size() < 4 || lines[2].fields.size() != 2 || lines[2].fields[0] != "epsilon" ||
        lines[3].fields.size() != 1 || lines[3].fields[0] != "base") {
      throw FormatError("model file: escape model needs 'epsilon <q>' and 'base' lines", lines[1].offset);
    }
    Rational eps;
    try {
      eps = parse_rational(lines[2].fields[1]);
    } catch (const InvalidArgument& e) {
      format::fail(lines[2], e.what());
    }
    std::size_t base_offset = lines[3].offset + text.substr(lines[3].offset).find('\n') + 1;
    ModelPtr base;
    try {
      base = parse_model(text.substr(std::min(base_offset, text.size())));
    } catch (const FormatError& e) {
      throw FormatError(e.what(), base_offset + e.position());
    }
    try {
      return with_escape(std::move(base), eps);
    } catch (const InvalidArgument& e) {
      format::fail(lines[2], e.what());
    }
  }

  if (lines.size() < 3) throw FormatError("model file: missing 'vocab' line", lines[1].offset);
  Vocabulary vocab = format::parse_vocab(lines[2]);
  std::span<const format::Line> body(lines.begin() + 3, lines.end());
  if (kind == "table") return detail::parse_table(vocab, body);
  if (kind == "ngram") return detail::parse_ngram(vocab, body);
  if (kind == "zipf") return detail::parse_zipf(vocab, body);
  if (kind == "policy") return detail::parse_policy(vocab, body);
  format::fail(lines[1], "unknown model kind '" + std::string(kind) + "'");
}

double kl_at_prefix(const GenerativeModel& m1, const GenerativeModel& m2, std::span<const Token> prefix) {
  Distribution p = m1.conditional(prefix);
  Distribution q = m2.conditional(prefix);
  if (p == q) return 0.0;
  double total = 0.0;
  for (const auto& e : p.entries()) {
    const BigInt* qw = q.weight(e.token);
    if (!qw) {
      throw AbsoluteContinuityError("second model assigns zero mass to token " + std::to_string(e.token) +
                                    " which the first model supports");
    }
    Rational pt(e.weight, p.denominator());
    Rational ratio = pt / Rational(*qw, q.denominator());
    // p log2(p/q) with the ratio taken exactly, so equal entries contribute exactly 0.
    total += pt.get_d() * (ratio == 1 ? 0.0 : -neg_log2(ratio));
  }
  return std::max(total, 0.0);
}

Rational sequence_probability(const GenerativeModel& model, std::span<const Token> seq) {
  Rational p = 1;
  for (std::size_t i = 0; i <= seq.size(); ++i) {
    Token next = i < seq.size() ? seq[i] : model.vocabulary().end();
    Distribution d = model.conditional(seq.first(i));
    const BigInt* w = d.weight(next);
    if (!w) return Rational(0);
    p *= Rational(*w, d.denominator());
  }
  p.canonicalize();
  return p;
}

namespace {

BigInt uniform_below(const BigInt& bound, std::mt19937_64& rng) {
  if (bound.fits_ulong_p()) {
    std::uniform_int_distribution<unsigned long> pick(0, bound.get_ui() - 1);
    return BigInt(pick(rng));
  }
  // Rejection sampling over whole 64-bit limbs.
  std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  std::size_t limbs = (bits + 63) / 64;
  BigInt candidate;
  do {
    std::vector<unsigned long long> words(limbs);
    for (auto& w : words) w = rng();
    mpz_import(candidate.get_mpz_t(), limbs, 1, sizeof(unsigned long long), 0, 0, words.data());
    mpz_fdiv_r_2exp(candidate.get_mpz_t(), candidate.get_mpz_t(), bits);
  } while (candidate >= bound);
  return candidate;
}

}  // namespace

Sequence sample_sequence(const GenerativeModel& model, std::mt19937_64& rng, std::size_t max_length) {
  Sequence seq;
  const Token end = model.vocabulary().end();
  for (;;) {
    Distribution d = model.conditional(seq);
    BigInt u = uniform_below(d.denominator(), rng);
    Token chosen = d.entries().back().token;
    for (const auto& e : d.entries()) {
      if (u < e.weight) {
        chosen = e.token;
        break;
      }
      u -= e.weight;
    }
    if (chosen == end) return seq;
    if (seq.size() == max_length) throw DecodeError("sampled sequence exceeded the length cap");
    seq.push_back(chosen);
  }
}

}  // namespace plt
