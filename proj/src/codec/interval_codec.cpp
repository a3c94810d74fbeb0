// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#include <algorithm>
#include <numeric>

#include "plt/codec.hpp"
#include "plt/error.hpp"

namespace plt {

TokenOrder TokenOrder::shuffled(std::size_t token_count, std::mt19937_64& rng) {
  TokenOrder order;
  order.rank_.resize(token_count);
  std::iota(order.rank_.begin(), order.rank_.end(), 0U);
  std::shuffle(order.rank_.begin(), order.rank_.end(), rng);
  return order;
}

namespace {

// Entries of d in sigma order.
std::vector<const Distribution::Entry*> ordered_entries(const Distribution& d, const TokenOrder& order) {
  std::vector<const Distribution::Entry*> out;
  out.reserve(d.support_size());
  for (const auto& e : d.entries()) out.push_back(&e);
  if (!order.ascending()) {
    std::sort(out.begin(), out.end(),
              [&](const auto* a, const auto* b) { return order.rank(a->token) < order.rank(b->token); });
  }
  return out;
}

}  // namespace

CumulativeTable CumulativeTable::build(const Distribution& d, const TokenOrder& order) {
  CumulativeTable table;
  BigInt running = 0;
  for (const auto* e : ordered_entries(d, order)) {
    Rational start(running, d.denominator());
    Rational mass(e->weight, d.denominator());
    start.canonicalize();
    mass.canonicalize();
    table.rows.push_back({e->token, std::move(start), std::move(mass)});
    running += e->weight;
  }
  return table;
}

IntervalCode encode_interval(const GenerativeModel& model, std::span<const Token> s, const TokenOrder& order) {
  Rational low = 0;
  Rational width = 1;
  const Token end = model.vocabulary().end();
  for (std::size_t i = 0; i <= s.size(); ++i) {
    const Token t = i < s.size() ? s[i] : end;
    Distribution d = model.conditional(s.first(i));
    BigInt before = 0;
    const BigInt* mass = nullptr;
    if (order.ascending()) {
      for (const auto& e : d.entries()) {
        if (e.token == t) {
          mass = &e.weight;
          break;
        }
        before += e.weight;
      }
    } else {
      const std::uint64_t rank = order.rank(t);
      for (const auto& e : d.entries()) {
        if (e.token == t) {
          mass = &e.weight;
        } else if (order.rank(e.token) < rank) {
          before += e.weight;
        }
      }
    }
    if (!mass) {
      throw UnencodableError(t == end ? "END has zero probability" : "token has zero probability", i);
    }
    Rational offset(before, d.denominator());
    low += width * offset;
    width *= Rational(*mass, d.denominator());
    low.canonicalize();
    width.canonicalize();
  }
  Interval interval{low, low + width};
  return {std::move(interval), code_length_of(width)};
}

Sequence decode_interval(const GenerativeModel& model, const Rational& z, std::size_t depth_cap,
                         const TokenOrder& order) {
  if (sgn(z) < 0 || z >= 1) throw InvalidArgument("decode point must lie in [0, 1)");
  const Token end = model.vocabulary().end();
  Rational low = 0;
  Rational width = 1;
  Sequence out;
  for (;;) {
    Distribution d = model.conditional(out);
    // Position of z inside the current interval, scaled to the denominator.
    Rational scaled = (z - low) / width * d.denominator();
    BigInt target;
    mpz_fdiv_q(target.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    BigInt running = 0;
    const Distribution::Entry* chosen = nullptr;
    for (const auto* e : ordered_entries(d, order)) {
      if (target < running + e->weight) {
        chosen = e;
        break;
      }
      running += e->weight;
    }
    if (!chosen) throw DecodeError("decode point fell outside every child interval");
    low += width * Rational(running, d.denominator());
    width *= Rational(chosen->weight, d.denominator());
    low.canonicalize();
    width.canonicalize();
    if (chosen->token == end) return out;
    if (out.size() == depth_cap) throw DecodeError("no END within the decode depth cap");
    out.push_back(chosen->token);
  }
}

CodeLength code_length_of(const Rational& probability) {
  if (sgn(probability) <= 0 || probability > 1) throw InvalidArgument("code length needs a probability in (0, 1]");
  return {ceil_neg_log2(probability) + 1};
}

CodeLength code_length(const GenerativeModel& model, std::span<const Token> s) {
  Rational p = 1;
  const Token end = model.vocabulary().end();
  for (std::size_t i = 0; i <= s.size(); ++i) {
    const Token t = i < s.size() ? s[i] : end;
    Distribution d = model.conditional(s.first(i));
    const BigInt* w = d.weight(t);
    if (!w) throw UnencodableError(t == end ? "END has zero probability" : "token has zero probability", i);
    p *= Rational(*w, d.denominator());
  }
  p.canonicalize();
  return code_length_of(p);
}

}  // namespace plt
