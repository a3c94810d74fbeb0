// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#include "plt/rational.hpp"

#include <cmath>

#include "plt/error.hpp"

namespace plt {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw InvalidArgument("not a rational number: '" + std::string(whole) + "'");
  BigInt value(std::string(s), 10);
  return negative ? BigInt(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash), text);
    BigInt den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw InvalidArgument("zero denominator in '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !int_part.empty() && int_part.front() == '-';
    if (!frac.empty() && !all_digits(frac)) {
      throw InvalidArgument("not a rational number: '" + std::string(text) + "'");
    }
    std::string_view digits = int_part;
    if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
    if (digits.empty() && frac.empty()) {
      throw InvalidArgument("not a rational number: '" + std::string(text) + "'");
    }
    BigInt whole = digits.empty() ? BigInt(0) : parse_integer(digits, text);
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    BigInt frac_value = frac.empty() ? BigInt(0) : BigInt(std::string(frac), 10);
    Rational q(whole * scale + frac_value, scale);
    q.canonicalize();
    return negative ? Rational(-q) : q;
  }
  return Rational(parse_integer(text, text));
}

std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational rational_from_double(long double value) {
  if (!std::isfinite(value)) throw InvalidArgument("non-finite value has no rational form");
  if (value == 0) return Rational(0);
  int exponent = 0;
  long double mantissa = std::frexp(value, &exponent);
  // 64 mantissa bits cover x87 long double; the product is an exact integer.
  long double scaled = std::ldexp(mantissa, 64);
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  auto bits = static_cast<unsigned long long>(scaled);
  BigInt num;
  mpz_import(num.get_mpz_t(), 1, 1, sizeof(bits), 0, 0, &bits);
  if (negative) num = -num;
  int shift = exponent - 64;
  Rational q(num);
  if (shift > 0) {
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(shift));
  } else if (shift < 0) {
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-shift));
  }
  return q;
}

long double to_long_double(const Rational& q) {
  long num_exp = 0;
  long den_exp = 0;
  long double num_m = mpz_get_d_2exp(&num_exp, q.get_num_mpz_t());
  long double den_m = mpz_get_d_2exp(&den_exp, q.get_den_mpz_t());
  return std::ldexp(num_m / den_m, static_cast<int>(num_exp - den_exp));
}

std::uint32_t ceil_neg_log2(const Rational& q) {
  if (sgn(q) <= 0 || q > 1) throw InvalidArgument("ceil_neg_log2 requires q in (0, 1]");
  // Find smallest k with num * 2^k >= den.
  const BigInt& num = q.get_num();
  const BigInt& den = q.get_den();
  std::size_t num_bits = mpz_sizeinbase(num.get_mpz_t(), 2);
  std::size_t den_bits = mpz_sizeinbase(den.get_mpz_t(), 2);
  std::size_t k = den_bits > num_bits ? den_bits - num_bits : 0;
  if (k > 0) --k;
  BigInt shifted;
  for (;; ++k) {
    mpz_mul_2exp(shifted.get_mpz_t(), num.get_mpz_t(), k);
    if (shifted >= den) return static_cast<std::uint32_t>(k);
  }
}

double neg_log2(const Rational& q) {
  if (sgn(q) <= 0) throw InvalidArgument("neg_log2 of a non-positive value");
  long num_exp = 0;
  long den_exp = 0;
  double num_m = mpz_get_d_2exp(&num_exp, q.get_num_mpz_t());
  double den_m = mpz_get_d_2exp(&den_exp, q.get_den_mpz_t());
  return -(std::log2(num_m) - std::log2(den_m) + static_cast<double>(num_exp - den_exp));
}

}  // namespace plt
