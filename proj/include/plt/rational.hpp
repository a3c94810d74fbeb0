// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace plt {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Parses `num/den`, a bare integer, or a finite decimal such as `0.45`.
/// The result is exact and canonical.
Rational parse_rational(std::string_view text);

/// Canonical `num/den` spelling (denominator always present).
std::string to_string(const Rational& q);

/// Exact conversion of a binary floating-point value.
Rational rational_from_double(long double value);

long double to_long_double(const Rational& q);

/// Smallest k >= 0 with 2^k >= 1/q, for q in (0, 1]. This is ceil(-log2 q) computed exactly.
std::uint32_t ceil_neg_log2(const Rational& q);

/// -log2 q in floating point, for q in (0, 1].
double neg_log2(const Rational& q);

}  // namespace plt
