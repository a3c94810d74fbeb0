// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#include <gtest/gtest.h>

#include "plt/error.hpp"
#include "plt/rational.hpp"

using namespace plt;

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
  EXPECT_EQ(parse_rational("9/20"), Rational(9, 20));
  EXPECT_EQ(parse_rational("6/20"), Rational(3, 10));
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_EQ(parse_rational("0.45"), Rational(9, 20));
  EXPECT_EQ(parse_rational("-1/4"), Rational(-1, 4));
}

TEST(Rational, RejectsMalformedText) {
  EXPECT_THROW(parse_rational("1/0"), InvalidArgument);
  EXPECT_THROW(parse_rational("abc"), InvalidArgument);
  EXPECT_THROW(parse_rational(""), InvalidArgument);
  EXPECT_THROW(parse_rational("1/2/3"), InvalidArgument);
}

TEST(Rational, PrintsNumOverDen) {
  EXPECT_EQ(to_string(Rational(3, 4)), "3/4");
  EXPECT_EQ(to_string(Rational(2)), "2/1");
  EXPECT_EQ(to_string(Rational(0)), "0/1");
}

TEST(Rational, FromDoubleIsExact) {
  EXPECT_EQ(rational_from_double(0.5L), Rational(1, 2));
  Rational tenth = rational_from_double(static_cast<long double>(0.1));
  EXPECT_EQ(tenth, Rational(BigInt("3602879701896397"), BigInt("36028797018963968")));
}

TEST(Rational, CeilNegLog2) {
  EXPECT_EQ(ceil_neg_log2(Rational(1)), 0U);
  EXPECT_EQ(ceil_neg_log2(Rational(1, 2)), 1U);
  EXPECT_EQ(ceil_neg_log2(Rational(3, 10)), 2U);
  EXPECT_EQ(ceil_neg_log2(Rational(3, 20)), 3U);
  EXPECT_EQ(ceil_neg_log2(Rational(1, 1024)), 10U);
  EXPECT_EQ(ceil_neg_log2(Rational(1, 1025)), 11U);
}

TEST(Rational, NegLog2AndLongDouble) {
  EXPECT_DOUBLE_EQ(neg_log2(Rational(1, 8)), 3.0);
  EXPECT_NEAR(neg_log2(Rational(3, 10)), 1.7369655941662063, 1e-12);
  EXPECT_NEAR(static_cast<double>(to_long_double(Rational(1, 3))), 1.0 / 3, 1e-16);
  Rational huge(BigInt(1), BigInt(1) << 2000);
  EXPECT_NEAR(static_cast<double>(to_long_double(huge * (BigInt(1) << 1999))), 0.5, 0);
}
