// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The PLT Toolkit Authors

#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "plt/error.hpp"
#include "plt/model.hpp"

using namespace plt;
using plt::testing::abc;

TEST(Vocabulary, ReservedIdsSitAboveUserSymbols) {
  Vocabulary v = abc();
  EXPECT_EQ(v.size(), 3U);
  EXPECT_EQ(v.end(), 3U);
  EXPECT_EQ(v.escape(), 4U);
  EXPECT_TRUE(v.is_user(2));
  EXPECT_TRUE(v.is_reserved(3));
  EXPECT_EQ(v.name(1), "B");
  EXPECT_EQ(v.name(v.end()), "$");
  EXPECT_EQ(v.name(v.escape()), "<esc>");
  EXPECT_EQ(v.find("C"), std::optional<Token>(2));
  EXPECT_FALSE(v.find("D"));
}

TEST(Vocabulary, ParsesCompactAndSpacedText) {
  Vocabulary v = abc();
  EXPECT_EQ(v.parse_sequence("BA"), (Sequence{1, 0}));
  EXPECT_EQ(v.parse_sequence("B A"), (Sequence{1, 0}));
  EXPECT_EQ(v.parse_sequence(""), Sequence{});
  EXPECT_EQ(v.format_sequence(Sequence{1, 0, 2}), "BAC");
  EXPECT_THROW(v.parse_sequence("BX"), InvalidArgument);
}

TEST(Vocabulary, UnknownSymbolsGetIdsAboveEscape) {
  Vocabulary v = abc();
  std::vector<std::string> unknown;
  EXPECT_EQ(v.parse_sequence("AXBY", &unknown), (Sequence{0, 5, 1, 6}));
  EXPECT_EQ(v.parse_sequence("Y", &unknown), (Sequence{6}));
  EXPECT_EQ(unknown, (std::vector<std::string>{"X", "Y"}));
  EXPECT_EQ(v.format_sequence(Sequence{0, 5, 6}, unknown), "AXY");
}

TEST(Vocabulary, RankedNames) {
  Vocabulary v = Vocabulary::ranked(12);
  EXPECT_EQ(v.name(0), "1");
  EXPECT_EQ(v.parse_sequence("12 3"), (Sequence{11, 2}));
  EXPECT_EQ(v.format_sequence(Sequence{11, 2}), "12 3");
}

TEST(Vocabulary, RejectsReservedOrMalformedNames) {
  EXPECT_FALSE(valid_symbol_name("^"));
  EXPECT_FALSE(valid_symbol_name("$"));
  EXPECT_FALSE(valid_symbol_name("a:b"));
  EXPECT_FALSE(valid_symbol_name("a=b"));
  EXPECT_FALSE(valid_symbol_name("a b"));
  EXPECT_TRUE(valid_symbol_name("E"));
  EXPECT_THROW(Vocabulary({"A", "A"}), InvalidArgument);
}

TEST(Distribution, NormalizesWeights) {
  auto d = Distribution::from_weights({{1, BigInt(4)}, {0, BigInt(2)}, {2, BigInt(0)}, {0, BigInt(2)}});
  EXPECT_EQ(d.support_size(), 2U);
  EXPECT_EQ(d.denominator(), 2);
  EXPECT_EQ(d.probability(0), Rational(1, 2));
  EXPECT_EQ(d.probability(2), Rational(0));
  EXPECT_EQ(d.weight(2), nullptr);
  EXPECT_THROW(Distribution::from_weights({{0, BigInt(0)}}), InvalidArgument);
}

TEST(Distribution, ProbabilitiesMustSumToOne) {
  EXPECT_THROW(Distribution::from_probabilities({{0, Rational(1, 2)}, {1, Rational(1, 3)}}), InvalidArgument);
  EXPECT_EQ(plt::testing::fig1_root().probability(1), Rational(3, 10));
}

TEST(Distribution, EscapeAndMix) {
  auto d = plt::testing::fig1_root().with_escape(Rational(1, 4), 4);
  EXPECT_EQ(d.probability(4), Rational(1, 4));
  EXPECT_EQ(d.probability(0), Rational(27, 80));
  auto m = plt::testing::fig1_root().mix(Distribution::point_mass(0), Rational(1, 2));
  EXPECT_EQ(m.probability(0), Rational(29, 40));
  EXPECT_EQ(m.probability(1), Rational(3, 20));
  EXPECT_EQ(m.probability(2), Rational(1, 8));
}

TEST(TableModel, RowsAndFallback) {
  auto m = plt::testing::fig1_two_level();
  EXPECT_EQ(m->conditional(Sequence{}), plt::testing::fig1_root());
  EXPECT_EQ(m->conditional(Sequence{1}), plt::testing::fig1_after_b());
  EXPECT_EQ(m->conditional(Sequence{1, 0}), Distribution::point_mass(3));
  EXPECT_EQ(sequence_probability(*m, Sequence{1, 0}), Rational(3, 20));
  EXPECT_EQ(sequence_probability(*m, Sequence{1}), Rational(0));
}

TEST(ModelIo, SerializationRoundTripsForEveryKind) {
  std::vector<ModelPtr> models{plt::testing::fig1_two_level(), zipf_model(7, Rational(6, 5)),
                               with_escape(plt::testing::fig1_one_level(), Rational(1, 256))};
  std::vector<Sequence> corpus{{0, 1}, {0}, {2, 2, 1}};
  models.push_back(ngram_model(abc(), corpus, 3, Rational(1, 2)));
  PolicyTable policy{Vocabulary({"left", "right"}), {}};
  policy.weights[Sequence{}] = {{0, Rational(2)}, {1, Rational(1)}};
  policy.weights[Sequence{0}] = {{1, Rational(1, 3)}};
  models.push_back(from_policy(policy));
  for (const auto& m : models) {
    std::string text = m->serialize();
    auto back = parse_model(text);
    EXPECT_EQ(back->serialize(), text) << m->kind();
    EXPECT_EQ(back->kind(), m->kind());
    EXPECT_EQ(m->description_bits(), 8 * text.size());
  }
}

TEST(ModelIo, ReportsTheFailingLine) {
  try {
    parse_model("PLTMODEL 1\nkind table\nvocab 2 A B\ndefault A:1/2 Q:1/2\n");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.position(), 34U);  // start of the default line
  }
  EXPECT_THROW(parse_model("PLTMODEL 2\n"), FormatError);
  EXPECT_THROW(parse_model("PLTMODEL 1\nkind nope\n"), FormatError);
}

TEST(NgramModel, AddKSmoothingCounts) {
  Vocabulary v({"A", "B"});
  std::vector<Sequence> corpus{{0, 1}, {0}};
  auto m = ngram_model(v, corpus, 2, Rational(1));
  // context ^: A twice; context A: B once, END once; context B: END once
  EXPECT_EQ(m->conditional(Sequence{}).probability(0), Rational(3, 5));
  EXPECT_EQ(m->conditional(Sequence{}).probability(v.end()), Rational(1, 5));
  EXPECT_EQ(m->conditional(Sequence{0}).probability(v.end()), Rational(2, 5));
  EXPECT_EQ(m->conditional(Sequence{0}).probability(0), Rational(1, 5));
  EXPECT_EQ(m->conditional(Sequence{1, 1}).probability(v.end()), Rational(1, 2));
  auto half = ngram_model(v, corpus, 2, Rational(1, 2));
  EXPECT_EQ(half->conditional(Sequence{}).probability(0), Rational(5, 7));
}

TEST(NgramModel, UnigramIgnoresContext) {
  Vocabulary v({"A", "B"});
  std::vector<Sequence> corpus{{0, 0, 1}};
  auto m = ngram_model(v, corpus, 1, Rational(1));
  EXPECT_EQ(m->conditional(Sequence{}), m->conditional(Sequence{1, 0}));
  EXPECT_EQ(m->conditional(Sequence{}).probability(0), Rational(3, 7));
}

TEST(ZipfModel, ExactNormalizationAndShape) {
  auto p = zipf_probabilities(10, Rational(1));
  Rational total = 0;
  for (const auto& q : p) total += q;
  EXPECT_EQ(total, 1);
  EXPECT_EQ(p[0] / p[1], 2);
  EXPECT_EQ(p[0] / p[3], 4);
  const double h10 = 7381.0 / 2520.0;
  for (std::size_t j = 0; j < 10; ++j) {
    EXPECT_NEAR(static_cast<double>(to_long_double(p[j])), 1.0 / ((j + 1) * h10), 1e-15);
  }
  auto m = zipf_model(10, Rational(1));
  EXPECT_EQ(m->conditional(Sequence{}).probability(2), p[2]);
  EXPECT_EQ(m->conditional(Sequence{4}), Distribution::point_mass(m->vocabulary().end()));
}

TEST(ZipfModel, StrictlyDecreasingAtLargeSupport) {
  auto p = zipf_probabilities(20000, Rational(1));
  for (std::size_t j = 1; j < p.size(); ++j) ASSERT_LT(p[j], p[j - 1]) << j;
}

TEST(PolicyModel, NormalizesPerState) {
  PolicyTable policy{Vocabulary({"L", "R"}), {}};
  policy.weights[Sequence{}] = {{0, Rational(3)}, {1, Rational(1)}};
  auto m = from_policy(policy);
  EXPECT_EQ(m->conditional(Sequence{}).probability(0), Rational(3, 4));
  EXPECT_EQ(m->conditional(Sequence{0}), Distribution::point_mass(2));
  policy.weights[Sequence{1}] = {{0, Rational(0)}};
  EXPECT_THROW(from_policy(policy), InvalidArgument);
}

TEST(EscapeModel, ScalesEveryConditional) {
  auto m = with_escape(plt::testing::fig1_two_level(), Rational(1, 10));
  auto d = m->conditional(Sequence{1});
  EXPECT_EQ(d.probability(m->vocabulary().escape()), Rational(1, 10));
  EXPECT_EQ(d.probability(0), Rational(9, 20));
  EXPECT_THROW(with_escape(plt::testing::fig1_two_level(), Rational(1)), InvalidArgument);
}

TEST(KlAtPrefix, ZeroForEqualAndPositiveOtherwise) {
  auto m1 = plt::testing::fig1_two_level();
  auto m2 = table_model(abc(), {{Sequence{}, plt::testing::fig1_root()}}, plt::testing::fig1_root());
  EXPECT_EQ(kl_at_prefix(*m1, *m1, Sequence{1}), 0.0);
  EXPECT_EQ(kl_at_prefix(*m1, *m2, Sequence{}), 0.0);
  // 0.5 log2(0.5/0.45) + 0.2 log2(0.2/0.25)
  EXPECT_NEAR(kl_at_prefix(*m1, *m2, Sequence{1}), 0.011615927745052573, 1e-12);
  EXPECT_THROW(kl_at_prefix(*m1, *m2, Sequence{0, 0}), AbsoluteContinuityError);
}

TEST(Sampling, DeterministicForASeed) {
  auto m = ngram_model(abc(), std::vector<Sequence>{{0, 1, 2}, {1}}, 2, Rational(1));
  std::mt19937_64 a(7), b(7);
  for (int i = 0; i < 50; ++i) {
    Sequence s = sample_sequence(*m, a);
    EXPECT_EQ(s, sample_sequence(*m, b));
    EXPECT_GT(sequence_probability(*m, s), 0);
  }
}
