#include <gtest/gtest.h>

#include <random>

#include "sentgen/probability.hpp"

using namespace sentgen;

namespace {
std::string code_of(std::string_view digits) {
  try {
    parse_probability(digits);
  } catch (const GrammarError& e) {
    return e.diagnostic().code;
  }
  return "";
}
}  // namespace

TEST(ParseProbability, Examples) {
  EXPECT_EQ(parse_probability("3"), Probability(3, 1));
  EXPECT_EQ(parse_probability("33"), Probability(33, 2));
  EXPECT_EQ(parse_probability("05"), Probability(5, 2));
  EXPECT_DOUBLE_EQ(parse_probability("05").to_double(), 0.05);
  EXPECT_EQ(parse_probability("05").digit_string(), "05");
}

TEST(ParseProbability, Errors) {
  EXPECT_EQ(code_of(""), "empty-probability");
  EXPECT_EQ(code_of("3a"), "bad-probability");
  EXPECT_EQ(code_of("-3"), "bad-probability");
  EXPECT_EQ(code_of("1234567890"), "bad-probability");
}

TEST(ParseProbability, DigitCountIsPartOfIdentity) {
  EXPECT_NE(parse_probability("5"), parse_probability("50"));
  EXPECT_FALSE(value_less(parse_probability("5"), parse_probability("50")));
  EXPECT_FALSE(value_less(parse_probability("50"), parse_probability("5")));
  EXPECT_TRUE(value_less(parse_probability("05"), parse_probability("5")));
}

// Every non-zero digit string up to 9 long is integer(d) / 10^len(d), exactly, in (0, 1].
TEST(ParseProbability, ExactRationalProperty) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 5000; ++trial) {
    int len = std::uniform_int_distribution<int>(1, 9)(rng);
    std::string d;
    std::uint64_t expect = 0;
    for (int i = 0; i < len; ++i) {
      int c = std::uniform_int_distribution<int>(0, 9)(rng);
      d += static_cast<char>('0' + c);
      expect = expect * 10 + c;
    }
    if (expect == 0) continue;
    Probability p = parse_probability(d);
    ASSERT_EQ(p.numerator(), expect);
    ASSERT_EQ(p.denominator(), pow10(len));
    ASSERT_GT(p.to_double(), 0.0);
    ASSERT_LE(p.to_double(), 1.0);
    ASSERT_EQ(p.digit_string(), d);
  }
}
