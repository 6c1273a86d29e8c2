#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "sentgen/diagnostic.hpp"

namespace sentgen {

// Longest digit string accepted after `.`; the original's atoi() overflowed past this.
inline constexpr int kMaxProbabilityDigits = 9;

inline constexpr std::uint64_t pow10(int exponent) {
  std::uint64_t r = 1;
  for (int i = 0; i < exponent; ++i) r *= 10;
  return r;
}

// Exact decimal fraction numerator / 10^digits. `digits` is the number of
// characters written after the `.`, so `.05` and `.5` stay distinct when
// re-rendered. A bare (unannotated) symbol carries {1, 0}, i.e. exactly 1.
class Probability {
 public:
  constexpr Probability() = default;
  constexpr Probability(std::uint64_t numerator, int digits) : numerator_(numerator), digits_(digits) {}

  static constexpr Probability one() { return {1, 0}; }

  constexpr std::uint64_t numerator() const { return numerator_; }
  constexpr int digits() const { return digits_; }
  constexpr std::uint64_t denominator() const { return pow10(digits_); }
  constexpr bool is_annotated() const { return digits_ > 0; }

  double to_double() const { return static_cast<double>(numerator_) / static_cast<double>(denominator()); }

  // Numerator expressed over 10^target_digits (target_digits >= digits()).
  constexpr std::uint64_t scaled_to(int target_digits) const {
    return numerator_ * pow10(target_digits - digits_);
  }

  // Source spelling of the annotation without the leading `.`, zero padded.
  std::string digit_string() const {
    std::string s = std::to_string(numerator_);
    if (static_cast<int>(s.size()) < digits_) s.insert(0, digits_ - s.size(), '0');
    return s;
  }

  // Structural equality: `.5` and `.50` are different annotations.
  friend constexpr bool operator==(const Probability&, const Probability&) = default;

  // Value ordering.
  friend constexpr bool value_less(const Probability& a, const Probability& b) {
    int d = a.digits_ > b.digits_ ? a.digits_ : b.digits_;
    return a.scaled_to(d) < b.scaled_to(d);
  }

 private:
  std::uint64_t numerator_ = 0;
  int digits_ = 0;
};

// integer(digits) / 10^len(digits), exactly.
inline Probability parse_probability(std::string_view digits, int line = 0) {
  if (digits.empty()) throw GrammarError(make_error("empty-probability", "no digits after '.'", line));
  for (char c : digits) {
    if (c < '0' || c > '9') {
      throw GrammarError(make_error("bad-probability",
                                    "probability '." + std::string(digits) + "' contains a non-digit", line));
    }
  }
  if (static_cast<int>(digits.size()) > kMaxProbabilityDigits) {
    throw GrammarError(make_error("bad-probability",
                                  "probability '." + std::string(digits) + "' has more than " +
                                      std::to_string(kMaxProbabilityDigits) + " digits",
                                  line));
  }
  std::uint64_t n = 0;
  for (char c : digits) n = n * 10 + static_cast<std::uint64_t>(c - '0');
  return {n, static_cast<int>(digits.size())};
}

}  // namespace sentgen
