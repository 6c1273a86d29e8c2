#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sentgen/probability.hpp"

namespace sentgen {

inline constexpr std::size_t kNoRule = std::numeric_limits<std::size_t>::max();

// Characters that may not appear inside a rule label or a token surface.
inline bool is_reserved_char(char c) {
  switch (c) {
    case '>': case ',': case '.': case '|': case '}': case '+': case '!':
    case ' ': case '\t': case '\n': case '\r': case '\v': case '\f':
      return true;
    default:
      return false;
  }
}

inline bool is_valid_symbol(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name)
    if (is_reserved_char(c)) return false;
  return true;
}

// A terminal: `dog` or `dog}2+5`.
struct TokenSpec {
  std::string surface;
  std::optional<std::vector<std::uint64_t>> units;

  friend bool operator==(const TokenSpec&, const TokenSpec&) = default;
};

struct WeightedAlternative {
  std::string symbol;
  Probability probability = Probability::one();
  std::size_t target = kNoRule;  // index of the rule named by `symbol`, filled in by classification

  friend bool operator==(const WeightedAlternative& a, const WeightedAlternative& b) {
    return a.symbol == b.symbol && a.probability == b.probability;
  }
};

// One comma-delimited element of a phrasal rule.
class Slot {
 public:
  Slot() = default;
  explicit Slot(std::vector<WeightedAlternative> alternatives) : alternatives_(std::move(alternatives)) {
    refresh();
  }

  static Slot bare(std::string symbol) { return Slot({WeightedAlternative{std::move(symbol)}}); }

  const std::vector<WeightedAlternative>& alternatives() const { return alternatives_; }
  std::vector<WeightedAlternative>& mutable_alternatives() { return alternatives_; }

  // A single unannotated symbol: expanded without consuming a random draw.
  bool is_bare() const { return alternatives_.size() == 1 && !alternatives_.front().probability.is_annotated(); }

  int max_digits() const {
    int d = 0;
    for (const auto& a : alternatives_) d = std::max(d, a.probability.digits());
    return d;
  }

  // Σ probabilities over 10^max_digits().
  std::uint64_t scaled_sum() const {
    int d = max_digits();
    std::uint64_t s = 0;
    for (const auto& a : alternatives_) s += a.probability.scaled_to(d);
    return s;
  }

  bool sum_exceeds_one() const { return scaled_sum() > pow10(max_digits()); }

  // max(0, 1 - Σ), exact.
  Probability epsilon_mass() const {
    int d = max_digits();
    std::uint64_t whole = pow10(d), s = scaled_sum();
    return s >= whole ? Probability{0, d} : Probability{whole - s, d};
  }

  // Running sums Σ_{j<=i} p_j, each rounded once from the exact value.
  const std::vector<double>& cumulative() const { return cumulative_; }

  // Probability that alternative i is selected under cumulative first-match
  // selection; differs from the annotation when Σ > 1.
  double effective_mass(std::size_t i) const {
    double hi = std::min(cumulative_[i], 1.0);
    double lo = i == 0 ? 0.0 : std::min(cumulative_[i - 1], 1.0);
    return hi > lo ? hi - lo : 0.0;
  }

  friend bool operator==(const Slot& a, const Slot& b) { return a.alternatives_ == b.alternatives_; }

 private:
  void refresh() {
    cumulative_.clear();
    int d = max_digits();
    double whole = static_cast<double>(pow10(d));
    std::uint64_t running = 0;
    for (const auto& a : alternatives_) {
      running += a.probability.scaled_to(d);
      cumulative_.push_back(static_cast<double>(running) / whole);
    }
  }

  std::vector<WeightedAlternative> alternatives_;
  std::vector<double> cumulative_;
};

enum class RuleKind { phrasal, lexical };

struct Rule {
  std::string lhs;
  RuleKind kind = RuleKind::lexical;
  std::vector<Slot> slots;          // phrasal only
  std::vector<TokenSpec> tokens;    // lexical only
  int source_line = 0;

  bool is_phrasal() const { return kind == RuleKind::phrasal; }
  bool is_lexical() const { return kind == RuleKind::lexical; }

  // Structural: source_line is not part of a rule's identity.
  friend bool operator==(const Rule& a, const Rule& b) {
    return a.lhs == b.lhs && a.kind == b.kind && a.slots == b.slots && a.tokens == b.tokens;
  }
};

// Immutable once built by parse_grammar. The first rule's lhs is the start symbol.
class Grammar {
 public:
  Grammar() = default;
  explicit Grammar(std::vector<Rule> rules) : rules_(std::move(rules)) {
    for (std::size_t i = 0; i < rules_.size(); ++i) index_.emplace(rules_[i].lhs, i);
  }

  const std::vector<Rule>& rules() const { return rules_; }
  const Rule& rule(std::size_t i) const { return rules_[i]; }
  std::size_t size() const { return rules_.size(); }

  const std::string& start() const { return rules_.front().lhs; }

  std::optional<std::size_t> find(std::string_view lhs) const {
    auto it = index_.find(std::string(lhs));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool has_units() const {
    for (const auto& r : rules_)
      for (const auto& t : r.tokens)
        if (t.units) return true;
    return false;
  }

  bool all_tokens_have_units() const {
    for (const auto& r : rules_)
      for (const auto& t : r.tokens)
        if (!t.units) return false;
    return true;
  }

  friend bool operator==(const Grammar& a, const Grammar& b) { return a.rules_ == b.rules_; }

 private:
  std::vector<Rule> rules_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace sentgen
