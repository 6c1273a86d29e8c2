#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sentgen/derivation.hpp"
#include "sentgen/grammar.hpp"
#include "sentgen/validate.hpp"

namespace sentgen {

struct CorpusStats {
  std::size_t sentence_count = 0;
  std::size_t token_count = 0;
  std::map<std::size_t, std::size_t> length_histogram;
  std::map<std::string, std::size_t> surface_freq;
  std::map<std::string, std::size_t> category_freq;
  std::map<std::pair<std::string, std::string>, std::size_t> token_freq;  // (category, surface)

  void add(const Sentence& s) {
    ++sentence_count;
    token_count += s.size();
    ++length_histogram[s.size()];
    for (const auto& t : s.tokens) {
      ++surface_freq[t.surface];
      ++category_freq[t.category];
      ++token_freq[{t.category, t.surface}];
    }
  }

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

inline CorpusStats compute_stats(std::span<const Sentence> corpus) {
  CorpusStats st;
  for (const auto& s : corpus) st.add(s);
  return st;
}

enum class CheckKind { slot_alternative, lexical_token };

struct ProbabilityCheck {
  CheckKind kind;
  std::string target;
  double declared = 0;
  double observed = 0;
  std::size_t sample_size = 0;
  double z_score = 0;

  // Three binomial standard deviations around `declared`.
  double tolerance() const {
    if (sample_size == 0) return 0;
    return 3.0 * std::sqrt(declared * (1.0 - declared) / static_cast<double>(sample_size));
  }
};

inline double binomial_z(double declared, double observed, std::size_t n) {
  if (n == 0 || declared <= 0.0 || declared >= 1.0) return 0.0;
  return (observed - declared) / std::sqrt(declared * (1.0 - declared) / static_cast<double>(n));
}

struct ProbabilityReport {
  std::vector<ProbabilityCheck> checks;
  std::vector<std::string> unchecked;
};

// Compares a corpus against the probabilities the grammar declares.
//
// An annotated alternative X in slot i of rule R is checkable when R is
// expanded exactly once in every derivation and there is a set D of lexical
// categories such that
//   - D is reachable through (R, i, X) and through no other edge, and
//   - every expansion of X emits at least one D token.
// Then "the sentence contains a D token" is exactly the event "slot i chose X".
// Anything else is reported as unchecked.
class ProbabilityAudit {
 public:
  explicit ProbabilityAudit(const Grammar& g) : grammar_(g) { plan(); }

  void observe(const Sentence& s) {
    ++sentences_;
    std::vector<bool> present(grammar_.size(), false);
    for (const auto& t : s.tokens)
      if (auto r = grammar_.find(t.category)) present[*r] = true;
    for (auto& sc : slot_checks_) {
      for (std::size_t c : sc.categories)
        if (present[c]) {
          ++sc.hits;
          break;
        }
    }
  }

  ProbabilityReport report(const CorpusStats& stats) const {
    ProbabilityReport rep;
    rep.unchecked = unchecked_;
    for (const auto& sc : slot_checks_) {
      ProbabilityCheck c{CheckKind::slot_alternative, sc.name, sc.declared, 0, sentences_, 0};
      if (sentences_ > 0) c.observed = static_cast<double>(sc.hits) / static_cast<double>(sentences_);
      c.z_score = binomial_z(c.declared, c.observed, c.sample_size);
      rep.checks.push_back(std::move(c));
    }
    for (std::size_t r = 0; r < grammar_.size(); ++r) {
      const Rule& rule = grammar_.rule(r);
      if (!rule.is_lexical() || !reachable_[r]) continue;
      auto cat = stats.category_freq.find(rule.lhs);
      std::map<std::string, std::size_t> multiplicity;
      for (const auto& t : rule.tokens) ++multiplicity[t.surface];
      for (const auto& [surface, m] : multiplicity) {
        std::string name = rule.lhs + ": " + surface;
        if (cat == stats.category_freq.end() || cat->second == 0) {
          rep.unchecked.push_back(name + " (category never emitted)");
          continue;
        }
        ProbabilityCheck c{CheckKind::lexical_token, name,
                           static_cast<double>(m) / static_cast<double>(rule.tokens.size()), 0, cat->second, 0};
        auto hit = stats.token_freq.find({rule.lhs, surface});
        std::size_t n = hit == stats.token_freq.end() ? 0 : hit->second;
        c.observed = static_cast<double>(n) / static_cast<double>(cat->second);
        c.z_score = binomial_z(c.declared, c.observed, c.sample_size);
        rep.checks.push_back(std::move(c));
      }
    }
    return rep;
  }

 private:
  struct SlotCheck {
    std::string name;
    double declared;
    std::vector<std::size_t> categories;  // D, as rule indices
    std::size_t hits = 0;
  };

  struct Edge {
    std::size_t rule, slot, alt;
  };

  // Lexical rules reachable from `from`, optionally pretending one edge is absent.
  std::vector<bool> lexical_reach(std::size_t from, const Edge* skip) const {
    std::vector<bool> seen(grammar_.size(), false);
    std::vector<std::size_t> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
      std::size_t r = stack.back();
      stack.pop_back();
      const auto& slots = grammar_.rule(r).slots;
      for (std::size_t s = 0; s < slots.size(); ++s)
        for (std::size_t a = 0; a < slots[s].alternatives().size(); ++a) {
          if (skip && skip->rule == r && skip->slot == s && skip->alt == a) continue;
          std::size_t t = slots[s].alternatives()[a].target;
          if (!seen[t]) {
            seen[t] = true;
            stack.push_back(t);
          }
        }
    }
    for (std::size_t r = 0; r < seen.size(); ++r)
      if (grammar_.rule(r).is_phrasal()) seen[r] = false;
    return seen;
  }

  // Least fixed point of "every expansion of rule r emits a token in D".
  std::vector<bool> must_emit(const std::vector<bool>& in_d) const {
    const std::size_t n = grammar_.size();
    std::vector<bool> must(n, false);
    for (std::size_t r = 0; r < n; ++r)
      if (grammar_.rule(r).is_lexical()) must[r] = in_d[r];
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t r = 0; r < n; ++r) {
        const Rule& rule = grammar_.rule(r);
        if (must[r] || rule.is_lexical()) continue;
        for (const auto& slot : rule.slots) {
          bool all = slot.epsilon_mass().numerator() == 0;
          for (std::size_t a = 0; all && a < slot.alternatives().size(); ++a)
            if (slot.effective_mass(a) > 0.0 && !must[slot.alternatives()[a].target]) all = false;
          if (all) {
            must[r] = true;
            changed = true;
            break;
          }
        }
      }
    }
    return must;
  }

  void plan() {
    const std::size_t n = grammar_.size();
    reachable_ = detail::reachable_from_start(grammar_);

    std::vector<std::pair<Edge, std::string>> annotated;
    for (std::size_t r = 0; r < n; ++r) {
      const auto& slots = grammar_.rule(r).slots;
      for (std::size_t s = 0; s < slots.size(); ++s) {
        if (slots[s].is_bare()) continue;
        for (std::size_t a = 0; a < slots[s].alternatives().size(); ++a)
          annotated.push_back({{r, s, a}, grammar_.rule(r).lhs + " slot " + std::to_string(s + 1) + ": " +
                                              slots[s].alternatives()[a].symbol});
      }
    }
    if (annotated.empty()) return;

    auto skip_all = [&](const std::string& why) {
      for (const auto& [e, name] : annotated) unchecked_.push_back(name + " (" + why + ")");
    };
    if (!detail::certain_cycles(grammar_).empty()) {
      skip_all("grammar has a probability-1 cycle");
      return;
    }

    // Rules that may be expanded only sometimes: anything below an annotated edge.
    std::vector<bool> optional(n, false);
    {
      std::vector<std::size_t> stack;
      for (const auto& [e, name] : annotated) {
        if (!reachable_[e.rule]) continue;
        std::size_t t = grammar_.rule(e.rule).slots[e.slot].alternatives()[e.alt].target;
        if (!optional[t]) {
          optional[t] = true;
          stack.push_back(t);
        }
      }
      while (!stack.empty()) {
        std::size_t r = stack.back();
        stack.pop_back();
        for (const auto& slot : grammar_.rule(r).slots)
          for (const auto& alt : slot.alternatives())
            if (!optional[alt.target]) {
              optional[alt.target] = true;
              stack.push_back(alt.target);
            }
      }
    }

    // Certain expansion counts along bare edges, saturating at 2. The bare
    // graph is acyclic here, so relaxing n times reaches the fixed point.
    std::vector<int> certain(n, 0);
    for (std::size_t round = 0; round <= n; ++round) {
      std::vector<int> next(n, 0);
      next[0] = 1;
      for (std::size_t r = 0; r < n; ++r) {
        if (certain[r] == 0) continue;
        for (const auto& slot : grammar_.rule(r).slots)
          if (slot.is_bare()) {
            auto& c = next[slot.alternatives().front().target];
            c = std::min(2, c + certain[r]);
          }
      }
      if (next == certain) break;
      certain = std::move(next);
    }

    for (const auto& [e, name] : annotated) {
      const Rule& rule = grammar_.rule(e.rule);
      const Slot& slot = rule.slots[e.slot];
      if (!reachable_[e.rule]) {
        unchecked_.push_back(name + " (rule unreachable)");
        continue;
      }
      if (certain[e.rule] != 1 || optional[e.rule]) {
        unchecked_.push_back(name + " (rule '" + rule.lhs + "' is not expanded exactly once per sentence)");
        continue;
      }
      double declared = slot.effective_mass(e.alt);
      if (declared <= 0.0) {
        unchecked_.push_back(name + " (shadowed by earlier alternatives)");
        continue;
      }
      std::size_t target = slot.alternatives()[e.alt].target;
      auto via = lexical_reach(target, nullptr);
      auto elsewhere = lexical_reach(0, &e);
      std::vector<bool> in_d(n, false);
      SlotCheck sc{name, declared, {}, 0};
      for (std::size_t r = 0; r < n; ++r)
        if (via[r] && !elsewhere[r]) {
          in_d[r] = true;
          sc.categories.push_back(r);
        }
      if (sc.categories.empty() || !must_emit(in_d)[target]) {
        unchecked_.push_back(name + " (no category set identifies this choice)");
        continue;
      }
      slot_checks_.push_back(std::move(sc));
    }
  }

  const Grammar& grammar_;
  std::vector<bool> reachable_;
  std::vector<SlotCheck> slot_checks_;
  std::vector<std::string> unchecked_;
  std::size_t sentences_ = 0;
};

inline ProbabilityReport check_probabilities(const Grammar& g, const CorpusStats& stats,
                                             std::span<const Sentence> corpus) {
  ProbabilityAudit audit(g);
  for (const auto& s : corpus) audit.observe(s);
  return audit.report(stats);
}

inline void print_stats(std::ostream& os, const CorpusStats& st) {
  os << "sentences: " << st.sentence_count << "\n";
  os << "tokens: " << st.token_count << "\n";
  os << "sentence lengths:\n";
  for (const auto& [len, n] : st.length_histogram) os << "  " << len << "\t" << n << "\n";
  os << "categories:\n";
  for (const auto& [cat, n] : st.category_freq) os << "  " << cat << "\t" << n << "\n";
  os << "tokens by surface:\n";
  for (const auto& [surface, n] : st.surface_freq) os << "  " << surface << "\t" << n << "\n";
}

inline void print_report(std::ostream& os, const ProbabilityReport& rep) {
  os << "probability checks (declared / observed / n / z / 3-sigma):\n";
  for (const auto& c : rep.checks) {
    bool ok = std::abs(c.observed - c.declared) <= c.tolerance() || c.sample_size == 0;
    os << "  " << (ok ? "ok  " : "OUT ") << c.target << "\t" << c.declared << "\t" << c.observed << "\t"
       << c.sample_size << "\t" << c.z_score << "\t" << c.tolerance() << "\n";
  }
  if (!rep.unchecked.empty()) {
    os << "unchecked:\n";
    for (const auto& u : rep.unchecked) os << "  " << u << "\n";
  }
}

}  // namespace sentgen
