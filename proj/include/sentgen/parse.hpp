#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "sentgen/diagnostic.hpp"
#include "sentgen/grammar.hpp"
#include "sentgen/probability.hpp"
#include "sentgen/validate.hpp"

namespace sentgen {

// Size limits of the original C interpreter. Grammars beyond them still
// load, with an `exceeds-original-limits` warning.
inline constexpr std::size_t kOriginalMaxRules = 255;
inline constexpr std::size_t kOriginalMaxItems = 50;
inline constexpr std::size_t kOriginalMaxOptions = 10;
inline constexpr std::size_t kOriginalMaxLine = 254;

inline std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n\v\f";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

// A rule line split into its label and untyped RHS items.
struct RawRule {
  std::string lhs;
  std::vector<std::string> items;
  int source_line = 0;

  friend bool operator==(const RawRule&, const RawRule&) = default;
};

inline RawRule parse_rule_line(std::string_view line, int line_no) {
  auto parts = split(line, '>');
  if (parts.size() != 2) {
    throw GrammarError(make_error("malformed-rule",
                                  parts.size() < 2 ? "expected 'LHS>item,item,...' (no '>' found)"
                                                   : "more than one '>' in rule",
                                  line_no));
  }
  RawRule raw;
  raw.source_line = line_no;
  auto lhs = trim(parts[0]);
  if (lhs.empty()) throw GrammarError(make_error("empty-symbol", "rule has an empty left-hand side", line_no));
  if (!is_valid_symbol(lhs)) {
    throw GrammarError(make_error("bad-symbol-name", "invalid rule label '" + std::string(lhs) + "'", line_no));
  }
  raw.lhs = lhs;
  for (auto item : split(parts[1], ',')) {
    item = trim(item);
    if (item.empty()) {
      throw GrammarError(make_error("empty-symbol", "empty item in right-hand side of '" + raw.lhs + "'", line_no));
    }
    raw.items.emplace_back(item);
  }
  return raw;
}

struct BareName {
  std::string name;
  friend bool operator==(const BareName&, const BareName&) = default;
};

// What one RHS item turns out to be before rule classification:
//   Slot      `PP.3` or `A.3|B.7` (targets unresolved)
//   BareName  `NP` (a rule reference or a plain token, decided later)
//   TokenSpec `dog}2+5`
using RawItem = std::variant<Slot, BareName, TokenSpec>;

namespace detail {

inline void require_symbol(std::string_view name, std::string_view context, int line) {
  if (name.empty()) {
    throw GrammarError(make_error("empty-symbol", "empty name in '" + std::string(context) + "'", line));
  }
  if (!is_valid_symbol(name)) {
    throw GrammarError(make_error("bad-symbol-name", "invalid name '" + std::string(name) + "'", line));
  }
}

inline TokenSpec parse_unit_token(std::string_view item, int line) {
  auto brace = item.find('}');
  TokenSpec tok;
  auto surface = item.substr(0, brace);
  require_symbol(surface, item, line);
  tok.surface = surface;
  std::vector<std::uint64_t> units;
  for (auto part : split(item.substr(brace + 1), '+')) {
    bool ok = !part.empty() && part.size() <= 18;
    for (char c : part) ok = ok && c >= '0' && c <= '9';
    if (!ok) {
      throw GrammarError(make_error("bad-units",
                                    "unit list of '" + std::string(item) +
                                        "' must be '+'-separated non-negative integers",
                                    line));
    }
    std::uint64_t v = 0;
    for (char c : part) v = v * 10 + static_cast<std::uint64_t>(c - '0');
    units.push_back(v);
  }
  tok.units = std::move(units);
  return tok;
}

}  // namespace detail

inline RawItem parse_slot(std::string_view item, int line = 0) {
  if (item.find('|') != std::string_view::npos || item.find('.') != std::string_view::npos) {
    std::vector<WeightedAlternative> alts;
    for (auto part : split(item, '|')) {
      part = trim(part);
      auto dot = part.find('.');
      if (dot == std::string_view::npos) {
        throw GrammarError(make_error("option-missing-probability",
                                      "option '" + std::string(part) + "' in '" + std::string(item) +
                                          "' has no '.digits' probability",
                                      line));
      }
      auto name = trim(part.substr(0, dot));
      detail::require_symbol(name, item, line);
      Probability p = parse_probability(part.substr(dot + 1), line);
      if (p.numerator() == 0) {
        throw GrammarError(make_error("zero-probability",
                                      "option '" + std::string(part) + "' has probability zero", line));
      }
      alts.push_back({std::string(name), p});
    }
    return Slot(std::move(alts));
  }
  if (item.find('}') != std::string_view::npos) return detail::parse_unit_token(item, line);
  detail::require_symbol(item, item, line);
  return BareName{std::string(item)};
}

struct ParseResult {
  std::optional<Grammar> grammar;    // engaged iff diagnostics hold no errors
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return grammar.has_value(); }
};

// Types every raw rule as phrasal or lexical and resolves rule references.
// Appends any errors to `diags`; returns a grammar only if none were added.
inline std::optional<Grammar> classify_rules(const std::vector<RawRule>& raw, std::vector<Diagnostic>& diags) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < raw.size(); ++i) index.emplace(raw[i].lhs, i);
  auto lookup = [&](const std::string& name) -> std::size_t {
    auto it = index.find(name);
    return it == index.end() ? kNoRule : it->second;
  };

  bool failed = false;
  std::vector<Rule> rules;
  for (const auto& rr : raw) {
    const int line = rr.source_line;
    auto fail = [&](std::string code, std::string msg) {
      diags.push_back(make_error(std::move(code), std::move(msg), line));
      failed = true;
    };

    std::vector<RawItem> items;
    bool item_error = false;
    for (const auto& s : rr.items) {
      try {
        items.push_back(parse_slot(s, line));
      } catch (const GrammarError& e) {
        diags.push_back(e.diagnostic());
        failed = item_error = true;
      }
    }
    if (item_error) continue;

    bool annotated = false;
    std::size_t refs = 0, terminals = 0;
    for (const auto& it : items) {
      if (std::holds_alternative<Slot>(it)) annotated = true;
      else if (auto* b = std::get_if<BareName>(&it)) (lookup(b->name) != kNoRule ? refs : terminals)++;
      else terminals++;
    }

    Rule rule;
    rule.lhs = rr.lhs;
    rule.source_line = line;

    if (annotated) {
      // An annotated item can only be a rule reference, so the whole rule is phrasal.
      rule.kind = RuleKind::phrasal;
      bool ok = true;
      for (auto& it : items) {
        if (auto* slot = std::get_if<Slot>(&it)) {
          auto alts = slot->alternatives();
          for (auto& a : alts) {
            a.target = lookup(a.symbol);
            if (a.target != kNoRule) continue;
            ok = false;
            if (alts.size() == 1) {
              fail("annotated-terminal", "'" + a.symbol + "' carries a probability but has no rewrite rule");
            } else {
              fail("unknown-symbol", "option '" + a.symbol + "' names no rule");
            }
          }
          rule.slots.emplace_back(std::move(alts));
        } else if (auto* b = std::get_if<BareName>(&it)) {
          std::size_t t = lookup(b->name);
          if (t == kNoRule) {
            ok = false;
            fail("unknown-symbol", "'" + b->name + "' names no rule in phrasal rule '" + rr.lhs + "'");
          }
          Slot s = Slot::bare(b->name);
          s.mutable_alternatives().front().target = t;
          rule.slots.push_back(std::move(s));
        } else {
          ok = false;
          fail("mixed-rule", "rule '" + rr.lhs + "' mixes terminal tokens with rule references");
        }
      }
      if (ok) rules.push_back(std::move(rule));
      continue;
    }

    if (refs > 0 && terminals > 0) {
      std::string names;
      for (const auto& it : items)
        if (auto* b = std::get_if<BareName>(&it); b && lookup(b->name) == kNoRule)
          names += (names.empty() ? "" : ", ") + b->name;
        else if (auto* t = std::get_if<TokenSpec>(&it))
          names += (names.empty() ? "" : ", ") + t->surface;
      fail("mixed-rule", "rule '" + rr.lhs + "' mixes rule references with terminal tokens (" + names + ")");
      continue;
    }

    if (refs > 0) {
      rule.kind = RuleKind::phrasal;
      for (const auto& it : items) {
        const auto& name = std::get<BareName>(it).name;
        Slot s = Slot::bare(name);
        s.mutable_alternatives().front().target = lookup(name);
        rule.slots.push_back(std::move(s));
      }
    } else {
      rule.kind = RuleKind::lexical;
      for (const auto& it : items) {
        if (auto* b = std::get_if<BareName>(&it)) rule.tokens.push_back({b->name, std::nullopt});
        else rule.tokens.push_back(std::get<TokenSpec>(it));
      }
    }
    rules.push_back(std::move(rule));
  }
  if (failed) return std::nullopt;
  return Grammar(std::move(rules));
}

// Parses and validates a whole grammar file. Collects every diagnostic it
// can rather than stopping at the first error.
inline ParseResult parse_grammar(std::string_view text) {
  ParseResult result;
  auto& diags = result.diagnostics;
  std::vector<RawRule> raw;
  std::unordered_map<std::string, int> first_seen;
  bool failed = false;
  bool long_line = false;

  int line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto t = trim(line);
    if (t.empty() || t.front() == '!') continue;
    long_line |= line.size() >= kOriginalMaxLine;
    try {
      RawRule rr = parse_rule_line(line, line_no);
      auto [it, inserted] = first_seen.emplace(rr.lhs, line_no);
      if (!inserted) {
        diags.push_back(make_error("duplicate-rule",
                                   "rule '" + rr.lhs + "' already defined on line " + std::to_string(it->second),
                                   line_no));
        failed = true;
        continue;
      }
      raw.push_back(std::move(rr));
    } catch (const GrammarError& e) {
      diags.push_back(e.diagnostic());
      failed = true;
    }
  }

  if (raw.empty() && !failed) {
    diags.push_back(make_error("empty-grammar", "grammar contains no rules"));
    return result;
  }

  auto grammar = classify_rules(raw, diags);
  if (!grammar || failed) return result;

  bool over = long_line || grammar->size() >= kOriginalMaxRules;
  for (const auto& r : grammar->rules()) {
    over |= std::max(r.slots.size(), r.tokens.size()) >= kOriginalMaxItems;
    for (const auto& s : r.slots) over |= s.alternatives().size() >= kOriginalMaxOptions;
  }
  if (over) {
    diags.push_back(make_warning("exceeds-original-limits",
                                 "grammar exceeds the size limits of the original interpreter "
                                 "(255 rules, 50 items per rule, 10 options, 254-character lines)"));
  }

  auto lint = validate(*grammar);
  bool lint_errors = has_errors(lint);
  diags.insert(diags.end(), lint.begin(), lint.end());
  if (!lint_errors) result.grammar = std::move(grammar);
  return result;
}

inline std::string render_token(const TokenSpec& t) {
  std::string s = t.surface;
  if (t.units) {
    s += '}';
    for (std::size_t i = 0; i < t.units->size(); ++i) {
      if (i) s += '+';
      s += std::to_string((*t.units)[i]);
    }
  }
  return s;
}

inline std::string render_slot(const Slot& slot) {
  std::string s;
  for (const auto& a : slot.alternatives()) {
    if (!s.empty()) s += '|';
    s += a.symbol;
    if (a.probability.is_annotated()) s += "." + a.probability.digit_string();
  }
  return s;
}

inline std::vector<std::string> render_items(const Rule& rule) {
  std::vector<std::string> items;
  for (const auto& s : rule.slots) items.push_back(render_slot(s));
  for (const auto& t : rule.tokens) items.push_back(render_token(t));
  return items;
}

// One `lhs>item,...` line per rule, joined by LF (no trailing newline).
inline std::string canonical_form(const Grammar& g) {
  std::string out;
  for (const auto& rule : g.rules()) {
    if (!out.empty()) out += '\n';
    out += rule.lhs + '>';
    auto items = render_items(rule);
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) out += ',';
      out += items[i];
    }
  }
  return out;
}

}  // namespace sentgen
