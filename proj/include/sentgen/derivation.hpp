#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sentgen/grammar.hpp"
#include "sentgen/random.hpp"

namespace sentgen {

struct GeneratorConfig {
  std::uint64_t seed = 0;
  std::size_t max_depth = 128;
  RngMode rng_mode = RngMode::lcg48;
};

struct EmittedToken {
  std::string surface;
  std::string category;  // lhs of the lexical rule that produced it
  std::optional<std::vector<std::uint64_t>> units;

  friend bool operator==(const EmittedToken&, const EmittedToken&) = default;
};

struct Sentence {
  std::vector<EmittedToken> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct Derivation {
  Sentence sentence;
  bool depth_exceeded = false;  // sentence was aborted; its tokens are partial
};

// Index of the chosen alternative, or nullopt for the epsilon outcome.
// Always consumes exactly one draw.
template <UnitSource Source>
std::optional<std::size_t> resolve_slot(Source& source, const Slot& slot) {
  double u = source.next();
  const auto& cum = slot.cumulative();
  for (std::size_t i = 0; i < cum.size(); ++i)
    if (u <= cum[i]) return i;
  return std::nullopt;
}

template <UnitSource Source>
void emit_lexical(const Rule& rule, Source& source, Sentence& out) {
  const TokenSpec& t = rule.tokens[choose_uniform(source, rule.tokens.size())];
  out.tokens.push_back({t.surface, rule.lhs, t.units});
}

// One top-down expansion from the start rule. Bare slots expand without a
// draw; annotated slots take one draw; each lexical emission takes one draw.
// Phrasal nesting deeper than config.max_depth aborts the sentence.
template <UnitSource Source>
Derivation derive_sentence(const Grammar& g, Source& source, const GeneratorConfig& config = {}) {
  Derivation d;
  const Rule& start = g.rule(0);
  if (start.is_lexical()) {
    emit_lexical(start, source, d.sentence);
    return d;
  }
  if (config.max_depth == 0) {
    d.depth_exceeded = true;
    return d;
  }

  struct Frame {
    std::size_t rule;
    std::size_t next_slot;
  };
  std::vector<Frame> stack{{0, 0}};
  while (!stack.empty()) {
    Frame& top = stack.back();
    const Rule& rule = g.rule(top.rule);
    if (top.next_slot == rule.slots.size()) {
      stack.pop_back();
      continue;
    }
    const Slot& slot = rule.slots[top.next_slot++];
    std::size_t target;
    if (slot.is_bare()) {
      target = slot.alternatives().front().target;
    } else {
      auto pick = resolve_slot(source, slot);
      if (!pick) continue;
      target = slot.alternatives()[*pick].target;
    }
    const Rule& child = g.rule(target);
    if (child.is_lexical()) {
      emit_lexical(child, source, d.sentence);
    } else if (stack.size() >= config.max_depth) {
      d.depth_exceeded = true;
      return d;
    } else {
      stack.push_back({target, 0});
    }
  }
  return d;
}

// Seeds one source and feeds `count` consecutive derivations to
// sink(index, const Derivation&). All sentences share the one stream.
template <typename Sink>
void generate_corpus(const Grammar& g, const GeneratorConfig& config, std::size_t count, Sink&& sink) {
  RandomSource source(config.rng_mode, config.seed);
  for (std::size_t i = 0; i < count; ++i) sink(i, derive_sentence(g, source, config));
}

// Convenience: the successfully derived sentences, in order.
inline std::vector<Sentence> generate_sentences(const Grammar& g, const GeneratorConfig& config, std::size_t count) {
  std::vector<Sentence> out;
  out.reserve(count);
  generate_corpus(g, config, count, [&](std::size_t, const Derivation& d) {
    if (!d.depth_exceeded) out.push_back(d.sentence);
  });
  return out;
}

}  // namespace sentgen
