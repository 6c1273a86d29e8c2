#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sentgen/diagnostic.hpp"
#include "sentgen/grammar.hpp"

namespace sentgen {

namespace detail {

inline std::vector<bool> reachable_from_start(const Grammar& g) {
  std::vector<bool> seen(g.size(), false);
  if (g.size() == 0) return seen;
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    std::size_t r = stack.back();
    stack.pop_back();
    for (const auto& slot : g.rule(r).slots)
      for (const auto& alt : slot.alternatives())
        if (alt.target != kNoRule && !seen[alt.target]) {
          seen[alt.target] = true;
          stack.push_back(alt.target);
        }
  }
  return seen;
}

// Strongly connected components of the graph whose edges are bare slots,
// i.e. references expanded with certainty. Returns only components that
// contain a cycle.
inline std::vector<std::vector<std::size_t>> certain_cycles(const Grammar& g) {
  const std::size_t n = g.size();
  std::vector<std::vector<std::size_t>> edges(n);
  for (std::size_t r = 0; r < n; ++r)
    for (const auto& slot : g.rule(r).slots)
      if (slot.is_bare() && slot.alternatives().front().target != kNoRule)
        edges[r].push_back(slot.alternatives().front().target);

  // Iterative Tarjan.
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> out;
  int counter = 0;
  struct Frame { std::size_t node; std::size_t edge; };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.edge < edges[f.node].size()) {
        std::size_t next = edges[f.node][f.edge++];
        if (index[next] < 0) {
          index[next] = low[next] = counter++;
          stack.push_back(next);
          on_stack[next] = true;
          call.push_back({next, 0});
        } else if (on_stack[next]) {
          low[f.node] = std::min(low[f.node], index[next]);
        }
        continue;
      }
      std::size_t node = f.node;
      call.pop_back();
      if (!call.empty()) low[call.back().node] = std::min(low[call.back().node], low[node]);
      if (low[node] != index[node]) continue;
      std::vector<std::size_t> component;
      std::size_t member;
      do {
        member = stack.back();
        stack.pop_back();
        on_stack[member] = false;
        component.push_back(member);
      } while (member != node);
      bool self_loop = false;
      for (std::size_t e : edges[node]) self_loop |= (e == node);
      if (component.size() > 1 || self_loop) {
        std::sort(component.begin(), component.end());
        out.push_back(std::move(component));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

// Grammar-level lint on an already classified grammar. Only
// `units-inconsistent` is an error here; everything else is advisory.
inline std::vector<Diagnostic> validate(const Grammar& g) {
  std::vector<Diagnostic> diags;

  for (const auto& rule : g.rules()) {
    for (std::size_t i = 0; i < rule.slots.size(); ++i) {
      const Slot& slot = rule.slots[i];
      if (slot.sum_exceeds_one()) {
        diags.push_back(make_warning(
            "prob-sum-exceeds-one",
            "slot " + std::to_string(i + 1) + " of rule '" + rule.lhs +
                "' has probabilities summing above 1; later alternatives are partly or wholly unreachable",
            rule.source_line));
      }
    }
  }

  auto reachable = detail::reachable_from_start(g);
  for (std::size_t r = 0; r < g.size(); ++r) {
    if (!reachable[r]) {
      diags.push_back(make_warning("unreachable-rule",
                                   "rule '" + g.rule(r).lhs + "' is not reachable from '" + g.start() + "'",
                                   g.rule(r).source_line));
    }
  }

  for (const auto& cycle : detail::certain_cycles(g)) {
    std::string names;
    for (std::size_t r : cycle) names += (names.empty() ? "" : ", ") + g.rule(r).lhs;
    diags.push_back(make_warning("possible-unbounded-recursion",
                                 "rules {" + names + "} reference each other with probability 1",
                                 g.rule(cycle.front()).source_line));
  }

  if (g.has_units() && !g.all_tokens_have_units()) {
    for (const auto& rule : g.rules()) {
      for (const auto& t : rule.tokens) {
        if (!t.units) {
          diags.push_back(make_error("units-inconsistent",
                                     "token '" + t.surface + "' in rule '" + rule.lhs +
                                         "' has no unit indices while other tokens do",
                                     rule.source_line));
          break;
        }
      }
    }
  }
  return diags;
}

}  // namespace sentgen
