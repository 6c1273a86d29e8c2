#pragma once

// Synthesizes random well-formed grammar text for round-trip properties.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace sentgen::testing {

struct SynthOptions {
  bool noise = false;  // sprinkle comments, blank lines, CRLF and padding
};

inline std::string random_grammar_text(std::mt19937& rng, SynthOptions opt = {}) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int phrasal = pick(1, 5);
  const int lexical = pick(1, 5);
  const bool units = pick(0, 1) == 1;
  auto phrasal_name = [](int i) { return "P" + std::to_string(i); };
  auto lexical_name = [](int i) { return "L_" + std::to_string(i); };
  auto any_rule = [&]() {
    int k = pick(0, phrasal + lexical - 1);
    return k < phrasal ? phrasal_name(k) : lexical_name(k - phrasal);
  };
  auto digits = [&]() {
    int len = pick(1, 3);
    std::string d;
    for (int i = 0; i < len; ++i) d += static_cast<char>('0' + pick(0, 9));
    if (d.find_first_not_of('0') == std::string::npos) d.back() = '1';
    return d;
  };
  auto pad = [&](std::string s) {
    if (!opt.noise) return s;
    return std::string(pick(0, 1), ' ') + s + std::string(pick(0, 1), '\t');
  };

  std::vector<std::string> lines;
  for (int p = 0; p < phrasal; ++p) {
    std::string line = pad(phrasal_name(p)) + ">";
    int slots = pick(1, 4);
    for (int s = 0; s < slots; ++s) {
      if (s) line += ',';
      int shape = pick(0, 2);
      if (shape == 0) {
        line += pad(any_rule());
      } else {
        int alts = shape == 1 ? 1 : pick(2, 4);
        std::string item;
        for (int a = 0; a < alts; ++a) item += (a ? "|" : "") + any_rule() + "." + digits();
        line += pad(item);
      }
    }
    lines.push_back(line);
  }
  for (int l = 0; l < lexical; ++l) {
    std::string line = pad(lexical_name(l)) + ">";
    int toks = pick(1, 4);
    for (int t = 0; t < toks; ++t) {
      if (t) line += ',';
      std::string tok = "w" + std::to_string(pick(0, 999));
      if (units) {
        int n = pick(1, 3);
        tok += '}';
        for (int u = 0; u < n; ++u) tok += (u ? "+" : "") + std::to_string(pick(0, 40));
      }
      line += pad(tok);
    }
    lines.push_back(line);
  }

  std::string text;
  for (const auto& line : lines) {
    if (opt.noise && pick(0, 3) == 0) text += "! comment " + std::to_string(pick(0, 99)) + "\n";
    if (opt.noise && pick(0, 3) == 0) text += "\n";
    text += line + (opt.noise && pick(0, 1) ? "\r\n" : "\n");
  }
  return text;
}

}  // namespace sentgen::testing
