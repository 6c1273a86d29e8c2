#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "sentgen/analysis.hpp"
#include "sentgen/emitters.hpp"
#include "sentgen/parse.hpp"

namespace sentgen::cli {

enum ExitCode : int {
  kOk = 0,
  kUsageOrIo = 1,
  kGrammarErrors = 2,
  kDepthExceeded = 3,
};

inline const char* const kUsage =
    "\n sentgen usage: sentgen <grammar file>\n\n"
    "\t\t\t[-e(xamples) #]\n"
    "\t\t\t[-v(erbose)]\n"
    "\t\t\t[-s(eed) #]            (default 0)\n"
    "\t\t\t[-o(utput rule array)]\n"
    "\t\t\t[-h(uman format save to) filename]\n"
    "\t\t\t[-c(ategory trace save to) filename]\n"
    "\t\t\t[-t(learn file name for .teach/.data) filename]\n"
    "\t\t\t[--max-depth #]        (default 128)\n"
    "\t\t\t[--rng lcg48|default]  (default lcg48)\n"
    "\t\t\t[--stats] [--strict] [--help]\n\n";

struct CliOptions {
  std::string grammar_path;
  std::optional<std::size_t> examples;
  std::uint64_t seed = 0;
  std::optional<std::string> human_path;
  std::optional<std::string> category_path;
  std::optional<std::string> tlearn_prefix;
  bool verbose = false;
  bool dump_rules = false;
  std::size_t max_depth = 128;
  RngMode rng_mode = RngMode::lcg48;
  bool stats = false;
  bool strict = false;

  bool wants_corpus() const { return human_path || category_path || tlearn_prefix || verbose || stats; }
};

// Returned instead of options when the command line cannot be run as-is:
// usage errors, or --help (exit code 0, text for standard output).
struct UsageExit {
  int exit_code = kUsageOrIo;
  std::string message;
};

using ParsedArgs = std::variant<CliOptions, UsageExit>;

inline std::unique_ptr<CLI::App> make_app(CliOptions& o, std::string& rng) {
  auto app = std::make_unique<CLI::App>("Random sentence generator for phrase-structure grammar files", "sentgen");
  app->set_help_flag("--help", "Print this help and exit");
  app->add_option("grammar", o.grammar_path, "Grammar file (.grm)")->required();
  app->add_option("-e", o.examples, "Number of sentences to generate");
  app->add_option("-s", o.seed, "Random seed (default 0; the same seed always gives the same corpus)");
  app->add_option("-h", o.human_path, "Save sentences (surface words) to this file");
  app->add_option("-c", o.category_path, "Save the category trace (lexical rule labels) to this file");
  app->add_option("-t", o.tlearn_prefix, "Write localist <prefix>.data and <prefix>.teach files");
  app->add_flag("-v", o.verbose, "Print sentences to standard output");
  app->add_flag("-o", o.dump_rules, "Print the numbered rule table");
  app->add_option("--max-depth", o.max_depth, "Abort a sentence nested deeper than this (default 128)")
      ->check(CLI::PositiveNumber);
  app->add_option("--rng", rng, "Generator: lcg48 (drand48-compatible, default) or default (mt19937_64)")
      ->check(CLI::IsMember({"lcg48", "default"}));
  app->add_flag("--stats", o.stats, "Print corpus statistics and probability checks");
  app->add_flag("--strict", o.strict, "Extension: treat grammar warnings as errors");
  return app;
}

// argv without the program name.
inline ParsedArgs parse_args(std::vector<std::string> args) {
  if (args.empty()) return UsageExit{kUsageOrIo, kUsage};
  CliOptions o;
  std::string rng = "lcg48";
  auto app = make_app(o, rng);
  std::reverse(args.begin(), args.end());
  try {
    app->parse(args);
  } catch (const CLI::CallForHelp&) {
    return UsageExit{kOk, app->help()};
  } catch (const CLI::ParseError& e) {
    return UsageExit{kUsageOrIo, std::string("sentgen: ") + e.what() + "\n" + kUsage};
  }
  o.rng_mode = parse_rng_mode(rng);
  if (o.wants_corpus() && !o.examples) {
    return UsageExit{kUsageOrIo, std::string("sentgen: -e # is required when an output or --stats is requested\n") +
                                     kUsage};
  }
  return o;
}

// The layout of the original's rule dump: ` 1) S--> NP, VP`.
inline std::string rule_table(const Grammar& g) {
  std::ostringstream os;
  os << "\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Rule& r = g.rule(i);
    os << " " << (i + 1) << ") " << r.lhs << "--> ";
    auto items = render_items(r);
    for (std::size_t j = 0; j < items.size(); ++j) os << items[j] << (j + 1 < items.size() ? ", " : "\n");
  }
  return os.str();
}

inline std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return ss.str();
}

inline int run(const CliOptions& o, std::ostream& out, std::ostream& err) {
  auto text = read_file(o.grammar_path);
  if (!text) {
    err << "\n Error opening file. Please check that the file exists,\n and is in the current directory.\n ("
        << o.grammar_path << ")\n"
        << kUsage;
    return kUsageOrIo;
  }

  ParseResult parsed = parse_grammar(*text);
  bool warned = false;
  for (const auto& d : parsed.diagnostics) {
    err << o.grammar_path << ": " << d << "\n";
    warned |= !d.is_error();
  }
  if (!parsed.ok()) return kGrammarErrors;
  if (o.strict && warned) {
    err << o.grammar_path << ": warnings treated as errors (--strict)\n";
    return kGrammarErrors;
  }
  const Grammar& g = *parsed.grammar;

  if (o.dump_rules) out << rule_table(g);
  if (!o.examples) return kOk;

  EmitterConfig ec;
  if (o.human_path) ec.human_path = *o.human_path;
  if (o.category_path) ec.category_path = *o.category_path;
  ec.tlearn_prefix = o.tlearn_prefix;
  ec.verbose = o.verbose;
  GeneratorConfig gc{o.seed, o.max_depth, o.rng_mode};

  CorpusStats stats;
  std::optional<ProbabilityAudit> audit;
  if (o.stats) audit.emplace(g);

  OutputSummary summary;
  try {
    summary = write_outputs(g, gc, *o.examples, ec, out, [&](const Sentence& s) {
      if (audit) {
        stats.add(s);
        audit->observe(s);
      }
    });
  } catch (const OutputError& e) {
    err << "sentgen: " << e.code() << ": " << e.what() << "\n";
    return kUsageOrIo;
  }

  if (audit) {
    print_stats(out, stats);
    print_report(out, audit->report(stats));
  }
  if (summary.skipped > 0) {
    err << "sentgen: depth-exceeded: " << summary.skipped << " of " << *o.examples
        << " sentences nested deeper than " << o.max_depth << " and were skipped (first at sentence "
        << summary.skipped_indices.front() + 1 << ")\n";
    return kDepthExceeded;
  }
  return kOk;
}

inline int main(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args(argv + (argc > 0 ? 1 : 0), argv + argc);
  ParsedArgs parsed = parse_args(std::move(args));
  if (auto* u = std::get_if<UsageExit>(&parsed)) {
    (u->exit_code == kOk ? out : err) << u->message;
    return u->exit_code;
  }
  return run(std::get<CliOptions>(parsed), out, err);
}

}  // namespace sentgen::cli
