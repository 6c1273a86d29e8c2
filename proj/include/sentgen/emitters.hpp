#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sentgen/derivation.hpp"
#include "sentgen/diagnostic.hpp"
#include "sentgen/grammar.hpp"

namespace sentgen {

// Each surface followed by one space (the last one too), then LF.
inline std::string emit_human(const Sentence& s) {
  std::string line;
  for (const auto& t : s.tokens) {
    line += t.surface;
    line += ' ';
  }
  line += '\n';
  return line;
}

inline std::string emit_category(const Sentence& s) {
  std::string line;
  for (const auto& t : s.tokens) {
    line += t.category;
    line += ' ';
  }
  line += '\n';
  return line;
}

inline std::string render_units(const std::vector<std::uint64_t>& units) {
  std::string s;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(units[i]);
  }
  return s;
}

struct LocalistFiles {
  std::string data;
  std::string teach;
};

// Builds the `.data`/`.teach` pair incrementally. Pattern i of the data file
// is token i; its teacher is token i+1, and the last pattern wraps around to
// the first token. Both files open with `localist\n<N>\n`.
class LocalistBuilder {
 public:
  void add(const EmittedToken& t) {
    if (!t.units) {
      throw OutputError("units-required",
                        "token '" + t.surface + "' (" + t.category + ") has no unit indices; localist output needs them");
    }
    std::string units = render_units(*t.units);
    data_body_ += units;
    data_body_ += '\n';
    if (count_ == 0) {
      first_ = std::move(units);
    } else {
      teach_body_ += std::to_string(count_ - 1);
      teach_body_ += ' ';
      teach_body_ += units;
      teach_body_ += '\n';
    }
    ++count_;
  }

  void add(const Sentence& s) {
    for (const auto& t : s.tokens) add(t);
  }

  std::size_t patterns() const { return count_; }

  LocalistFiles finish() const {
    if (count_ == 0) throw OutputError("empty-corpus", "localist output needs at least one token");
    std::string header = "localist\n" + std::to_string(count_) + "\n";
    LocalistFiles f;
    f.data = header + data_body_;
    f.teach = header + teach_body_ + std::to_string(count_ - 1) + " " + first_ + "\n";
    return f;
  }

 private:
  std::size_t count_ = 0;
  std::string data_body_;
  std::string teach_body_;
  std::string first_;
};

inline LocalistFiles emit_localist(std::span<const Sentence> corpus) {
  for (const auto& s : corpus)
    for (const auto& t : s.tokens)
      if (!t.units) {
        throw OutputError("units-required", "token '" + t.surface + "' has no unit indices; localist output needs them");
      }
  LocalistBuilder b;
  for (const auto& s : corpus) b.add(s);
  return b.finish();
}

// Raised when localist output is requested from a grammar without units.
inline void require_units(const Grammar& g) {
  for (const auto& r : g.rules())
    for (const auto& t : r.tokens)
      if (!t.units) {
        throw OutputError("units-required", "localist output requested but token '" + t.surface + "' in rule '" +
                                                r.lhs + "' has no unit indices");
      }
}

struct EmitterConfig {
  std::optional<std::filesystem::path> human_path;
  std::optional<std::filesystem::path> category_path;
  std::optional<std::string> tlearn_prefix;  // writes <prefix>.data and <prefix>.teach
  bool verbose = false;

  bool any_sink() const { return human_path || category_path || tlearn_prefix || verbose; }
};

struct OutputSummary {
  std::size_t sentences = 0;  // written
  std::size_t tokens = 0;
  std::size_t skipped = 0;    // aborted by the depth guard
  std::vector<std::size_t> skipped_indices;
};

inline std::filesystem::path localist_data_path(const std::string& prefix) { return prefix + ".data"; }
inline std::filesystem::path localist_teach_path(const std::string& prefix) { return prefix + ".teach"; }

// Feeds one pass over a corpus to every requested sink. Files created here
// are removed again if writing fails part way.
class CorpusWriter {
 public:
  CorpusWriter(EmitterConfig config, std::ostream& console) : config_(std::move(config)), console_(console) {
    try {
      if (config_.human_path) open(human_, *config_.human_path);
      if (config_.category_path) open(category_, *config_.category_path);
    } catch (...) {
      discard();
      throw;
    }
  }

  CorpusWriter(const CorpusWriter&) = delete;
  CorpusWriter& operator=(const CorpusWriter&) = delete;

  ~CorpusWriter() {
    if (!finished_) discard();
  }

  void add(const Sentence& s) {
    try {
      if (config_.tlearn_prefix) localist_.add(s);
      if (human_.is_open() || config_.verbose) {
        std::string line = emit_human(s);
        if (human_.is_open()) write(human_, line, *config_.human_path);
        if (config_.verbose) console_ << line;
      }
      if (category_.is_open()) write(category_, emit_category(s), *config_.category_path);
    } catch (...) {
      discard();
      throw;
    }
    ++summary_.sentences;
    summary_.tokens += s.size();
  }

  void skip(std::size_t index) {
    ++summary_.skipped;
    summary_.skipped_indices.push_back(index);
  }

  // Closes the line-oriented files and writes the localist pair. An
  // `empty-corpus` error leaves the already complete human/category files.
  OutputSummary finish() {
    try {
      close(human_, config_.human_path);
      close(category_, config_.category_path);
    } catch (...) {
      discard();
      throw;
    }
    finished_ = true;
    if (config_.tlearn_prefix) {
      LocalistFiles files = localist_.finish();
      auto data = localist_data_path(*config_.tlearn_prefix);
      auto teach = localist_teach_path(*config_.tlearn_prefix);
      try {
        write_whole(data, files.data);
        write_whole(teach, files.teach);
      } catch (...) {
        std::error_code ec;
        std::filesystem::remove(data, ec);
        std::filesystem::remove(teach, ec);
        throw;
      }
    }
    return summary_;
  }

  const OutputSummary& summary() const { return summary_; }

 private:
  void open(std::ofstream& f, const std::filesystem::path& p) {
    f.open(p, std::ios::binary | std::ios::trunc);
    if (!f) throw OutputError("io-error", "cannot open '" + p.string() + "' for writing");
    created_.push_back(p);
  }

  static void write(std::ofstream& f, const std::string& s, const std::filesystem::path& p) {
    f.write(s.data(), static_cast<std::streamsize>(s.size()));
    if (!f) throw OutputError("io-error", "write to '" + p.string() + "' failed");
  }

  static void close(std::ofstream& f, const std::optional<std::filesystem::path>& p) {
    if (!f.is_open()) return;
    f.close();
    if (!f) throw OutputError("io-error", "closing '" + p->string() + "' failed");
  }

  static void write_whole(const std::filesystem::path& p, const std::string& s) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw OutputError("io-error", "cannot open '" + p.string() + "' for writing");
    write(f, s, p);
    f.close();
    if (!f) throw OutputError("io-error", "closing '" + p.string() + "' failed");
  }

  void discard() {
    if (human_.is_open()) human_.close();
    if (category_.is_open()) category_.close();
    std::error_code ec;
    for (const auto& p : created_) std::filesystem::remove(p, ec);
    created_.clear();
    finished_ = true;
  }

  EmitterConfig config_;
  std::ostream& console_;
  std::ofstream human_;
  std::ofstream category_;
  LocalistBuilder localist_;
  std::vector<std::filesystem::path> created_;
  OutputSummary summary_;
  bool finished_ = false;
};

// Generates `count` sentences and writes them to every configured sink in a
// single pass. `observe` sees each successfully derived sentence.
inline OutputSummary write_outputs(const Grammar& g, const GeneratorConfig& gen, std::size_t count,
                                   const EmitterConfig& config, std::ostream& console,
                                   const std::function<void(const Sentence&)>& observe = {}) {
  if (config.tlearn_prefix) require_units(g);
  CorpusWriter writer(config, console);
  generate_corpus(g, gen, count, [&](std::size_t i, const Derivation& d) {
    if (d.depth_exceeded) {
      writer.skip(i);
      return;
    }
    writer.add(d.sentence);
    if (observe) observe(d.sentence);
  });
  return writer.finish();
}

}  // namespace sentgen
