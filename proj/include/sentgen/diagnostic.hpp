#pragma once

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sentgen {

enum class Severity { error, warning };

struct Diagnostic {
  Severity severity = Severity::error;
  std::string code;
  std::string message;
  int source_line = 0;  // 0 when the diagnostic is not tied to a line

  bool is_error() const { return severity == Severity::error; }

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

inline Diagnostic make_error(std::string code, std::string message, int line = 0) {
  return {Severity::error, std::move(code), std::move(message), line};
}

inline Diagnostic make_warning(std::string code, std::string message, int line = 0) {
  return {Severity::warning, std::move(code), std::move(message), line};
}

inline bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.is_error(); });
}

// Renders as `line 3: error [mixed-rule]: ...`, the layout used on standard error.
inline std::ostream& operator<<(std::ostream& os, const Diagnostic& d) {
  if (d.source_line > 0) os << "line " << d.source_line << ": ";
  os << (d.is_error() ? "error" : "warning") << " [" << d.code << "]: " << d.message;
  return os;
}

// Thrown by the single-item parsers; parse_grammar catches it and keeps going.
class GrammarError : public std::runtime_error {
 public:
  explicit GrammarError(Diagnostic d)
      : std::runtime_error(d.code + ": " + d.message), diagnostic_(std::move(d)) {}

  const Diagnostic& diagnostic() const noexcept { return diagnostic_; }

 private:
  Diagnostic diagnostic_;
};

// Errors raised while producing output (localist preconditions, file I/O).
class OutputError : public std::runtime_error {
 public:
  OutputError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace sentgen
