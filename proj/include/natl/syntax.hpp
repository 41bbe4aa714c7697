#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "natl/copula.hpp"
#include "natl/term.hpp"

namespace natl {

/// A located parse problem. Lines and columns are 1-based.
struct Diagnostic {
  std::size_t line = 0;
  std::size_t column = 0;
  std::string message;
  std::vector<std::string> expected;

  std::string to_string() const;
};

class SyntaxError : public std::runtime_error {
 public:
  explicit SyntaxError(Diagnostic d);
  const Diagnostic& diagnostic() const { return diagnostic_; }

 private:
  Diagnostic diagnostic_;
};

/// Raised by parse_kb with one diagnostic per offending line.
class KbSyntaxError : public std::runtime_error {
 public:
  explicit KbSyntaxError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// Parses one term. Top-level statements and linkages may omit their
/// outer parentheses (`human -> animal`).
Term parse_term(std::string_view text,
                const CopulaRegistry& registry = CopulaRegistry::builtin());

/// Canonical, fully parenthesized text. parse_term(print_term(t)) == t.
std::string print_term(const Term& t);

struct SourceJudgment {
  Term term;
  double confidence = 1.0;
  std::optional<std::string> label;
  std::size_t line = 0;
};

/// Parses a knowledge-base file: one judgment per line,
/// `[LABEL:] term [% t %]`, `#` comments, blank lines ignored.
std::vector<SourceJudgment> parse_kb(
    std::string_view text,
    const CopulaRegistry& registry = CopulaRegistry::builtin());

/// Parses a single judgment line (no comment handling).
SourceJudgment parse_judgment(std::string_view line,
                              const CopulaRegistry& registry = CopulaRegistry::builtin(),
                              std::size_t line_number = 1);

std::string print_judgment(const Term& term, double confidence,
                           const std::optional<std::string>& label = std::nullopt);

/// Shortest text that reads back to the same double, always with a
/// fractional part (`1.0`, `0.8`, `0.6400000000000001`).
std::string format_confidence(double t);

}  // namespace natl
