#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace causatum {

// Half-open byte range [begin, end) with 1-based line/column coordinates.
// A default-constructed span means "no location".
struct source_span {
  std::size_t begin = 0;
  std::size_t end = 0;
  int line = 0;
  int column = 0;
  int end_line = 0;
  int end_column = 0;

  bool known() const { return line > 0; }
};

enum class diag_code {
  // model validation
  missing_equation,
  duplicate_equation,
  cyclic_dependency,
  range_violation,
  unknown_variable,
  duplicate_variable,
  invalid_identifier,
  duplicate_target,
  invalid_target,
  missing_context,
  // parsing
  lex_error,
  syntax_error,
  duplicate_decl,
  // query construction
  missing_phi,
  query_too_large,
  not_antichain,
  bad_input,
};

struct diagnostic {
  diag_code code;
  std::string message;
  source_span span;
};

const char* diag_code_name(diag_code code);

// "error [code] at line:col: message" (location omitted when unknown).
std::string format_diagnostic(const diagnostic& d);
std::string format_diagnostics(const std::vector<diagnostic>& ds);

// Contract violations that cannot usefully be returned as a diagnostics
// list: bad intervention targets, oversized queries, non-antichain input.
class causal_error : public std::runtime_error {
 public:
  explicit causal_error(diagnostic d)
      : std::runtime_error(format_diagnostic(d)), diag_(std::move(d)) {}

  const diagnostic& diag() const { return diag_; }

 private:
  diagnostic diag_;
};

}  // namespace causatum
