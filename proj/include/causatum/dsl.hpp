#pragma once

// The textual model format (.scm.txt): lexer, recursive-descent parser with
// error recovery, canonical pretty-printer, family-file serialization, and
// conversion into solver inputs. This is the sole ingestion path for
// models, contexts, queries, and cause families.

#include "causatum/cause.hpp"
#include "causatum/diagnostics.hpp"
#include "causatum/family.hpp"
#include "causatum/model.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace causatum {

// A parsed model file. Declarations double as the variable table; exprs
// reference variables by index into `vars`, resolved after the parse so
// statements may mention variables declared later in the file.
struct model_document {
  enum class stmt_kind {
    exo_decl,
    endo_decl,
    definition,
    context_entry,
    phi_stmt,
    restrict_stmt,
  };

  struct statement {
    stmt_kind kind;
    int var = -1;  // declaration, definition, or context target
    range rng;
    expr body;  // definition or phi
    int value = 0;
    std::vector<int> restriction;
    source_span span;
  };

  std::vector<variable> vars;  // declaration order
  std::vector<statement> statements;
};

// Structural equality, spans ignored.
bool same_document(const model_document& a, const model_document& b);

struct parse_result {
  model_document doc;
  std::vector<diagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
};

// Total on arbitrary byte strings: every malformed input yields diagnostics
// with spans inside the input, never a crash. Recovers at statement
// keywords so several errors are reported in one pass.
parse_result parse_model(std::string_view text);

// Canonical formatting: one statement per line, minimal parentheses.
// parse_model(pretty_print(d)) reproduces d up to spans.
std::string pretty_print(const model_document& doc);

std::string print_expr(const expr& e, const std::vector<variable>& vars);

struct document_model {
  model m;
  context u;
  std::vector<diagnostic> diagnostics;
};

// Model and context from a document (context totality is left to
// validate_context so callers can apply overrides first).
document_model build_model(const model_document& doc);

struct document_query {
  cause_query query;
  std::vector<diagnostic> diagnostics;
};

// Full query: model, total context, phi, and the restriction (explicit
// `restrict` or the default).
document_query build_query(const model_document& doc);

// A re-ingestible document for a query (used for counterexample dumps).
model_document to_document(const cause_query& q);

// Family files: a "# over V1,...,Vn" header followed by one "{Vi, Vj}"
// member line per subset in canonical order. parse_family inverts
// emit_family exactly; trailing "#" comments on member lines are ignored.
std::string emit_family(const cause_family& f,
                        const std::vector<std::string>& names);

struct family_parse_result {
  cause_family family;
  std::vector<std::string> names;
  std::vector<diagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
};

family_parse_result parse_family(std::string_view text);
family_parse_result parse_family(std::string_view text,
                                 const std::vector<std::string>& expected_names);

}  // namespace causatum
