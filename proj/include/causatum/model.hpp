#pragma once

// Finite-domain structural equation models: signatures, expressions,
// validation, solving, and counterfactual intervention semantics.

#include "causatum/diagnostics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace causatum {

// Ordered finite list of distinct integer values. "bool" is {0, 1}.
struct range {
  std::vector<int> values;

  static range boolean() { return range{{0, 1}}; }
  bool is_boolean() const { return values == std::vector<int>{0, 1}; }
  bool contains(int v) const;

  bool operator==(const range&) const = default;
};

struct variable {
  std::string name;
  range rng;
  bool exogenous = false;
};

// Expression AST used both for structural equations and for event formulas.
// `var` holds an index into model::vars. Boolean connectives operate on
// {0,1}-valued subexpressions only; non-boolean ranges interact through
// `equals` and `if_then_else`.
struct expr {
  enum class node {
    constant,
    var,
    logical_not,
    logical_and,
    logical_or,
    implies,
    equals,
    if_then_else,
  };

  node kind = node::constant;
  int value = 0;  // node::constant
  int var = -1;   // node::var
  std::vector<expr> kids;
  source_span span;

  static expr constant_of(int v);
  static expr var_ref(int var_index);
  static expr negation(expr e);
  static expr conjunction(expr a, expr b);
  static expr disjunction(expr a, expr b);
  static expr implication(expr a, expr b);
  static expr equality(expr a, expr b);
  static expr ite(expr c, expr t, expr f);
};

// Structural equality, spans ignored.
bool same_expr(const expr& a, const expr& b);

// Variable indices occurring in e, sorted and deduplicated.
std::vector<int> referenced_variables(const expr& e);

// A causal model. Equations and forced values are stored in slots aligned
// with `vars`; a well-formed model has, for every endogenous variable,
// exactly one of the two, and neither for exogenous variables. `forced`
// entries are interventions already applied (empty for a base model).
struct model {
  std::vector<variable> vars;  // declaration order
  std::vector<std::optional<expr>> equations;
  std::vector<std::optional<int>> forced;

  int index_of(const std::string& name) const;  // -1 when absent
  std::vector<int> exogenous_indices() const;
  std::vector<int> endogenous_indices() const;

  void declare(std::string name, range r, bool exogenous);
  void define(const std::string& name, expr e);
};

// Total assignment to all variables, aligned with model::vars.
struct world {
  std::vector<int> values;

  bool operator==(const world&) const = default;
};

// Assignment to the exogenous variables; endogenous slots stay empty.
struct context {
  std::vector<std::optional<int>> values;

  bool operator==(const context&) const = default;
};

context make_context(const model& m,
                     const std::vector<std::pair<std::string, int>>& entries);

// A partial assignment forced onto variables. Targets must be distinct.
struct intervention {
  std::vector<std::pair<int, int>> settings;  // (var index, value)

  bool empty() const { return settings.empty(); }
};

// [iv] event  --  the event is a boolean combination of primitive events
// over endogenous variables.
struct causal_formula {
  intervention iv;
  expr event;
};

// Dependency graph over the endogenous variables: edge X -> Y iff X occurs
// syntactically in the equation of Y. Exogenous parents are kept separately.
struct dependency_graph {
  std::vector<int> nodes;  // endogenous indices, declaration order
  std::vector<std::pair<int, int>> edges;
  std::vector<std::pair<int, int>> exogenous_parents;
};

// Checks well-formedness: name and range sanity, equation totality,
// expression typing, and acyclicity. Returns every diagnostic found, not
// just the first.
std::vector<diagnostic> validate(const model& m);

// Diagnostics for a context that is not total over the exogenous variables
// or carries out-of-range values.
std::vector<diagnostic> validate_context(const model& m, const context& u);

// Event formulas must be boolean-valued and reference endogenous variables
// only.
std::vector<diagnostic> validate_event(const model& m, const expr& event);

dependency_graph make_dependency_graph(const model& m);

// Topological order of the non-forced endogenous variables, preferring
// declaration order among ready variables. Assumes a validated model.
std::vector<int> topological_order(const model& m);

int eval(const expr& e, const world& w);

// The unique solution of a validated acyclic model under a total context.
world solve(const model& m, const context& u);

// Moves each targeted endogenous variable from its equation to `forced`.
// Throws causal_error on unknown/exogenous/duplicated targets or values
// outside the variable's range.
model intervene(const model& m, const intervention& iv);

// Context modification for interventions on exogenous variables.
context intervene_context(const model& m, const context& u,
                          const intervention& iv);

// Def.-3 style satisfaction: splits the intervention into endogenous and
// exogenous parts, solves the modified model, and evaluates the event.
bool satisfies(const model& m, const context& u, const causal_formula& f);

}  // namespace causatum
