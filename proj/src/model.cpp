#include "causatum/model.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <set>
#include <sstream>
#include <utility>

namespace causatum {

const char* diag_code_name(diag_code code) {
  switch (code) {
    case diag_code::missing_equation: return "MissingEquation";
    case diag_code::duplicate_equation: return "DuplicateEquation";
    case diag_code::cyclic_dependency: return "CyclicDependency";
    case diag_code::range_violation: return "RangeViolation";
    case diag_code::unknown_variable: return "UnknownVariable";
    case diag_code::duplicate_variable: return "DuplicateVariable";
    case diag_code::invalid_identifier: return "InvalidIdentifier";
    case diag_code::duplicate_target: return "DuplicateTarget";
    case diag_code::invalid_target: return "InvalidTarget";
    case diag_code::missing_context: return "MissingContext";
    case diag_code::lex_error: return "LexError";
    case diag_code::syntax_error: return "SyntaxError";
    case diag_code::duplicate_decl: return "DuplicateDecl";
    case diag_code::missing_phi: return "MissingPhi";
    case diag_code::query_too_large: return "QueryTooLarge";
    case diag_code::not_antichain: return "NotAntichain";
    case diag_code::bad_input: return "BadInput";
  }
  return "Unknown";
}

std::string format_diagnostic(const diagnostic& d) {
  std::ostringstream out;
  if (d.span.known()) {
    out << d.span.line << ":" << d.span.column << ": ";
  }
  out << "error [" << diag_code_name(d.code) << "]: " << d.message;
  return out.str();
}

std::string format_diagnostics(const std::vector<diagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) {
    out += format_diagnostic(d);
    out += '\n';
  }
  return out;
}

bool range::contains(int v) const {
  return std::find(values.begin(), values.end(), v) != values.end();
}

expr expr::constant_of(int v) {
  expr e;
  e.kind = node::constant;
  e.value = v;
  return e;
}

expr expr::var_ref(int var_index) {
  expr e;
  e.kind = node::var;
  e.var = var_index;
  return e;
}

namespace {

expr make_node(expr::node kind, std::vector<expr> kids) {
  expr e;
  e.kind = kind;
  e.kids = std::move(kids);
  return e;
}

}  // namespace

expr expr::negation(expr e) {
  return make_node(node::logical_not, {std::move(e)});
}

expr expr::conjunction(expr a, expr b) {
  return make_node(node::logical_and, {std::move(a), std::move(b)});
}

expr expr::disjunction(expr a, expr b) {
  return make_node(node::logical_or, {std::move(a), std::move(b)});
}

expr expr::implication(expr a, expr b) {
  return make_node(node::implies, {std::move(a), std::move(b)});
}

expr expr::equality(expr a, expr b) {
  return make_node(node::equals, {std::move(a), std::move(b)});
}

expr expr::ite(expr c, expr t, expr f) {
  return make_node(node::if_then_else, {std::move(c), std::move(t), std::move(f)});
}

bool same_expr(const expr& a, const expr& b) {
  if (a.kind != b.kind || a.value != b.value || a.var != b.var ||
      a.kids.size() != b.kids.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.kids.size(); ++i) {
    if (!same_expr(a.kids[i], b.kids[i])) return false;
  }
  return true;
}

namespace {

void collect_vars(const expr& e, std::vector<int>& out) {
  if (e.kind == expr::node::var) out.push_back(e.var);
  for (const auto& k : e.kids) collect_vars(k, out);
}

}  // namespace

std::vector<int> referenced_variables(const expr& e) {
  std::vector<int> out;
  collect_vars(e, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int model::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<int> model::exogenous_indices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].exogenous) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> model::endogenous_indices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (!vars[i].exogenous) out.push_back(static_cast<int>(i));
  }
  return out;
}

void model::declare(std::string name, range r, bool exo) {
  vars.push_back(variable{std::move(name), std::move(r), exo});
  equations.emplace_back();
  forced.emplace_back();
}

void model::define(const std::string& name, expr e) {
  int i = index_of(name);
  assert(i >= 0);
  equations[static_cast<std::size_t>(i)] = std::move(e);
}

context make_context(const model& m,
                     const std::vector<std::pair<std::string, int>>& entries) {
  context u;
  u.values.resize(m.vars.size());
  for (const auto& [name, value] : entries) {
    int i = m.index_of(name);
    if (i < 0) {
      throw causal_error({diag_code::unknown_variable,
                          "unknown variable '" + name + "' in context", {}});
    }
    u.values[static_cast<std::size_t>(i)] = value;
  }
  return u;
}

namespace {

bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  auto head = static_cast<unsigned char>(s[0]);
  if (!std::isalpha(head) && s[0] != '_') return false;
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    if (!std::isalnum(u) && c != '_') return false;
  }
  return true;
}

using value_set = std::set<int>;

bool subset_of(const value_set& a, const value_set& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

value_set range_set(const range& r) {
  return value_set(r.values.begin(), r.values.end());
}

const value_set& bool_set() {
  static const value_set s{0, 1};
  return s;
}

std::string describe_site(const model& m, int var_index) {
  return "equation of '" + m.vars[static_cast<std::size_t>(var_index)].name + "'";
}

// Infers the attainable value set of e, collecting typing diagnostics along
// the way. Unknown variables yield an empty set, which suppresses follow-up
// range complaints about the same subtree.
value_set infer(const model& m, const expr& e, const std::string& site,
                std::vector<diagnostic>& diags) {
  auto require_boolean = [&](const expr& operand, const char* what) {
    value_set got = infer(m, operand, site, diags);
    if (!got.empty() && !subset_of(got, bool_set())) {
      diags.push_back({diag_code::range_violation,
                       std::string(what) + " operand is not boolean-valued in " + site,
                       operand.span});
    }
  };

  switch (e.kind) {
    case expr::node::constant:
      return {e.value};
    case expr::node::var: {
      if (e.var < 0 || e.var >= static_cast<int>(m.vars.size())) {
        diags.push_back({diag_code::unknown_variable,
                         "reference to undeclared variable in " + site, e.span});
        return {};
      }
      return range_set(m.vars[static_cast<std::size_t>(e.var)].rng);
    }
    case expr::node::logical_not:
      require_boolean(e.kids[0], "negation");
      return bool_set();
    case expr::node::logical_and:
    case expr::node::logical_or:
    case expr::node::implies: {
      const char* what = e.kind == expr::node::logical_and ? "conjunction"
                         : e.kind == expr::node::logical_or ? "disjunction"
                                                            : "implication";
      require_boolean(e.kids[0], what);
      require_boolean(e.kids[1], what);
      return bool_set();
    }
    case expr::node::equals: {
      const expr& lhs = e.kids[0];
      const expr& rhs = e.kids[1];
      value_set ls = infer(m, lhs, site, diags);
      value_set rs = infer(m, rhs, site, diags);
      bool lc = lhs.kind == expr::node::constant;
      bool rc = rhs.kind == expr::node::constant;
      if (!ls.empty() && !rs.empty() && !(lc && rc)) {
        if (lc || rc) {
          const value_set& host = lc ? rs : ls;
          int c = lc ? lhs.value : rhs.value;
          if (!host.count(c)) {
            diags.push_back({diag_code::range_violation,
                             "constant " + std::to_string(c) +
                                 " is outside the compared range in " + site,
                             (lc ? lhs : rhs).span});
          }
        } else if (ls != rs) {
          diags.push_back({diag_code::range_violation,
                           "equality operands have different ranges in " + site,
                           e.span});
        }
      }
      return bool_set();
    }
    case expr::node::if_then_else: {
      require_boolean(e.kids[0], "condition");
      value_set t = infer(m, e.kids[1], site, diags);
      value_set f = infer(m, e.kids[2], site, diags);
      t.insert(f.begin(), f.end());
      return t;
    }
  }
  return {};
}

void check_expression_site(const model& m, const expr& e, int target,
                           std::vector<diagnostic>& diags) {
  std::string site = describe_site(m, target);
  value_set got = infer(m, e, site, diags);
  const range& want = m.vars[static_cast<std::size_t>(target)].rng;
  if (!got.empty() && !subset_of(got, range_set(want))) {
    diags.push_back({diag_code::range_violation,
                     "value outside the range of '" +
                         m.vars[static_cast<std::size_t>(target)].name +
                         "' in its equation",
                     e.span});
  }
}

// One cycle through `start`, formatted "A -> B -> A".
std::string format_cycle(const model& m, const std::vector<int>& stack,
                         int start) {
  std::string out;
  auto it = std::find(stack.begin(), stack.end(), start);
  for (; it != stack.end(); ++it) {
    out += m.vars[static_cast<std::size_t>(*it)].name;
    out += " -> ";
  }
  out += m.vars[static_cast<std::size_t>(start)].name;
  return out;
}

}  // namespace

std::vector<diagnostic> validate(const model& m) {
  std::vector<diagnostic> diags;
  const std::size_t count = m.vars.size();
  assert(m.equations.size() == count && m.forced.size() == count);

  for (std::size_t i = 0; i < count; ++i) {
    const variable& v = m.vars[i];
    if (!valid_identifier(v.name)) {
      diags.push_back({diag_code::invalid_identifier,
                       "variable name '" + v.name + "' is not an identifier",
                       {}});
    }
    for (std::size_t j = i + 1; j < count; ++j) {
      if (m.vars[j].name == v.name) {
        diags.push_back({diag_code::duplicate_variable,
                         "variable '" + v.name + "' declared more than once",
                         {}});
      }
    }
    if (v.rng.values.empty()) {
      diags.push_back({diag_code::range_violation,
                       "range of '" + v.name + "' is empty", {}});
    }
    value_set distinct(v.rng.values.begin(), v.rng.values.end());
    if (distinct.size() != v.rng.values.size()) {
      diags.push_back({diag_code::range_violation,
                       "range of '" + v.name + "' has duplicate values", {}});
    }
  }

  for (std::size_t i = 0; i < count; ++i) {
    const variable& v = m.vars[i];
    bool has_eq = m.equations[i].has_value();
    bool is_forced = m.forced[i].has_value();
    if (v.exogenous) {
      if (has_eq) {
        diags.push_back({diag_code::duplicate_equation,
                         "equation attached to exogenous variable '" + v.name +
                             "'",
                         {}});
      }
      if (is_forced) {
        diags.push_back({diag_code::invalid_target,
                         "exogenous variable '" + v.name +
                             "' carries a forced value",
                         {}});
      }
      continue;
    }
    if (!has_eq && !is_forced) {
      diags.push_back({diag_code::missing_equation,
                       "no equation for endogenous variable '" + v.name + "'",
                       {}});
    }
    if (has_eq && is_forced) {
      diags.push_back({diag_code::duplicate_equation,
                       "variable '" + v.name +
                           "' is both forced and defined by an equation",
                       {}});
    }
    if (is_forced && !v.rng.contains(*m.forced[i])) {
      diags.push_back({diag_code::range_violation,
                       "forced value " + std::to_string(*m.forced[i]) +
                           " outside the range of '" + v.name + "'",
                       {}});
    }
    if (has_eq) {
      check_expression_site(m, *m.equations[i], static_cast<int>(i), diags);
    }
  }

  // Acyclicity over the endogenous dependency graph; one cycle is reported.
  enum class mark { unseen, active, done };
  std::vector<mark> marks(count, mark::unseen);
  std::vector<int> stack;
  bool cycle_reported = false;

  auto visit = [&](auto&& self, int v) -> void {
    marks[static_cast<std::size_t>(v)] = mark::active;
    stack.push_back(v);
    if (m.equations[static_cast<std::size_t>(v)].has_value()) {
      for (int dep : referenced_variables(*m.equations[static_cast<std::size_t>(v)])) {
        if (dep < 0 || dep >= static_cast<int>(count)) continue;
        if (m.vars[static_cast<std::size_t>(dep)].exogenous) continue;
        mark dm = marks[static_cast<std::size_t>(dep)];
        if (dm == mark::active && !cycle_reported) {
          cycle_reported = true;
          diags.push_back({diag_code::cyclic_dependency,
                           "cyclic dependency: " + format_cycle(m, stack, dep),
                           {}});
        } else if (dm == mark::unseen) {
          self(self, dep);
        }
      }
    }
    stack.pop_back();
    marks[static_cast<std::size_t>(v)] = mark::done;
  };

  for (std::size_t i = 0; i < count; ++i) {
    if (!m.vars[i].exogenous && marks[i] == mark::unseen) {
      visit(visit, static_cast<int>(i));
    }
  }

  return diags;
}

std::vector<diagnostic> validate_context(const model& m, const context& u) {
  std::vector<diagnostic> diags;
  if (u.values.size() != m.vars.size()) {
    diags.push_back({diag_code::missing_context,
                     "context not aligned with the model signature", {}});
    return diags;
  }
  for (std::size_t i = 0; i < m.vars.size(); ++i) {
    if (!m.vars[i].exogenous) continue;
    if (!u.values[i].has_value()) {
      diags.push_back({diag_code::missing_context,
                       "context value missing for exogenous variable '" +
                           m.vars[i].name + "'",
                       {}});
    } else if (!m.vars[i].rng.contains(*u.values[i])) {
      diags.push_back({diag_code::range_violation,
                       "context value " + std::to_string(*u.values[i]) +
                           " outside the range of '" + m.vars[i].name + "'",
                       {}});
    }
  }
  return diags;
}

std::vector<diagnostic> validate_event(const model& m, const expr& event) {
  std::vector<diagnostic> diags;
  value_set got = infer(m, event, "the event formula", diags);
  if (!got.empty() && !subset_of(got, bool_set())) {
    diags.push_back({diag_code::range_violation,
                     "event formula is not boolean-valued", event.span});
  }
  for (int v : referenced_variables(event)) {
    if (v >= 0 && v < static_cast<int>(m.vars.size()) &&
        m.vars[static_cast<std::size_t>(v)].exogenous) {
      diags.push_back({diag_code::invalid_target,
                       "event formula references exogenous variable '" +
                           m.vars[static_cast<std::size_t>(v)].name + "'",
                       event.span});
    }
  }
  return diags;
}

dependency_graph make_dependency_graph(const model& m) {
  dependency_graph g;
  g.nodes = m.endogenous_indices();
  for (int y : g.nodes) {
    if (!m.equations[static_cast<std::size_t>(y)].has_value()) continue;
    for (int x : referenced_variables(*m.equations[static_cast<std::size_t>(y)])) {
      if (m.vars[static_cast<std::size_t>(x)].exogenous) {
        g.exogenous_parents.emplace_back(x, y);
      } else {
        g.edges.emplace_back(x, y);
      }
    }
  }
  return g;
}

std::vector<int> topological_order(const model& m) {
  std::vector<int> pending;
  for (std::size_t i = 0; i < m.vars.size(); ++i) {
    if (!m.vars[i].exogenous && m.equations[i].has_value()) {
      pending.push_back(static_cast<int>(i));
    }
  }
  std::vector<char> placed(m.vars.size(), 0);
  for (std::size_t i = 0; i < m.vars.size(); ++i) {
    if (m.vars[i].exogenous || m.forced[i].has_value()) placed[i] = 1;
  }

  std::vector<int> order;
  order.reserve(pending.size());
  while (!pending.empty()) {
    bool progressed = false;
    for (std::size_t p = 0; p < pending.size(); ++p) {
      int v = pending[p];
      const expr& eq = *m.equations[static_cast<std::size_t>(v)];
      bool ready = true;
      for (int dep : referenced_variables(eq)) {
        if (!placed[static_cast<std::size_t>(dep)]) {
          ready = false;
          break;
        }
      }
      if (ready) {
        order.push_back(v);
        placed[static_cast<std::size_t>(v)] = 1;
        pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(p));
        progressed = true;
        break;
      }
    }
    assert(progressed && "topological_order on a cyclic model");
    if (!progressed) break;
  }
  return order;
}

int eval(const expr& e, const world& w) {
  switch (e.kind) {
    case expr::node::constant:
      return e.value;
    case expr::node::var:
      return w.values[static_cast<std::size_t>(e.var)];
    case expr::node::logical_not:
      return eval(e.kids[0], w) == 0 ? 1 : 0;
    case expr::node::logical_and:
      return (eval(e.kids[0], w) != 0 && eval(e.kids[1], w) != 0) ? 1 : 0;
    case expr::node::logical_or:
      return (eval(e.kids[0], w) != 0 || eval(e.kids[1], w) != 0) ? 1 : 0;
    case expr::node::implies:
      return (eval(e.kids[0], w) == 0 || eval(e.kids[1], w) != 0) ? 1 : 0;
    case expr::node::equals:
      return eval(e.kids[0], w) == eval(e.kids[1], w) ? 1 : 0;
    case expr::node::if_then_else:
      return eval(e.kids[0], w) != 0 ? eval(e.kids[1], w) : eval(e.kids[2], w);
  }
  return 0;
}

world solve(const model& m, const context& u) {
  world w;
  w.values.assign(m.vars.size(), 0);
  for (std::size_t i = 0; i < m.vars.size(); ++i) {
    if (m.vars[i].exogenous) {
      assert(u.values.size() == m.vars.size() && u.values[i].has_value());
      w.values[i] = *u.values[i];
    } else if (m.forced[i].has_value()) {
      w.values[i] = *m.forced[i];
    }
  }
  for (int v : topological_order(m)) {
    w.values[static_cast<std::size_t>(v)] =
        eval(*m.equations[static_cast<std::size_t>(v)], w);
  }
  return w;
}

model intervene(const model& m, const intervention& iv) {
  model out = m;
  std::vector<char> seen(m.vars.size(), 0);
  for (const auto& [var, value] : iv.settings) {
    if (var < 0 || var >= static_cast<int>(m.vars.size())) {
      throw causal_error({diag_code::unknown_variable,
                          "intervention on undeclared variable", {}});
    }
    const variable& decl = m.vars[static_cast<std::size_t>(var)];
    if (decl.exogenous) {
      throw causal_error({diag_code::invalid_target,
                          "intervention target '" + decl.name +
                              "' is exogenous; modify the context instead",
                          {}});
    }
    if (seen[static_cast<std::size_t>(var)]) {
      throw causal_error({diag_code::duplicate_target,
                          "variable '" + decl.name +
                              "' intervened on more than once",
                          {}});
    }
    seen[static_cast<std::size_t>(var)] = 1;
    if (!decl.rng.contains(value)) {
      throw causal_error({diag_code::range_violation,
                          "intervention value " + std::to_string(value) +
                              " outside the range of '" + decl.name + "'",
                          {}});
    }
    out.equations[static_cast<std::size_t>(var)].reset();
    out.forced[static_cast<std::size_t>(var)] = value;
  }
  return out;
}

context intervene_context(const model& m, const context& u,
                          const intervention& iv) {
  context out = u;
  for (const auto& [var, value] : iv.settings) {
    if (var < 0 || var >= static_cast<int>(m.vars.size())) {
      throw causal_error({diag_code::unknown_variable,
                          "context intervention on undeclared variable", {}});
    }
    const variable& decl = m.vars[static_cast<std::size_t>(var)];
    if (!decl.exogenous) {
      throw causal_error({diag_code::invalid_target,
                          "context intervention target '" + decl.name +
                              "' is endogenous",
                          {}});
    }
    if (!decl.rng.contains(value)) {
      throw causal_error({diag_code::range_violation,
                          "context value " + std::to_string(value) +
                              " outside the range of '" + decl.name + "'",
                          {}});
    }
    out.values[static_cast<std::size_t>(var)] = value;
  }
  return out;
}

bool satisfies(const model& m, const context& u, const causal_formula& f) {
  intervention endo, exo;
  for (const auto& [var, value] : f.iv.settings) {
    if (var >= 0 && var < static_cast<int>(m.vars.size()) &&
        m.vars[static_cast<std::size_t>(var)].exogenous) {
      exo.settings.emplace_back(var, value);
    } else {
      endo.settings.emplace_back(var, value);
    }
  }
  world w = solve(intervene(m, endo), intervene_context(m, u, exo));
  return eval(f.event, w) != 0;
}

}  // namespace causatum
