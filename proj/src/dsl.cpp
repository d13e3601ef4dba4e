#include "causatum/dsl.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <limits>
#include <map>
#include <sstream>
#include <utility>

namespace causatum {

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class tok {
  kw_exo, kw_endo, kw_def, kw_context, kw_phi, kw_restrict,
  kw_bool, kw_if, kw_then, kw_else,
  ident, integer,
  colon, assign, eq, comma, lbrace, rbrace, lparen, rparen,
  arrow, pipe, amp, bang,
  bad, end,
};

struct token {
  tok kind = tok::end;
  std::string text;
  int value = 0;
  source_span span;
};

tok keyword_of(const std::string& s) {
  if (s == "exo") return tok::kw_exo;
  if (s == "endo") return tok::kw_endo;
  if (s == "def") return tok::kw_def;
  if (s == "context") return tok::kw_context;
  if (s == "phi") return tok::kw_phi;
  if (s == "restrict") return tok::kw_restrict;
  if (s == "bool") return tok::kw_bool;
  if (s == "if") return tok::kw_if;
  if (s == "then") return tok::kw_then;
  if (s == "else") return tok::kw_else;
  return tok::ident;
}

struct lexer {
  std::string_view src;
  std::vector<diagnostic>& diags;
  std::size_t pos = 0;
  int line = 1;
  int column = 1;

  lexer(std::string_view s, std::vector<diagnostic>& d) : src(s), diags(d) {}

  char peek(std::size_t ahead = 0) const {
    return pos + ahead < src.size() ? src[pos + ahead] : '\0';
  }

  void advance() {
    if (pos >= src.size()) return;
    if (src[pos] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
    ++pos;
  }

  void skip_trivia() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '#') {
        while (pos < src.size() && src[pos] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n' ||
                 c == '\f' || c == '\v') {
        advance();
      } else {
        break;
      }
    }
  }

  source_span open_span() const {
    source_span s;
    s.begin = pos;
    s.line = line;
    s.column = column;
    return s;
  }

  void close_span(source_span& s) const {
    s.end = pos;
    s.end_line = line;
    s.end_column = column;
  }

  token lex_number() {
    token t;
    t.span = open_span();
    t.kind = tok::integer;
    bool negative = false;
    if (peek() == '-') {
      negative = true;
      t.text += '-';
      advance();
    }
    long long value = 0;
    bool overflow = false;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      t.text += peek();
      value = value * 10 + (peek() - '0');
      if (value > std::numeric_limits<int>::max()) overflow = true;
      advance();
    }
    close_span(t.span);
    if (overflow) {
      diags.push_back({diag_code::lex_error,
                       "integer literal '" + t.text + "' is too large",
                       t.span});
      value = std::numeric_limits<int>::max();
    }
    t.value = static_cast<int>(negative ? -value : value);
    return t;
  }

  token next() {
    skip_trivia();
    token t;
    t.span = open_span();
    if (pos >= src.size()) {
      close_span(t.span);
      return t;
    }
    char c = peek();
    auto u = static_cast<unsigned char>(c);
    if (std::isalpha(u) || c == '_') {
      while (std::isalnum(static_cast<unsigned char>(peek())) ||
             peek() == '_') {
        t.text += peek();
        advance();
      }
      close_span(t.span);
      t.kind = keyword_of(t.text);
      return t;
    }
    if (std::isdigit(u) ||
        (c == '-' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      return lex_number();
    }

    auto single = [&](tok kind) {
      t.kind = kind;
      t.text = c;
      advance();
      close_span(t.span);
      return t;
    };
    switch (c) {
      case ':': return single(tok::colon);
      case ',': return single(tok::comma);
      case '{': return single(tok::lbrace);
      case '}': return single(tok::rbrace);
      case '(': return single(tok::lparen);
      case ')': return single(tok::rparen);
      case '|': return single(tok::pipe);
      case '&': return single(tok::amp);
      case '!': return single(tok::bang);
      case '=':
        advance();
        if (peek() == '=') {
          advance();
          t.kind = tok::eq;
          t.text = "==";
        } else {
          t.kind = tok::assign;
          t.text = "=";
        }
        close_span(t.span);
        return t;
      case '-':
        advance();
        if (peek() == '>') {
          advance();
          t.kind = tok::arrow;
          t.text = "->";
          close_span(t.span);
          return t;
        }
        close_span(t.span);
        t.kind = tok::bad;
        diags.push_back({diag_code::lex_error, "stray '-'", t.span});
        return t;
      default:
        break;
    }
    // Coalesce a run of unrecognized bytes into one bad token.
    while (pos < src.size()) {
      char d = peek();
      auto du = static_cast<unsigned char>(d);
      if (std::isalnum(du) || d == '_' || d == '#' || std::isspace(du) ||
          std::string_view(":,{}()|&!=-").find(d) != std::string_view::npos) {
        break;
      }
      advance();
    }
    if (pos == t.span.begin) advance();  // always make progress
    close_span(t.span);
    t.kind = tok::bad;
    diags.push_back(
        {diag_code::lex_error, "unrecognized characters in input", t.span});
    return t;
  }
};

std::vector<token> lex_all(std::string_view text,
                           std::vector<diagnostic>& diags) {
  lexer lx(text, diags);
  std::vector<token> out;
  while (true) {
    out.push_back(lx.next());
    if (out.back().kind == tok::end) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parser

struct parse_bail {};

bool starts_statement(tok k) {
  return k == tok::kw_exo || k == tok::kw_endo || k == tok::kw_def ||
         k == tok::kw_context || k == tok::kw_phi || k == tok::kw_restrict;
}

struct parser {
  const std::vector<token>& toks;
  std::vector<diagnostic>& diags;
  std::size_t at = 0;

  model_document doc;
  // Interned occurrence names; expr::var and statement targets hold intern
  // ids until the post-parse resolution pass.
  std::vector<std::string> names;
  std::map<std::string, int> name_ids;

  parser(const std::vector<token>& t, std::vector<diagnostic>& d)
      : toks(t), diags(d) {}

  const token& cur() const { return toks[at]; }
  const token& prev() const { return toks[at == 0 ? 0 : at - 1]; }

  token eat() {
    token t = cur();
    if (cur().kind != tok::end) ++at;
    return t;
  }

  bool accept(tok k) {
    if (cur().kind != k) return false;
    ++at;
    return true;
  }

  [[noreturn]] void bail(const std::string& message) {
    diags.push_back({diag_code::syntax_error, message, cur().span});
    throw parse_bail{};
  }

  token expect(tok k, const char* what) {
    if (cur().kind != k) bail(std::string("expected ") + what);
    return eat();
  }

  int intern(const std::string& s) {
    auto [it, fresh] = name_ids.try_emplace(s, static_cast<int>(names.size()));
    if (fresh) names.push_back(s);
    return it->second;
  }

  void synchronize() {
    while (cur().kind != tok::end && !starts_statement(cur().kind)) ++at;
  }

  void finish_statement(model_document::statement stmt,
                        const source_span& from) {
    stmt.span = from;
    stmt.span.end = prev().span.end;
    stmt.span.end_line = prev().span.end_line;
    stmt.span.end_column = prev().span.end_column;
    doc.statements.push_back(std::move(stmt));
  }

  void parse_document() {
    while (cur().kind != tok::end) {
      if (cur().kind == tok::bad) {  // already reported by the lexer
        ++at;
        continue;
      }
      if (!starts_statement(cur().kind)) {
        diags.push_back({diag_code::syntax_error,
                         "expected a statement (exo, endo, def, context, "
                         "phi, or restrict)",
                         cur().span});
        ++at;
        continue;
      }
      try {
        parse_statement();
      } catch (const parse_bail&) {
        synchronize();
      }
    }
  }

  void parse_statement() {
    token kw = eat();
    switch (kw.kind) {
      case tok::kw_exo:
      case tok::kw_endo: {
        token name = expect(tok::ident, "a variable name");
        expect(tok::colon, "':'");
        range r = parse_range();
        bool duplicate = false;
        for (const variable& v : doc.vars) {
          if (v.name == name.text) duplicate = true;
        }
        if (duplicate) {
          diags.push_back({diag_code::duplicate_decl,
                           "variable '" + name.text + "' already declared",
                           name.span});
          return;
        }
        bool exo = kw.kind == tok::kw_exo;
        doc.vars.push_back(variable{name.text, r, exo});
        model_document::statement stmt;
        stmt.kind = exo ? model_document::stmt_kind::exo_decl
                        : model_document::stmt_kind::endo_decl;
        stmt.var = static_cast<int>(doc.vars.size()) - 1;
        stmt.rng = std::move(r);
        finish_statement(std::move(stmt), kw.span);
        return;
      }
      case tok::kw_def: {
        token name = expect(tok::ident, "a variable name");
        expect(tok::assign, "'='");
        model_document::statement stmt;
        stmt.kind = model_document::stmt_kind::definition;
        stmt.var = intern(name.text);
        stmt.body = parse_expr();
        finish_statement(std::move(stmt), kw.span);
        return;
      }
      case tok::kw_context: {
        token name = expect(tok::ident, "a variable name");
        expect(tok::assign, "'='");
        token value = expect(tok::integer, "an integer");
        model_document::statement stmt;
        stmt.kind = model_document::stmt_kind::context_entry;
        stmt.var = intern(name.text);
        stmt.value = value.value;
        finish_statement(std::move(stmt), kw.span);
        return;
      }
      case tok::kw_phi: {
        model_document::statement stmt;
        stmt.kind = model_document::stmt_kind::phi_stmt;
        stmt.body = parse_expr();
        finish_statement(std::move(stmt), kw.span);
        return;
      }
      case tok::kw_restrict: {
        model_document::statement stmt;
        stmt.kind = model_document::stmt_kind::restrict_stmt;
        do {
          token name = expect(tok::ident, "a variable name");
          stmt.restriction.push_back(intern(name.text));
        } while (accept(tok::comma));
        finish_statement(std::move(stmt), kw.span);
        return;
      }
      default:
        bail("expected a statement");
    }
  }

  range parse_range() {
    if (accept(tok::kw_bool)) return range::boolean();
    expect(tok::lbrace, "'bool' or '{'");
    range r;
    do {
      token v = expect(tok::integer, "an integer range value");
      r.values.push_back(v.value);
    } while (accept(tok::comma));
    expect(tok::rbrace, "'}'");
    return r;
  }

  expr parse_expr() { return parse_implication(); }

  expr with_span(expr e, const source_span& from) {
    e.span = from;
    e.span.end = prev().span.end;
    e.span.end_line = prev().span.end_line;
    e.span.end_column = prev().span.end_column;
    return e;
  }

  expr parse_implication() {
    source_span from = cur().span;
    expr lhs = parse_disjunction();
    if (accept(tok::arrow)) {
      expr rhs = parse_implication();  // right-associative
      return with_span(expr::implication(std::move(lhs), std::move(rhs)),
                       from);
    }
    return lhs;
  }

  expr parse_disjunction() {
    source_span from = cur().span;
    expr lhs = parse_conjunction();
    while (accept(tok::pipe)) {
      expr rhs = parse_conjunction();
      lhs = with_span(expr::disjunction(std::move(lhs), std::move(rhs)), from);
    }
    return lhs;
  }

  expr parse_conjunction() {
    source_span from = cur().span;
    expr lhs = parse_negation();
    while (accept(tok::amp)) {
      expr rhs = parse_negation();
      lhs = with_span(expr::conjunction(std::move(lhs), std::move(rhs)), from);
    }
    return lhs;
  }

  expr parse_negation() {
    if (cur().kind == tok::bang) {
      source_span from = eat().span;
      expr inner = parse_negation();
      return with_span(expr::negation(std::move(inner)), from);
    }
    return parse_atom();
  }

  expr parse_atom() {
    source_span from = cur().span;
    switch (cur().kind) {
      case tok::integer: {
        token t = eat();
        return with_span(expr::constant_of(t.value), from);
      }
      case tok::ident: {
        token name = eat();
        expr v = with_span(expr::var_ref(intern(name.text)), from);
        if (accept(tok::eq)) {
          token value = expect(tok::integer, "an integer after '=='");
          expr c = expr::constant_of(value.value);
          c.span = value.span;
          return with_span(expr::equality(std::move(v), std::move(c)), from);
        }
        return v;
      }
      case tok::lparen: {
        eat();
        expr inner = parse_expr();
        if (!accept(tok::rparen)) bail("expected ')' (unclosed parenthesis)");
        return inner;
      }
      case tok::kw_if: {
        eat();
        expr c = parse_expr();
        expect(tok::kw_then, "'then'");
        expr t = parse_expr();
        expect(tok::kw_else, "'else'");
        expr f = parse_expr();
        return with_span(
            expr::ite(std::move(c), std::move(t), std::move(f)), from);
      }
      default:
        bail("expected an expression");
    }
  }
};

// Post-parse resolution: intern ids become indices into doc.vars.
struct resolver {
  model_document& doc;
  const std::vector<std::string>& names;
  std::vector<diagnostic>& diags;
  std::map<std::string, int> index_of;

  resolver(model_document& d, const std::vector<std::string>& n,
           std::vector<diagnostic>& ds)
      : doc(d), names(n), diags(ds) {
    for (std::size_t i = 0; i < doc.vars.size(); ++i) {
      index_of.emplace(doc.vars[i].name, static_cast<int>(i));
    }
  }

  int resolve(int intern_id, const source_span& where) {
    const std::string& name = names[static_cast<std::size_t>(intern_id)];
    auto it = index_of.find(name);
    if (it == index_of.end()) {
      diags.push_back({diag_code::unknown_variable,
                       "unknown variable '" + name + "'", where});
      return -1;
    }
    return it->second;
  }

  void resolve_expr(expr& e) {
    if (e.kind == expr::node::var) {
      e.var = resolve(e.var, e.span);
    }
    for (expr& k : e.kids) resolve_expr(k);
  }

  void run() {
    for (auto& stmt : doc.statements) {
      switch (stmt.kind) {
        case model_document::stmt_kind::definition:
          stmt.var = resolve(stmt.var, stmt.span);
          resolve_expr(stmt.body);
          break;
        case model_document::stmt_kind::context_entry:
          stmt.var = resolve(stmt.var, stmt.span);
          break;
        case model_document::stmt_kind::phi_stmt:
          resolve_expr(stmt.body);
          break;
        case model_document::stmt_kind::restrict_stmt:
          for (int& id : stmt.restriction) id = resolve(id, stmt.span);
          break;
        default:
          break;
      }
    }
  }
};

}  // namespace

parse_result parse_model(std::string_view text) {
  parse_result result;
  std::vector<token> toks = lex_all(text, result.diagnostics);
  parser p(toks, result.diagnostics);
  p.parse_document();
  result.doc = std::move(p.doc);
  resolver r(result.doc, p.names, result.diagnostics);
  r.run();
  return result;
}

// ---------------------------------------------------------------------------
// Pretty-printing

namespace {

std::string range_text(const range& r) {
  if (r.is_boolean()) return "bool";
  std::string out = "{";
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(r.values[i]);
  }
  out += "}";
  return out;
}

std::string var_name(int index, const std::vector<variable>& vars) {
  if (index >= 0 && index < static_cast<int>(vars.size())) {
    return vars[static_cast<std::size_t>(index)].name;
  }
  return "?";
}

// Binding strength: -> 1, | 2, & 3, ! 4, atoms 5. if-then-else prints at
// strength 0 so it is parenthesized in any operand position; its trailing
// else-branch would otherwise swallow what follows.
int print_strength(const expr& e) {
  switch (e.kind) {
    case expr::node::implies: return 1;
    case expr::node::logical_or: return 2;
    case expr::node::logical_and: return 3;
    case expr::node::logical_not: return 4;
    case expr::node::if_then_else: return 0;
    default: return 5;
  }
}

void print_rec(std::string& out, const expr& e,
               const std::vector<variable>& vars, int min_strength) {
  int strength = print_strength(e);
  bool parens = strength < min_strength;
  if (parens) out += "(";
  switch (e.kind) {
    case expr::node::constant:
      out += std::to_string(e.value);
      break;
    case expr::node::var:
      out += var_name(e.var, vars);
      break;
    case expr::node::logical_not:
      out += "!";
      print_rec(out, e.kids[0], vars, 4);
      break;
    case expr::node::logical_and:
      print_rec(out, e.kids[0], vars, 3);
      out += " & ";
      print_rec(out, e.kids[1], vars, 4);
      break;
    case expr::node::logical_or:
      print_rec(out, e.kids[0], vars, 2);
      out += " | ";
      print_rec(out, e.kids[1], vars, 3);
      break;
    case expr::node::implies:
      print_rec(out, e.kids[0], vars, 2);
      out += " -> ";
      print_rec(out, e.kids[1], vars, 1);
      break;
    case expr::node::equals:
      print_rec(out, e.kids[0], vars, 5);
      out += " == ";
      print_rec(out, e.kids[1], vars, 5);
      break;
    case expr::node::if_then_else:
      out += "if ";
      print_rec(out, e.kids[0], vars, 0);
      out += " then ";
      print_rec(out, e.kids[1], vars, 0);
      out += " else ";
      print_rec(out, e.kids[2], vars, 0);
      break;
  }
  if (parens) out += ")";
}

}  // namespace

std::string print_expr(const expr& e, const std::vector<variable>& vars) {
  std::string out;
  print_rec(out, e, vars, 0);
  return out;
}

std::string pretty_print(const model_document& doc) {
  std::string out;
  for (const auto& stmt : doc.statements) {
    switch (stmt.kind) {
      case model_document::stmt_kind::exo_decl:
        out += "exo " + var_name(stmt.var, doc.vars) + ": " +
               range_text(stmt.rng);
        break;
      case model_document::stmt_kind::endo_decl:
        out += "endo " + var_name(stmt.var, doc.vars) + ": " +
               range_text(stmt.rng);
        break;
      case model_document::stmt_kind::definition:
        out += "def " + var_name(stmt.var, doc.vars) + " = " +
               print_expr(stmt.body, doc.vars);
        break;
      case model_document::stmt_kind::context_entry:
        out += "context " + var_name(stmt.var, doc.vars) + " = " +
               std::to_string(stmt.value);
        break;
      case model_document::stmt_kind::phi_stmt:
        out += "phi " + print_expr(stmt.body, doc.vars);
        break;
      case model_document::stmt_kind::restrict_stmt: {
        out += "restrict ";
        for (std::size_t i = 0; i < stmt.restriction.size(); ++i) {
          if (i > 0) out += ", ";
          out += var_name(stmt.restriction[i], doc.vars);
        }
        break;
      }
    }
    out += "\n";
  }
  return out;
}

bool same_document(const model_document& a, const model_document& b) {
  if (a.vars.size() != b.vars.size()) return false;
  for (std::size_t i = 0; i < a.vars.size(); ++i) {
    if (a.vars[i].name != b.vars[i].name || !(a.vars[i].rng == b.vars[i].rng) ||
        a.vars[i].exogenous != b.vars[i].exogenous) {
      return false;
    }
  }
  if (a.statements.size() != b.statements.size()) return false;
  for (std::size_t i = 0; i < a.statements.size(); ++i) {
    const auto& sa = a.statements[i];
    const auto& sb = b.statements[i];
    if (sa.kind != sb.kind || sa.var != sb.var || !(sa.rng == sb.rng) ||
        sa.value != sb.value || sa.restriction != sb.restriction ||
        !same_expr(sa.body, sb.body)) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Document -> solver inputs

document_model build_model(const model_document& doc) {
  document_model out;
  out.m.vars = doc.vars;
  out.m.equations.resize(doc.vars.size());
  out.m.forced.resize(doc.vars.size());
  out.u.values.resize(doc.vars.size());

  for (const auto& stmt : doc.statements) {
    switch (stmt.kind) {
      case model_document::stmt_kind::definition: {
        if (stmt.var < 0) break;  // already diagnosed by the resolver
        auto slot = static_cast<std::size_t>(stmt.var);
        if (out.m.equations[slot].has_value()) {
          out.diagnostics.push_back(
              {diag_code::duplicate_decl,
               "variable '" + doc.vars[slot].name + "' defined twice",
               stmt.span});
          break;
        }
        out.m.equations[slot] = stmt.body;
        break;
      }
      case model_document::stmt_kind::context_entry: {
        if (stmt.var < 0) break;
        auto slot = static_cast<std::size_t>(stmt.var);
        if (!doc.vars[slot].exogenous) {
          out.diagnostics.push_back(
              {diag_code::invalid_target,
               "context entry for endogenous variable '" +
                   doc.vars[slot].name + "'",
               stmt.span});
          break;
        }
        if (out.u.values[slot].has_value()) {
          out.diagnostics.push_back(
              {diag_code::duplicate_decl,
               "context entry for '" + doc.vars[slot].name + "' given twice",
               stmt.span});
          break;
        }
        out.u.values[slot] = stmt.value;
        break;
      }
      default:
        break;
    }
  }

  std::vector<diagnostic> model_diags = validate(out.m);
  out.diagnostics.insert(out.diagnostics.end(), model_diags.begin(),
                         model_diags.end());
  return out;
}

document_query build_query(const model_document& doc) {
  document_query out;
  document_model dm = build_model(doc);
  out.diagnostics = std::move(dm.diagnostics);

  const model_document::statement* phi_stmt = nullptr;
  const model_document::statement* restrict_stmt = nullptr;
  for (const auto& stmt : doc.statements) {
    if (stmt.kind == model_document::stmt_kind::phi_stmt) {
      if (phi_stmt) {
        out.diagnostics.push_back(
            {diag_code::duplicate_decl, "phi declared more than once",
             stmt.span});
      } else {
        phi_stmt = &stmt;
      }
    }
    if (stmt.kind == model_document::stmt_kind::restrict_stmt) {
      if (restrict_stmt) {
        out.diagnostics.push_back(
            {diag_code::duplicate_decl, "restrict declared more than once",
             stmt.span});
      } else {
        restrict_stmt = &stmt;
      }
    }
  }
  if (!phi_stmt) {
    out.diagnostics.push_back(
        {diag_code::missing_phi, "the document declares no phi", {}});
  }

  std::vector<diagnostic> context_diags = validate_context(dm.m, dm.u);
  out.diagnostics.insert(out.diagnostics.end(), context_diags.begin(),
                         context_diags.end());

  out.query.sit = situation{std::move(dm.m), std::move(dm.u)};
  if (phi_stmt) {
    out.query.phi = phi_stmt->body;
    if (restrict_stmt) {
      for (int v : restrict_stmt->restriction) {
        if (v >= 0) out.query.v_res.push_back(v);
      }
    } else {
      out.query.v_res =
          default_restriction(out.query.sit.m, out.query.phi);
    }
    std::vector<diagnostic> query_diags = validate_query(out.query);
    out.diagnostics.insert(out.diagnostics.end(), query_diags.begin(),
                           query_diags.end());
  }
  return out;
}

model_document to_document(const cause_query& q) {
  model_document doc;
  doc.vars = q.sit.m.vars;

  auto add = [&](model_document::statement stmt) {
    doc.statements.push_back(std::move(stmt));
  };

  for (std::size_t i = 0; i < doc.vars.size(); ++i) {
    model_document::statement stmt;
    stmt.kind = doc.vars[i].exogenous ? model_document::stmt_kind::exo_decl
                                      : model_document::stmt_kind::endo_decl;
    stmt.var = static_cast<int>(i);
    stmt.rng = doc.vars[i].rng;
    add(std::move(stmt));
  }
  for (std::size_t i = 0; i < doc.vars.size(); ++i) {
    if (doc.vars[i].exogenous) continue;
    model_document::statement stmt;
    stmt.kind = model_document::stmt_kind::definition;
    stmt.var = static_cast<int>(i);
    if (q.sit.m.equations[i].has_value()) {
      stmt.body = *q.sit.m.equations[i];
    } else if (q.sit.m.forced[i].has_value()) {
      stmt.body = expr::constant_of(*q.sit.m.forced[i]);
    }
    add(std::move(stmt));
  }
  for (std::size_t i = 0; i < doc.vars.size(); ++i) {
    if (!doc.vars[i].exogenous) continue;
    model_document::statement stmt;
    stmt.kind = model_document::stmt_kind::context_entry;
    stmt.var = static_cast<int>(i);
    stmt.value = q.sit.u.values[i].value_or(0);
    add(std::move(stmt));
  }
  {
    model_document::statement stmt;
    stmt.kind = model_document::stmt_kind::phi_stmt;
    stmt.body = q.phi;
    add(std::move(stmt));
  }
  if (q.v_res != default_restriction(q.sit.m, q.phi)) {
    model_document::statement stmt;
    stmt.kind = model_document::stmt_kind::restrict_stmt;
    stmt.restriction = q.v_res;
    add(std::move(stmt));
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Family files

std::string emit_family(const cause_family& f,
                        const std::vector<std::string>& names) {
  assert(static_cast<int>(names.size()) == f.n);
  std::string out = "# over";
  for (std::size_t i = 0; i < names.size(); ++i) {
    out += i == 0 ? " " : ",";
    out += names[i];
  }
  out += "\n";
  for (subset_mask m : f.members) {
    out += "{";
    bool first = true;
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (m & (subset_mask{1} << i)) {
        if (!first) out += ", ";
        out += names[i];
        first = false;
      }
    }
    out += "}\n";
  }
  return out;
}

namespace {

std::string trimmed(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

family_parse_result parse_family_impl(
    std::string_view text, const std::vector<std::string>* expected) {
  family_parse_result out;
  bool saw_header = false;
  if (expected) out.names = *expected;

  std::size_t line_start = 0;
  int line_no = 0;
  std::vector<subset_mask> members;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = text.size();
    std::string_view raw_line = text.substr(line_start, line_end - line_start);
    ++line_no;
    source_span span;
    span.begin = line_start;
    span.end = line_end;
    span.line = line_no;
    span.column = 1;
    span.end_line = line_no;
    span.end_column = static_cast<int>(raw_line.size()) + 1;

    std::string line = trimmed(raw_line);
    if (!line.empty() && line[0] == '#') {
      std::string rest = trimmed(std::string_view(line).substr(1));
      if (rest.rfind("over", 0) == 0 && !saw_header) {
        saw_header = true;
        std::vector<std::string> header_names;
        std::string list = trimmed(std::string_view(rest).substr(4));
        std::size_t pos = 0;
        while (pos < list.size()) {
          std::size_t comma = list.find(',', pos);
          if (comma == std::string::npos) comma = list.size();
          std::string name =
              trimmed(std::string_view(list).substr(pos, comma - pos));
          if (!name.empty()) header_names.push_back(name);
          pos = comma + 1;
        }
        if (expected && header_names != *expected) {
          out.diagnostics.push_back(
              {diag_code::bad_input,
               "family header does not match the expected variable order",
               span});
        } else if (!expected) {
          out.names = std::move(header_names);
        }
      }
      line_start = line_end + 1;
      continue;
    }
    // Strip a trailing comment from member lines.
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = trimmed(std::string_view(line).substr(0, hash));
    if (line.empty()) {
      line_start = line_end + 1;
      continue;
    }
    if (line.front() != '{' || line.back() != '}') {
      out.diagnostics.push_back(
          {diag_code::bad_input,
           "expected a member line of the form {A, B}", span});
      line_start = line_end + 1;
      continue;
    }
    std::string inner = trimmed(std::string_view(line).substr(1, line.size() - 2));
    subset_mask mask = 0;
    if (!inner.empty()) {
      std::size_t pos = 0;
      while (pos <= inner.size()) {
        std::size_t comma = inner.find(',', pos);
        if (comma == std::string::npos) comma = inner.size();
        std::string name =
            trimmed(std::string_view(inner).substr(pos, comma - pos));
        if (!name.empty()) {
          auto it = std::find(out.names.begin(), out.names.end(), name);
          if (it == out.names.end()) {
            out.diagnostics.push_back({diag_code::unknown_variable,
                                       "unknown variable '" + name +
                                           "' in family member",
                                       span});
          } else {
            mask |= subset_mask{1}
                    << (it - out.names.begin());
          }
        }
        pos = comma + 1;
      }
    }
    members.push_back(mask);
    line_start = line_end + 1;
  }

  if (!saw_header && !expected) {
    out.diagnostics.push_back({diag_code::bad_input,
                               "family file is missing its '# over' header",
                               {}});
  }
  if (static_cast<int>(out.names.size()) > max_family_size()) {
    out.diagnostics.push_back(
        {diag_code::query_too_large,
         "family ranges over " + std::to_string(out.names.size()) +
             " variables; the limit is " + std::to_string(max_family_size()),
         {}});
    return out;
  }
  out.family = make_family(static_cast<int>(out.names.size()), std::move(members));
  return out;
}

}  // namespace

family_parse_result parse_family(std::string_view text) {
  return parse_family_impl(text, nullptr);
}

family_parse_result parse_family(std::string_view text,
                                 const std::vector<std::string>& expected_names) {
  return parse_family_impl(text, &expected_names);
}

}  // namespace causatum
