// causatum: solve finite structural equation models, enumerate actual,
// necessary, and sufficient causes, and check the duality between the
// latter two.

#include "causatum/boolfun.hpp"
#include "causatum/cause.hpp"
#include "causatum/dsl.hpp"
#include "causatum/verify.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_property_failure = 1;
constexpr int exit_input_error = 2;
constexpr int exit_ac1_failure = 3;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void print_diagnostics(const std::string& path,
                       const std::vector<causatum::diagnostic>& diags) {
  for (const auto& d : diags) {
    std::cerr << path << ":" << causatum::format_diagnostic(d) << "\n";
  }
}

bool parse_assignment(const std::string& text, std::string& name, int& value) {
  std::size_t eq = text.find('=');
  if (eq == std::string::npos || eq == 0) return false;
  name = text.substr(0, eq);
  try {
    std::size_t used = 0;
    value = std::stoi(text.substr(eq + 1), &used);
    return used == text.size() - eq - 1 && used > 0;
  } catch (const std::exception&) {
    return false;
  }
}

struct loaded_query {
  causatum::cause_query query;
  int exit_code = exit_ok;
};

loaded_query load_query(const std::string& path) {
  loaded_query out;
  auto text = read_file(path);
  if (!text) {
    std::cerr << path << ": cannot read file\n";
    out.exit_code = exit_input_error;
    return out;
  }
  causatum::parse_result parsed = causatum::parse_model(*text);
  if (!parsed.ok()) {
    print_diagnostics(path, parsed.diagnostics);
    out.exit_code = exit_input_error;
    return out;
  }
  causatum::document_query built = causatum::build_query(parsed.doc);
  if (!built.diagnostics.empty()) {
    print_diagnostics(path, built.diagnostics);
    out.exit_code = exit_input_error;
    return out;
  }
  out.query = std::move(built.query);
  return out;
}

std::vector<std::string> restriction_names(const causatum::cause_query& q) {
  std::vector<std::string> names;
  for (int v : q.v_res) {
    names.push_back(q.sit.m.vars[static_cast<std::size_t>(v)].name);
  }
  return names;
}

// ---------------------------------------------------------------------------
// eval

struct eval_options {
  std::string path;
  std::vector<std::string> do_settings;
  std::vector<std::string> exo_settings;
  std::string format = "text";
};

int run_eval(const eval_options& opt) {
  auto text = read_file(opt.path);
  if (!text) {
    std::cerr << opt.path << ": cannot read file\n";
    return exit_input_error;
  }
  causatum::parse_result parsed = causatum::parse_model(*text);
  if (!parsed.ok()) {
    print_diagnostics(opt.path, parsed.diagnostics);
    return exit_input_error;
  }
  causatum::document_model built = causatum::build_model(parsed.doc);
  if (!built.diagnostics.empty()) {
    print_diagnostics(opt.path, built.diagnostics);
    return exit_input_error;
  }

  causatum::intervention endo_iv;
  causatum::intervention exo_iv;
  for (bool exo : {true, false}) {
    const auto& raw = exo ? opt.exo_settings : opt.do_settings;
    for (const std::string& entry : raw) {
      std::string name;
      int value = 0;
      if (!parse_assignment(entry, name, value)) {
        std::cerr << "malformed assignment '" << entry << "' (want VAR=VAL)\n";
        return exit_input_error;
      }
      int var = built.m.index_of(name);
      if (var < 0) {
        std::cerr << "unknown variable '" << name << "'\n";
        return exit_input_error;
      }
      (exo ? exo_iv : endo_iv).settings.emplace_back(var, value);
    }
  }

  try {
    causatum::context u =
        causatum::intervene_context(built.m, built.u, exo_iv);
    std::vector<causatum::diagnostic> context_diags =
        causatum::validate_context(built.m, u);
    if (!context_diags.empty()) {
      print_diagnostics(opt.path, context_diags);
      return exit_input_error;
    }
    causatum::model modified = causatum::intervene(built.m, endo_iv);
    causatum::world w = causatum::solve(modified, u);

    const char* separator = opt.format == "machine" ? "\n" : " ";
    for (std::size_t i = 0; i < built.m.vars.size(); ++i) {
      if (i > 0) std::cout << separator;
      std::cout << built.m.vars[i].name << "=" << w.values[i];
    }
    std::cout << "\n";
    return exit_ok;
  } catch (const causatum::causal_error& e) {
    std::cerr << e.what() << "\n";
    return exit_input_error;
  }
}

// ---------------------------------------------------------------------------
// causes

struct causes_options {
  std::string path;
  std::string kind = "necessary";
  bool all = false;
  bool witness = false;
  bool serial = false;
};

std::string witness_comment(const causatum::cause_query& q,
                            const causatum::cause_verdict& verdict) {
  std::string out = "  # W={";
  if (verdict.contingency.has_value()) {
    for (std::size_t i = 0; i < verdict.contingency->size(); ++i) {
      if (i > 0) out += ", ";
      out += q.sit.m.vars[static_cast<std::size_t>((*verdict.contingency)[i])]
                 .name;
    }
  }
  out += "}";
  if (verdict.setting.has_value()) {
    for (const auto& [var, value] : verdict.setting->settings) {
      out += "; " + q.sit.m.vars[static_cast<std::size_t>(var)].name + "<-" +
             std::to_string(value);
    }
  }
  return out;
}

int run_causes(const causes_options& opt) {
  loaded_query loaded = load_query(opt.path);
  if (loaded.exit_code != exit_ok) return loaded.exit_code;
  const causatum::cause_query& q = loaded.query;

  if (!causatum::satisfies(q.sit.m, q.sit.u, causatum::causal_formula{{}, q.phi})) {
    std::cerr << opt.path
              << ": phi does not hold in the actual world (AC1 fails); no "
                 "cause family exists\n";
    return exit_ac1_failure;
  }

  causatum::cause_kind kind = causatum::cause_kind::necessary;
  if (opt.kind == "sufficient") kind = causatum::cause_kind::sufficient;
  if (opt.kind == "actual") kind = causatum::cause_kind::actual;
  if (opt.witness && kind != causatum::cause_kind::actual) {
    std::cerr << "--witness is only meaningful with --kind actual\n";
    return exit_input_error;
  }
  causatum::exec_mode mode = opt.serial ? causatum::exec_mode::serial
                                        : causatum::exec_mode::parallel;

  try {
    std::vector<std::string> names = restriction_names(q);
    if (opt.witness) {
      auto detailed =
          causatum::enumerate_causes_detailed(q, kind, !opt.all, mode);
      std::string header = "# over";
      for (std::size_t i = 0; i < names.size(); ++i) {
        header += i == 0 ? " " : ",";
        header += names[i];
      }
      std::cout << header << "\n";
      for (const auto& found : detailed) {
        causatum::cause_family single{static_cast<int>(names.size()),
                                      {found.member}};
        std::string line = causatum::emit_family(single, names);
        // emit_family yields "header\nmember\n"; keep the member line only.
        std::size_t cut = line.find('\n');
        line = line.substr(cut + 1);
        if (!line.empty() && line.back() == '\n') line.pop_back();
        std::cout << line << witness_comment(q, found.verdict) << "\n";
      }
      return exit_ok;
    }
    causatum::cause_family family =
        causatum::enumerate_causes(q, kind, !opt.all, mode);
    std::cout << causatum::emit_family(family, names);
    return exit_ok;
  } catch (const causatum::causal_error& e) {
    std::cerr << e.what() << "\n";
    return exit_input_error;
  }
}

// ---------------------------------------------------------------------------
// dual

struct dual_options {
  std::string path;
  bool from_minimal = false;
  int table_width = -1;  // --n for headerless family files
  bool serial = false;
};

bool looks_like_family_file(const std::string& text) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + pos, end - pos);
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b != std::string_view::npos) {
      return line.substr(b).rfind("# over", 0) == 0 || line[b] == '{';
    }
    pos = end + 1;
  }
  return false;
}

int print_family_result(const causatum::cause_family& family,
                        bool dropped_empty,
                        const std::vector<std::string>& names) {
  std::cout << causatum::emit_family(family, names);
  if (dropped_empty) {
    std::cerr << "note: the empty set belongs to the dual family; it is "
                 "omitted by the nonempty-subset convention\n";
  }
  return exit_ok;
}

int run_dual(const dual_options& opt) {
  auto text = read_file(opt.path);
  if (!text) {
    std::cerr << opt.path << ": cannot read file\n";
    return exit_input_error;
  }

  causatum::cause_family input;
  std::vector<std::string> names;
  bool minimal_input_is_family = false;

  if (opt.table_width >= 0 || looks_like_family_file(*text)) {
    causatum::family_parse_result parsed;
    if (opt.table_width >= 0 && !looks_like_family_file(*text)) {
      std::vector<std::string> synthesized;
      for (int i = 1; i <= opt.table_width; ++i) {
        synthesized.push_back("V" + std::to_string(i));
      }
      parsed = causatum::parse_family(*text, synthesized);
    } else {
      parsed = causatum::parse_family(*text);
    }
    if (!parsed.ok()) {
      print_diagnostics(opt.path, parsed.diagnostics);
      return exit_input_error;
    }
    input = std::move(parsed.family);
    names = std::move(parsed.names);
    minimal_input_is_family = true;
  } else {
    loaded_query loaded = load_query(opt.path);
    if (loaded.exit_code != exit_ok) return loaded.exit_code;
    const causatum::cause_query& q = loaded.query;
    if (!causatum::satisfies(q.sit.m, q.sit.u,
                             causatum::causal_formula{{}, q.phi})) {
      std::cerr << opt.path
                << ": phi does not hold in the actual world (AC1 fails)\n";
      return exit_ac1_failure;
    }
    causatum::exec_mode mode = opt.serial ? causatum::exec_mode::serial
                                          : causatum::exec_mode::parallel;
    // The plain dual consumes the full necessary family, the minimal
    // pipeline its antichain.
    input = causatum::enumerate_causes(q, causatum::cause_kind::necessary,
                                       opt.from_minimal, mode);
    names = restriction_names(q);
  }
  (void)minimal_input_is_family;

  try {
    if (opt.from_minimal) {
      causatum::pipeline_result result =
          causatum::minimal_sufficient_from_minimal_necessary(input);
      return print_family_result(result.family, result.dropped_empty_set,
                                 names);
    }
    causatum::cause_family dual = causatum::dual_family_checked(input);
    causatum::stripped_family stripped = causatum::strip_empty_member(dual);
    return print_family_result(stripped.family, stripped.dropped_empty_set,
                               names);
  } catch (const causatum::causal_error& e) {
    std::cerr << e.what() << "\n";
    return exit_input_error;
  }
}

// ---------------------------------------------------------------------------
// verify

struct verify_cli_options {
  std::string path;
  bool random = false;
  std::uint64_t seed = 0;
  int count = 100;
  int max_endo = 5;
  bool serial = false;
  bool quiet = false;
};

int run_verify(const verify_cli_options& opt) {
  causatum::verify_report report;
  if (opt.random) {
    if (opt.max_endo < 1 || opt.max_endo > 8) {
      std::cerr << "--max-endo must be between 1 and 8\n";
      return exit_input_error;
    }
    if (opt.count < 1) {
      std::cerr << "--count must be positive\n";
      return exit_input_error;
    }
    causatum::verify_options vo;
    vo.seed = opt.seed;
    vo.count = opt.count;
    vo.max_endo = opt.max_endo;
    vo.mode = opt.serial ? causatum::exec_mode::serial
                         : causatum::exec_mode::parallel;
    report = causatum::verify_random(vo);
  } else {
    loaded_query loaded = load_query(opt.path);
    if (loaded.exit_code != exit_ok) return loaded.exit_code;
    report = causatum::verify_single(loaded.query, opt.path);
    if (report.input_error) {
      std::cerr << report.text;
      return exit_ac1_failure;
    }
  }
  if (opt.quiet) {
    std::istringstream lines(report.text);
    std::string line;
    while (std::getline(lines, line)) {
      if (line.rfind("passed ", 0) == 0 || line.find(": PASS") == std::string::npos) {
        std::cout << line << "\n";
      }
    }
  } else {
    std::cout << report.text;
  }
  return report.ok() ? exit_ok : exit_property_failure;
}

// ---------------------------------------------------------------------------
// qm

struct qm_options {
  std::string path;
  std::string table;
};

std::string clause_text(const causatum::clause& c,
                        const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!(c.vars & (std::uint32_t{1} << i))) continue;
    if (!out.empty()) out += " ";
    if (!(c.positive & (std::uint32_t{1} << i))) out += "!";
    out += names[i];
  }
  return out;
}

int run_qm(const qm_options& opt) {
  causatum::truth_table tt;
  std::vector<std::string> names;

  if (!opt.table.empty()) {
    std::size_t size = opt.table.size();
    int n = 0;
    while ((std::size_t{1} << n) < size) ++n;
    if ((std::size_t{1} << n) != size || n > causatum::max_family_size()) {
      std::cerr << "--table needs a 0/1 string whose length is a power of "
                   "two (at most 2^"
                << causatum::max_family_size() << ")\n";
      return exit_input_error;
    }
    tt.n = n;
    tt.bits.resize(size);
    for (std::size_t i = 0; i < size; ++i) {
      if (opt.table[i] != '0' && opt.table[i] != '1') {
        std::cerr << "--table accepts only '0' and '1'\n";
        return exit_input_error;
      }
      tt.bits[i] = opt.table[i] == '1' ? 1 : 0;
    }
    for (int i = 1; i <= n; ++i) names.push_back("V" + std::to_string(i));
  } else if (!opt.path.empty()) {
    auto text = read_file(opt.path);
    if (!text) {
      std::cerr << opt.path << ": cannot read file\n";
      return exit_input_error;
    }
    causatum::family_parse_result parsed = causatum::parse_family(*text);
    if (!parsed.ok()) {
      print_diagnostics(opt.path, parsed.diagnostics);
      return exit_input_error;
    }
    tt = causatum::to_truth_table(causatum::family_to_dnf(parsed.family));
    names = std::move(parsed.names);
  } else {
    std::cerr << "qm needs a family file or --table\n";
    return exit_input_error;
  }

  causatum::normal_form minimal = causatum::quine_mccluskey(tt);
  if (!(causatum::to_truth_table(minimal) == tt)) {
    std::cerr << "internal error: minimized formula is not equivalent\n";
    return exit_property_failure;
  }
  if (minimal.clauses.empty()) {
    std::cout << "FALSE\n";
    return exit_ok;
  }
  if (minimal.clauses.size() == 1 && minimal.clauses[0].vars == 0) {
    std::cout << "TRUE\n";
    return exit_ok;
  }
  for (const causatum::clause& c : minimal.clauses) {
    std::cout << clause_text(c, names) << "\n";
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"causal reasoning over finite structural equation models"};
  app.require_subcommand(1);

  eval_options eval_opt;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "solve a model and print the world");
  eval_cmd->add_option("model", eval_opt.path, "model file (.scm.txt)")
      ->required();
  eval_cmd->add_option("--do", eval_opt.do_settings,
                       "endogenous intervention VAR=VAL");
  eval_cmd->add_option("--set-exo", eval_opt.exo_settings,
                       "exogenous override VAR=VAL");
  eval_cmd->add_option("--format", eval_opt.format, "text or machine")
      ->check(CLI::IsMember({"text", "machine"}));

  causes_options causes_opt;
  CLI::App* causes_cmd =
      app.add_subcommand("causes", "enumerate causes of phi");
  causes_cmd->add_option("model", causes_opt.path, "model file (.scm.txt)")
      ->required();
  causes_cmd
      ->add_option("--kind", causes_opt.kind,
                   "necessary, sufficient, or actual")
      ->required()
      ->check(CLI::IsMember({"necessary", "sufficient", "actual"}));
  causes_cmd->add_flag("--all", causes_opt.all,
                       "include non-minimal causes");
  causes_cmd->add_flag("--witness", causes_opt.witness,
                       "append contingency/setting witnesses (actual only)");
  causes_cmd->add_flag("--serial", causes_opt.serial,
                       "disable parallel subset evaluation");

  dual_options dual_opt;
  CLI::App* dual_cmd = app.add_subcommand(
      "dual", "dualize a cause family (or a model's necessary family)");
  dual_cmd->add_option("input", dual_opt.path, "family file or model file")
      ->required();
  dual_cmd->add_flag("--from-minimal", dual_opt.from_minimal,
                     "treat the input as a minimal family and run the "
                     "saturate/dualize/minimize pipeline");
  dual_cmd->add_option("--n", dual_opt.table_width,
                       "variable count for headerless family files");
  dual_cmd->add_flag("--serial", dual_opt.serial,
                     "disable parallel subset evaluation");

  verify_cli_options verify_opt;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "check the necessary/sufficient duality and related "
                "properties");
  verify_cmd->add_option("model", verify_opt.path, "model file (.scm.txt)");
  CLI::Option* random_flag = verify_cmd->add_flag(
      "--random", verify_opt.random, "fuzz seeded random models");
  verify_cmd->add_option("--seed", verify_opt.seed, "base seed")
      ->needs(random_flag);
  verify_cmd->add_option("--count", verify_opt.count, "number of models")
      ->needs(random_flag);
  verify_cmd->add_option("--max-endo", verify_opt.max_endo,
                         "largest endogenous variable count (at most 8)");
  verify_cmd->add_flag("--serial", verify_opt.serial,
                       "check models sequentially");
  verify_cmd->add_flag("-q,--quiet", verify_opt.quiet,
                       "print failures and the summary only");

  qm_options qm_opt;
  CLI::App* qm_cmd = app.add_subcommand(
      "qm", "Quine-McCluskey minimization of a family or truth table");
  qm_cmd->add_option("family", qm_opt.path, "family file");
  qm_cmd->add_option("--table", qm_opt.table,
                     "truth table literal, e.g. 0110");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_input_error;
  }

  if (verify_cmd->parsed()) {
    if (!verify_opt.random && verify_opt.path.empty()) {
      std::cerr << "verify needs a model file or --random --seed S\n";
      return exit_input_error;
    }
    if (verify_opt.random && !verify_opt.path.empty()) {
      std::cerr << "verify takes either a model file or --random, not both\n";
      return exit_input_error;
    }
    if (verify_opt.random &&
        verify_cmd->count("--seed") == 0) {
      std::cerr << "--random requires --seed\n";
      return exit_input_error;
    }
  }

  if (eval_cmd->parsed()) return run_eval(eval_opt);
  if (causes_cmd->parsed()) return run_causes(causes_opt);
  if (dual_cmd->parsed()) return run_dual(dual_opt);
  if (verify_cmd->parsed()) return run_verify(verify_opt);
  if (qm_cmd->parsed()) return run_qm(qm_opt);
  return exit_input_error;
}
