#include "causatum/verify.hpp"

#include "causatum/dsl.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace causatum {

namespace {

std::vector<std::string> restriction_names(const cause_query& q) {
  std::vector<std::string> names;
  names.reserve(q.v_res.size());
  for (int v : q.v_res) {
    names.push_back(q.sit.m.vars[static_cast<std::size_t>(v)].name);
  }
  return names;
}

cause_family with_empty_member(const cause_family& f, bool add_empty) {
  if (!add_empty) return f;
  std::vector<subset_mask> members = f.members;
  members.push_back(0);
  return make_family(f.n, std::move(members));
}

void check_pipeline(const cause_query& q, const cause_family& necessary,
                    const cause_family& sufficient, bool empty_sufficient,
                    duality_check& out) {
  cause_family minimal_necessary = minimize_family(necessary);
  // The oracle side carries the empty set when it genuinely satisfies SF2;
  // enumeration excludes it by convention, the pipeline must not.
  cause_family sufficient_aware = with_empty_member(sufficient, empty_sufficient);
  cause_family minimal_sufficient = minimize_family(sufficient_aware);
  stripped_family expected = strip_empty_member(minimal_sufficient);

  for (cnf_mode mode : {cnf_mode::canonical, cnf_mode::quine_mccluskey}) {
    const char* mode_name =
        mode == cnf_mode::canonical ? "canonical CNF" : "Quine-McCluskey CNF";
    pipeline_result forward =
        minimal_sufficient_from_minimal_necessary(minimal_necessary, mode);
    if (!(forward.family == expected.family) ||
        forward.dropped_empty_set != expected.dropped_empty_set) {
      out.pass = false;
      out.failures.push_back(
          std::string("pipeline (necessary -> sufficient, ") + mode_name +
          ") differs from the brute-force minimal sufficient family");
    }
    pipeline_result reverse =
        minimal_sufficient_from_minimal_necessary(minimal_sufficient, mode);
    if (!(reverse.family == minimal_necessary) || reverse.dropped_empty_set) {
      out.pass = false;
      out.failures.push_back(
          std::string("pipeline (sufficient -> necessary, ") + mode_name +
          ") differs from the brute-force minimal necessary family");
    }
  }
  (void)q;
}

}  // namespace

duality_check check_duality(const cause_query& q) {
  duality_check out;
  if (!satisfies(q.sit.m, q.sit.u, causal_formula{{}, q.phi})) {
    out.ac1 = false;
    out.pass = false;
    out.failures.push_back(
        "phi does not hold in the actual world; every cause family is empty "
        "by AC1 and the duality checks are vacuous");
    return out;
  }

  out.necessary = enumerate_causes(q, cause_kind::necessary, false,
                                   exec_mode::serial);
  out.sufficient = enumerate_causes(q, cause_kind::sufficient, false,
                                    exec_mode::serial);
  bool empty_sufficient = empty_set_sufficient(q);

  // Theorem transform, two independent routes.
  cause_family pointwise = dual_family(out.necessary);
  cause_family syntactic =
      dual_family_syntactic(out.necessary, cnf_mode::canonical);
  if (!(pointwise == syntactic)) {
    out.pass = false;
    out.failures.push_back(
        "dual routes disagree (pointwise vs canonical CNF + switch)");
  }
  stripped_family dual_stripped = strip_empty_member(pointwise);
  if (!(dual_stripped.family == out.sufficient)) {
    out.pass = false;
    out.failures.push_back(
        "dual of the necessary family differs from the sufficient family");
  }
  if (dual_stripped.dropped_empty_set != empty_sufficient) {
    out.pass = false;
    out.failures.push_back(
        "empty-set membership of the dual disagrees with SF2 on the empty "
        "set");
  }

  // Footnote 1: an actual cause X under contingency W embeds into the
  // necessary cause X union W.
  for (const enumerated_cause& found : enumerate_causes_detailed(
           q, cause_kind::actual, false, exec_mode::serial)) {
    std::vector<int> vars = mask_to_vars(found.member, q.v_res);
    if (found.verdict.contingency.has_value()) {
      vars.insert(vars.end(), found.verdict.contingency->begin(),
                  found.verdict.contingency->end());
    }
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    if (!is_necessary_cause(q, vars).holds) {
      out.pass = false;
      out.failures.push_back(
          "an actual cause plus its contingency is not a necessary cause");
    }
  }

  // Upward closure within the restricted set.
  if (!(saturate_upward(out.necessary) == out.necessary)) {
    out.pass = false;
    out.failures.push_back("the necessary family is not upward closed");
  }
  if (!(saturate_upward(out.sufficient) == out.sufficient)) {
    out.pass = false;
    out.failures.push_back("the sufficient family is not upward closed");
  }

  check_pipeline(q, out.necessary, out.sufficient, empty_sufficient, out);
  return out;
}

namespace {

int pick_endo_count(std::uint64_t seed, int i, int max_endo) {
  std::mt19937_64 mixer(seed * 0x9E3779B97F4A7C15ULL +
                        static_cast<std::uint64_t>(i) + 1);
  return 1 + static_cast<int>(mixer() % static_cast<std::uint64_t>(max_endo));
}

std::string report_for(const cause_query& q, const std::string& label,
                       const duality_check& check) {
  std::ostringstream out;
  out << label << ": " << (check.pass ? "PASS" : "FAIL") << "\n";
  if (!check.pass) {
    for (const std::string& failure : check.failures) {
      out << "  " << failure << "\n";
    }
    out << "# --- counterexample model ---\n";
    out << pretty_print(to_document(q));
    std::vector<std::string> names = restriction_names(q);
    out << "# --- necessary family (full) ---\n";
    out << emit_family(check.necessary, names);
    out << "# --- sufficient family (full) ---\n";
    out << emit_family(check.sufficient, names);
  }
  return out.str();
}

}  // namespace

cause_query verify_corpus_model(const verify_options& opt, int index) {
  int n_endo = pick_endo_count(opt.seed, index, opt.max_endo);
  return generate_random_model(opt.seed + static_cast<std::uint64_t>(index),
                               n_endo, n_endo, 3);
}

verify_report verify_random(const verify_options& opt) {
  verify_report report;
  report.total = opt.count;
  std::vector<std::string> lines(static_cast<std::size_t>(opt.count));
  std::vector<char> passes(static_cast<std::size_t>(opt.count), 0);

  const std::int64_t count = opt.count;
#pragma omp parallel for schedule(dynamic) if (opt.mode == exec_mode::parallel)
  for (std::int64_t i = 0; i < count; ++i) {
    std::string label = "model " + std::to_string(i);
    try {
      cause_query q = verify_corpus_model(opt, static_cast<int>(i));
      duality_check check = check_duality(q);
      passes[static_cast<std::size_t>(i)] = check.pass ? 1 : 0;
      lines[static_cast<std::size_t>(i)] = report_for(q, label, check);
    } catch (const std::exception& e) {
      passes[static_cast<std::size_t>(i)] = 0;
      lines[static_cast<std::size_t>(i)] =
          label + ": FAIL\n  exception: " + e.what() + "\n";
    }
  }

  std::ostringstream text;
  for (std::int64_t i = 0; i < count; ++i) {
    text << lines[static_cast<std::size_t>(i)];
    if (passes[static_cast<std::size_t>(i)]) ++report.passed;
  }
  text << "passed " << report.passed << "/" << report.total << "\n";
  report.text = text.str();
  return report;
}

verify_report verify_single(const cause_query& q, const std::string& label) {
  verify_report report;
  report.total = 1;
  duality_check check = check_duality(q);
  if (!check.ac1) {
    report.input_error = true;
    report.text = label + ": phi does not hold in the actual world\n";
    return report;
  }
  if (check.pass) report.passed = 1;
  std::ostringstream text;
  text << report_for(q, label, check);
  text << "passed " << report.passed << "/" << report.total << "\n";
  report.text = text.str();
  return report;
}

}  // namespace causatum
