#include "causatum/cause.hpp"

#include <algorithm>
#include <cassert>
#include <cstddef>

namespace causatum {

namespace {

// Iterates every value tuple of `vars` in lexicographic range order (the
// first variable is the most significant digit). The callback returns true
// to stop early; the function reports whether it stopped.
template <typename Callback>
bool for_each_setting(const model& m, const std::vector<int>& vars,
                      Callback&& callback) {
  std::vector<std::size_t> digits(vars.size(), 0);
  while (true) {
    intervention iv;
    iv.settings.reserve(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) {
      const range& r = m.vars[static_cast<std::size_t>(vars[i])].rng;
      iv.settings.emplace_back(vars[i], r.values[digits[i]]);
    }
    if (callback(iv)) return true;
    std::size_t pos = vars.size();
    while (pos > 0) {
      --pos;
      const range& r = m.vars[static_cast<std::size_t>(vars[pos])].rng;
      if (++digits[pos] < r.values.size()) break;
      digits[pos] = 0;
      if (pos == 0) return false;
    }
    if (vars.empty()) return false;
  }
}

void require_nonempty(const std::vector<int>& cause_vars) {
  if (cause_vars.empty()) {
    throw causal_error({diag_code::bad_input,
                        "cause candidates must be nonempty variable sets",
                        {}});
  }
}

bool event_holds_actually(const cause_query& q) {
  return satisfies(q.sit.m, q.sit.u, causal_formula{{}, q.phi});
}

}  // namespace

std::vector<int> default_restriction(const model& m, const expr& phi) {
  std::vector<int> occurring = referenced_variables(phi);
  std::vector<int> out;
  for (int v : m.endogenous_indices()) {
    if (!std::binary_search(occurring.begin(), occurring.end(), v)) {
      out.push_back(v);
    }
  }
  return out;
}

std::vector<diagnostic> validate_query(const cause_query& q) {
  std::vector<diagnostic> diags = validate_event(q.sit.m, q.phi);
  std::vector<char> seen(q.sit.m.vars.size(), 0);
  for (int v : q.v_res) {
    if (v < 0 || v >= static_cast<int>(q.sit.m.vars.size())) {
      diags.push_back({diag_code::unknown_variable,
                       "restriction references an undeclared variable", {}});
      continue;
    }
    if (q.sit.m.vars[static_cast<std::size_t>(v)].exogenous) {
      diags.push_back({diag_code::invalid_target,
                       "restriction contains exogenous variable '" +
                           q.sit.m.vars[static_cast<std::size_t>(v)].name +
                           "'",
                       {}});
    }
    if (seen[static_cast<std::size_t>(v)]) {
      diags.push_back({diag_code::duplicate_target,
                       "restriction lists '" +
                           q.sit.m.vars[static_cast<std::size_t>(v)].name +
                           "' twice",
                       {}});
    }
    seen[static_cast<std::size_t>(v)] = 1;
  }
  if (static_cast<int>(q.v_res.size()) > max_family_size()) {
    diags.push_back({diag_code::query_too_large,
                     "restricted set has " + std::to_string(q.v_res.size()) +
                         " variables; the limit is " +
                         std::to_string(max_family_size()),
                     {}});
  }
  return diags;
}

bool check_ac1(const cause_query& q, const std::vector<int>& cause_vars) {
  require_nonempty(cause_vars);
  // The claimed values are the actual solution values, so the X = x
  // conjunct holds by construction; only phi needs checking.
  return event_holds_actually(q);
}

cause_verdict is_necessary_cause(const cause_query& q,
                                 const std::vector<int>& cause_vars) {
  require_nonempty(cause_vars);
  cause_verdict verdict;
  if (!event_holds_actually(q)) return verdict;

  expr negated = expr::negation(q.phi);
  for_each_setting(q.sit.m, cause_vars, [&](const intervention& iv) {
    if (satisfies(q.sit.m, q.sit.u, causal_formula{iv, negated})) {
      verdict.holds = true;
      verdict.setting = iv;
      return true;
    }
    return false;
  });
  return verdict;
}

cause_verdict is_sufficient_cause(const cause_query& q,
                                  const std::vector<int>& cause_vars) {
  require_nonempty(cause_vars);
  cause_verdict verdict;
  if (!event_holds_actually(q)) return verdict;

  std::vector<int> complement;
  for (int v : q.v_res) {
    if (std::find(cause_vars.begin(), cause_vars.end(), v) ==
        cause_vars.end()) {
      complement.push_back(v);
    }
  }
  bool falsified = for_each_setting(
      q.sit.m, complement, [&](const intervention& iv) {
        return !satisfies(q.sit.m, q.sit.u, causal_formula{iv, q.phi});
      });
  verdict.holds = !falsified;
  return verdict;
}

bool empty_set_sufficient(const cause_query& q) {
  if (!event_holds_actually(q)) return false;
  bool falsified =
      for_each_setting(q.sit.m, q.v_res, [&](const intervention& iv) {
        return !satisfies(q.sit.m, q.sit.u, causal_formula{iv, q.phi});
      });
  return !falsified;
}

cause_verdict is_actual_cause(const cause_query& q,
                              const std::vector<int>& cause_vars) {
  require_nonempty(cause_vars);
  cause_verdict verdict;
  if (!event_holds_actually(q)) return verdict;

  std::vector<int> candidates;
  for (int v : q.sit.m.endogenous_indices()) {
    if (std::find(cause_vars.begin(), cause_vars.end(), v) ==
        cause_vars.end()) {
      candidates.push_back(v);
    }
  }
  if (candidates.size() > static_cast<std::size_t>(max_restriction_size)) {
    throw causal_error({diag_code::query_too_large,
                        "contingency search over " +
                            std::to_string(candidates.size()) +
                            " variables exceeds the limit of " +
                            std::to_string(max_restriction_size),
                        {}});
  }
  world actual = solve(q.sit.m, q.sit.u);
  expr negated = expr::negation(q.phi);

  // Contingency subsets by (cardinality, lexicographic); the empty set
  // comes first, so necessary-cause witnesses are found unchanged.
  for (subset_mask w_mask :
       all_subsets_canonical(static_cast<int>(candidates.size()), true)) {
    std::vector<int> contingency = mask_to_vars(w_mask, candidates);
    intervention freeze;
    for (int w : contingency) {
      freeze.settings.emplace_back(w,
                                   actual.values[static_cast<std::size_t>(w)]);
    }
    bool found =
        for_each_setting(q.sit.m, cause_vars, [&](const intervention& iv) {
          intervention combined = iv;
          combined.settings.insert(combined.settings.end(),
                                   freeze.settings.begin(),
                                   freeze.settings.end());
          if (satisfies(q.sit.m, q.sit.u, causal_formula{combined, negated})) {
            verdict.holds = true;
            verdict.setting = iv;
            verdict.contingency = contingency;
            return true;
          }
          return false;
        });
    if (found) break;
  }
  return verdict;
}

std::vector<int> mask_to_vars(subset_mask m, const std::vector<int>& pool) {
  std::vector<int> out;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (m & (subset_mask{1} << i)) out.push_back(pool[i]);
  }
  return out;
}

std::vector<enumerated_cause> enumerate_causes_detailed(const cause_query& q,
                                                        cause_kind kind,
                                                        bool minimal_only,
                                                        exec_mode mode) {
  std::vector<diagnostic> diags = validate_query(q);
  for (const diagnostic& d : diags) {
    if (d.code == diag_code::query_too_large) throw causal_error(d);
  }
  if (!diags.empty()) throw causal_error(diags.front());

  if (!event_holds_actually(q)) return {};

  if (kind == cause_kind::actual) {
    // The contingency guard must trip before the parallel loop; the widest
    // search happens at |X| = 1.
    std::size_t endo_count = q.sit.m.endogenous_indices().size();
    if (endo_count > static_cast<std::size_t>(max_restriction_size) + 1) {
      throw causal_error({diag_code::query_too_large,
                          "contingency search over " +
                              std::to_string(endo_count - 1) +
                              " variables exceeds the limit of " +
                              std::to_string(max_restriction_size),
                          {}});
    }
  }

  const int n = static_cast<int>(q.v_res.size());
  std::vector<subset_mask> masks = all_subsets_canonical(n, false);
  std::vector<cause_verdict> verdicts(masks.size());

  auto judge = [&](std::size_t i) {
    std::vector<int> vars = mask_to_vars(masks[i], q.v_res);
    switch (kind) {
      case cause_kind::necessary:
        verdicts[i] = is_necessary_cause(q, vars);
        break;
      case cause_kind::sufficient:
        verdicts[i] = is_sufficient_cause(q, vars);
        break;
      case cause_kind::actual:
        verdicts[i] = is_actual_cause(q, vars);
        break;
    }
  };

  const std::int64_t count = static_cast<std::int64_t>(masks.size());
  if (mode == exec_mode::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < count; ++i) {
      judge(static_cast<std::size_t>(i));
    }
  } else {
    for (std::int64_t i = 0; i < count; ++i) {
      judge(static_cast<std::size_t>(i));
    }
  }

  std::vector<enumerated_cause> found;
  for (std::size_t i = 0; i < masks.size(); ++i) {
    if (verdicts[i].holds) {
      found.push_back(enumerated_cause{masks[i], verdicts[i]});
    }
  }
  if (minimal_only) {
    std::vector<enumerated_cause> minimal;
    for (const enumerated_cause& x : found) {
      bool has_strict_subset = false;
      for (const enumerated_cause& y : found) {
        if (y.member != x.member && (y.member & x.member) == y.member) {
          has_strict_subset = true;
          break;
        }
      }
      if (!has_strict_subset) minimal.push_back(x);
    }
    return minimal;
  }
  return found;
}

cause_family enumerate_causes(const cause_query& q, cause_kind kind,
                              bool minimal_only, exec_mode mode) {
  std::vector<enumerated_cause> detailed =
      enumerate_causes_detailed(q, kind, minimal_only, mode);
  std::vector<subset_mask> members;
  members.reserve(detailed.size());
  for (const enumerated_cause& c : detailed) members.push_back(c.member);
  return make_family(static_cast<int>(q.v_res.size()), std::move(members));
}

}  // namespace causatum
