#pragma once

// Actual, necessary, and sufficient causes of an event, decided by
// exhaustive search over variable subsets and value settings.

#include "causatum/diagnostics.hpp"
#include "causatum/family.hpp"
#include "causatum/model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace causatum {

struct situation {
  model m;
  context u;
};

// An event formula over a situation plus the ordered restricted variable
// set the cause families are encoded against.
struct cause_query {
  situation sit;
  expr phi;                // boolean combination of primitive events
  std::vector<int> v_res;  // endogenous variable indices, fixed order
};

// Default restriction: every endogenous variable not occurring in phi, in
// declaration order.
std::vector<int> default_restriction(const model& m, const expr& phi);

// Query well-formedness: phi over endogenous variables only and
// boolean-valued, v_res endogenous without duplicates, |v_res| within the
// enumeration guard.
std::vector<diagnostic> validate_query(const cause_query& q);

enum class cause_kind { necessary, sufficient, actual };

struct cause_verdict {
  bool holds = false;
  // Witness forms: necessary -> the alternative setting of X; actual -> the
  // contingency set plus the setting; sufficient -> none (universally
  // quantified).
  std::optional<intervention> setting;
  std::optional<std::vector<int>> contingency;
};

// AC1: phi holds in the actual world (the claimed values are the actual
// solution values, so the X = x conjunct is automatic). X must be nonempty.
bool check_ac1(const cause_query& q, const std::vector<int>& cause_vars);

// NC2: some alternative setting of X falsifies phi. Witness is the first
// hit in lexicographic range order. Accepts any endogenous subset.
cause_verdict is_necessary_cause(const cause_query& q,
                                 const std::vector<int>& cause_vars);

// SF2: phi survives every setting of v_res minus X.
cause_verdict is_sufficient_cause(const cause_query& q,
                                  const std::vector<int>& cause_vars);

// AC2: some contingency W (frozen at its actual values) and setting of X
// falsify phi. W ranges over all endogenous variables outside X; search
// order is W by (cardinality, lexicographic), then settings.
cause_verdict is_actual_cause(const cause_query& q,
                              const std::vector<int>& cause_vars);

enum class exec_mode { serial, parallel };

// All nonempty subsets of v_res passing AC1 plus the kind's second
// condition, in canonical order; minimal_only keeps the antichain. Subset
// verdicts are independent, so the parallel mode evaluates them across
// threads and merges in canonical order; output is identical to serial.
cause_family enumerate_causes(const cause_query& q, cause_kind kind,
                              bool minimal_only,
                              exec_mode mode = exec_mode::parallel);

struct enumerated_cause {
  subset_mask member = 0;
  cause_verdict verdict;
};

// As enumerate_causes, but keeps each member's witness.
std::vector<enumerated_cause> enumerate_causes_detailed(
    const cause_query& q, cause_kind kind, bool minimal_only,
    exec_mode mode = exec_mode::parallel);

// SF2 for the empty subset: phi survives every setting of all of v_res.
// Degenerate by the nonempty-subset convention but needed by the duality
// checks.
bool empty_set_sufficient(const cause_query& q);

// Seeded fuzzing harness: a random acyclic boolean model (parents only from
// earlier variables, one exogenous input each), a random context, phi over
// one or two sink variables adjusted to hold in the actual world, and the
// default restriction. Deterministic in its arguments; the result always
// validates. Requires n_endo <= 10.
cause_query generate_random_model(std::uint64_t seed, int n_endo, int n_exo,
                                  int max_parents);

std::vector<int> mask_to_vars(subset_mask m, const std::vector<int>& v_res);

}  // namespace causatum
