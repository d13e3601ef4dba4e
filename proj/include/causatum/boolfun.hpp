#pragma once

// Boolean-formula machinery behind the necessary/sufficient duality:
// truth tables, canonical CNF, connective switching, Quine-McCluskey
// minimization, and the family-level conversion pipeline.

#include "causatum/diagnostics.hpp"
#include "causatum/family.hpp"

#include <cstdint>
#include <vector>

namespace causatum {

// A boolean function over n <= 16 indicator variables; entry at index a is
// the value at the assignment where bit i of a is the value of variable i.
struct truth_table {
  int n = 0;
  std::vector<char> bits;  // 2^n entries

  bool at(std::uint32_t assignment) const { return bits[assignment] != 0; }

  bool operator==(const truth_table&) const = default;
};

// Set of literals with at most one polarity per variable: `vars` marks the
// mentioned indices, `positive` (a subset of `vars`) the positive ones.
// Read as a conjunction inside a DNF and as a disjunction inside a CNF.
struct clause {
  std::uint32_t vars = 0;
  std::uint32_t positive = 0;

  bool operator==(const clause&) const = default;
};

struct normal_form {
  enum class connective { dnf, cnf };

  connective kind = connective::dnf;
  int n = 0;
  std::vector<clause> clauses;  // empty list: DNF = false, CNF = true

  bool operator==(const normal_form&) const = default;
};

// One full minterm per member, in canonical member order.
normal_form family_to_dnf(const cause_family& f);

bool eval_nf(const normal_form& nf, std::uint32_t assignment);

// Enumerates all 2^n assignments; the default splits the index range across
// threads for large n, the _serial variant is the reference implementation.
truth_table to_truth_table(const normal_form& nf);
truth_table to_truth_table_serial(const normal_form& nf);

// One maxterm per falsifying assignment, ascending assignment order.
normal_form canonical_cnf(const truth_table& tt);

// Flips DNF <-> CNF; clause content is preserved verbatim.
normal_form switch_connectives(normal_form nf);

// Exact two-level minimization: prime implicants by iterative merging, then
// an exact minimum cover via essential implicants and Petrick's method.
// Ties break by (fewest clauses, fewest literals, lexicographic clause
// order). The default parallelizes the merge step, the _serial variant is
// the reference implementation.
normal_form quine_mccluskey(const truth_table& tt);
normal_form quine_mccluskey_serial(const truth_table& tt);

// Minimal CNF, obtained by minimizing the complement and negating literals.
normal_form minimal_cnf(const truth_table& tt);

enum class cnf_mode { canonical, quine_mccluskey };

// The dual family g with g(X) = not f(complement of X), computed pointwise.
// Exact involution; the result may contain the empty set.
cause_family dual_family(const cause_family& f);

// The same family via the formula route: family DNF -> truth table -> CNF
// (canonical or Quine-McCluskey-reduced) -> switch connectives -> members.
cause_family dual_family_syntactic(const cause_family& f,
                                   cnf_mode mode = cnf_mode::canonical);

// Runs both routes and throws causal_error if they disagree.
cause_family dual_family_checked(const cause_family& f,
                                 cnf_mode mode = cnf_mode::canonical);

struct pipeline_result {
  cause_family family;
  bool dropped_empty_set = false;
};

// saturate -> dual -> minimize, dropping a minimal empty set from the
// result with a diagnostic flag. Input must be an antichain (NotAntichain
// otherwise). The CNF inside the dual step is selectable; both modes give
// the same family.
pipeline_result minimal_sufficient_from_minimal_necessary(
    const cause_family& minimal_necessary, cnf_mode mode = cnf_mode::canonical);

}  // namespace causatum
