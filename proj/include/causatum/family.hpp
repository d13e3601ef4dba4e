#pragma once

// Cause families: sets of subsets of the restricted variable ordering,
// encoded as bitmasks (bit i set <=> the i-th restricted variable is in the
// subset).

#include <cstdint>
#include <vector>

namespace causatum {

using subset_mask = std::uint32_t;

inline constexpr int max_restriction_size = 16;

// The n <= 16 guard, optionally lowered (never raised) by CAUSATUM_MAX_N.
int max_family_size();

// Canonical subset order: fewer elements first; among equal sizes, the
// subset containing the lowest differing variable index first. Equivalent
// to lexicographic order on sorted index tuples.
bool canonical_subset_less(subset_mask a, subset_mask b);

// A set of subsets of the restricted variables. Members are kept in
// canonical order without duplicates. The empty set (mask 0) is never
// produced by cause enumeration but can appear as a duality artefact.
struct cause_family {
  int n = 0;
  std::vector<subset_mask> members;

  bool contains(subset_mask m) const;

  bool operator==(const cause_family&) const = default;
};

// Sorts and deduplicates into canonical form.
cause_family make_family(int n, std::vector<subset_mask> members);

// Every subset of n variables in canonical order, 2^n masks (or 2^n - 1
// without the empty set).
std::vector<subset_mask> all_subsets_canonical(int n, bool include_empty);

// Smallest superset-closed family containing f.
cause_family saturate_upward(const cause_family& f);

// Antichain reduction: keeps X unless some member Y of f satisfies Y ⊊ X.
cause_family minimize_family(const cause_family& f);

bool is_antichain(const cause_family& f);

struct stripped_family {
  cause_family family;
  bool dropped_empty_set = false;
};

// Removes the empty set if present and reports whether it was dropped.
stripped_family strip_empty_member(const cause_family& f);

}  // namespace causatum
