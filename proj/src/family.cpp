#include "causatum/family.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>

namespace causatum {

int max_family_size() {
  int limit = max_restriction_size;
  if (const char* env = std::getenv("CAUSATUM_MAX_N")) {
    int requested = std::atoi(env);
    if (requested >= 0 && requested < limit) limit = requested;
  }
  return limit;
}

bool canonical_subset_less(subset_mask a, subset_mask b) {
  if (a == b) return false;
  int pa = std::popcount(a);
  int pb = std::popcount(b);
  if (pa != pb) return pa < pb;
  subset_mask diff = a ^ b;
  subset_mask lowest = diff & (~diff + 1u);
  return (a & lowest) != 0;
}

bool cause_family::contains(subset_mask m) const {
  return std::find(members.begin(), members.end(), m) != members.end();
}

cause_family make_family(int n, std::vector<subset_mask> members) {
  std::sort(members.begin(), members.end(), canonical_subset_less);
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return cause_family{n, std::move(members)};
}

std::vector<subset_mask> all_subsets_canonical(int n, bool include_empty) {
  std::vector<subset_mask> out;
  subset_mask total = subset_mask{1} << n;
  out.reserve(total);
  for (subset_mask m = include_empty ? 0 : 1; m < total; ++m) out.push_back(m);
  std::sort(out.begin(), out.end(), canonical_subset_less);
  return out;
}

cause_family saturate_upward(const cause_family& f) {
  subset_mask total = subset_mask{1} << f.n;
  std::vector<subset_mask> out;
  for (subset_mask s = 0; s < total; ++s) {
    for (subset_mask m : f.members) {
      if ((m & s) == m) {
        out.push_back(s);
        break;
      }
    }
  }
  return make_family(f.n, std::move(out));
}

cause_family minimize_family(const cause_family& f) {
  std::vector<subset_mask> out;
  for (subset_mask x : f.members) {
    bool has_strict_subset = false;
    for (subset_mask y : f.members) {
      if (y != x && (y & x) == y) {
        has_strict_subset = true;
        break;
      }
    }
    if (!has_strict_subset) out.push_back(x);
  }
  return make_family(f.n, std::move(out));
}

bool is_antichain(const cause_family& f) {
  for (subset_mask x : f.members) {
    for (subset_mask y : f.members) {
      if (y != x && (y & x) == y) return false;
    }
  }
  return true;
}

stripped_family strip_empty_member(const cause_family& f) {
  stripped_family out;
  out.family.n = f.n;
  for (subset_mask m : f.members) {
    if (m == 0) {
      out.dropped_empty_set = true;
    } else {
      out.family.members.push_back(m);
    }
  }
  return out;
}

}  // namespace causatum
