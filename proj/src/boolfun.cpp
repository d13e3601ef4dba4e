#include "causatum/boolfun.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace causatum {

namespace {

std::uint32_t full_mask(int n) {
  return n == 0 ? 0u : (std::uint32_t{1} << n) - 1u;
}

// Total order on clauses used for canonical output and tie-breaking.
bool clause_less(const clause& a, const clause& b) {
  if (a.vars != b.vars) return a.vars < b.vars;
  return a.positive < b.positive;
}

}  // namespace

normal_form family_to_dnf(const cause_family& f) {
  normal_form nf;
  nf.kind = normal_form::connective::dnf;
  nf.n = f.n;
  nf.clauses.reserve(f.members.size());
  for (subset_mask m : f.members) {
    nf.clauses.push_back(clause{full_mask(f.n), m});
  }
  return nf;
}

bool eval_nf(const normal_form& nf, std::uint32_t assignment) {
  if (nf.kind == normal_form::connective::dnf) {
    for (const clause& c : nf.clauses) {
      if ((assignment & c.vars) == c.positive) return true;
    }
    return false;
  }
  for (const clause& c : nf.clauses) {
    // A disjunctive clause is false exactly when every literal disagrees.
    if ((assignment & c.vars) == (c.vars ^ c.positive)) return false;
  }
  return true;
}

truth_table to_truth_table_serial(const normal_form& nf) {
  truth_table tt;
  tt.n = nf.n;
  std::uint32_t total = std::uint32_t{1} << nf.n;
  tt.bits.resize(total);
  for (std::uint32_t a = 0; a < total; ++a) {
    tt.bits[a] = eval_nf(nf, a) ? 1 : 0;
  }
  return tt;
}

truth_table to_truth_table(const normal_form& nf) {
  truth_table tt;
  tt.n = nf.n;
  std::uint32_t total = std::uint32_t{1} << nf.n;
  tt.bits.resize(total);
  std::int64_t count = total;
#pragma omp parallel for schedule(static) if (nf.n >= 10)
  for (std::int64_t a = 0; a < count; ++a) {
    tt.bits[static_cast<std::size_t>(a)] =
        eval_nf(nf, static_cast<std::uint32_t>(a)) ? 1 : 0;
  }
  return tt;
}

normal_form canonical_cnf(const truth_table& tt) {
  normal_form nf;
  nf.kind = normal_form::connective::cnf;
  nf.n = tt.n;
  std::uint32_t total = std::uint32_t{1} << tt.n;
  for (std::uint32_t a = 0; a < total; ++a) {
    if (!tt.at(a)) {
      // Maxterm falsified only at a: polarity is the negated assignment bit.
      nf.clauses.push_back(clause{full_mask(tt.n), ~a & full_mask(tt.n)});
    }
  }
  return nf;
}

normal_form switch_connectives(normal_form nf) {
  nf.kind = nf.kind == normal_form::connective::dnf
                ? normal_form::connective::cnf
                : normal_form::connective::dnf;
  return nf;
}

// ---------------------------------------------------------------------------
// Quine-McCluskey

namespace {

// Covers assignment a iff (a & care) == value; value is a subset of care.
struct implicant {
  std::uint32_t care = 0;
  std::uint32_t value = 0;
};

std::uint64_t implicant_key(const implicant& i) {
  return (std::uint64_t{i.care} << 32) | i.value;
}

bool implicant_less(const implicant& a, const implicant& b) {
  return implicant_key(a) < implicant_key(b);
}

bool implicant_eq(const implicant& a, const implicant& b) {
  return a.care == b.care && a.value == b.value;
}

void sort_unique(std::vector<implicant>& v) {
  std::sort(v.begin(), v.end(), implicant_less);
  v.erase(std::unique(v.begin(), v.end(), implicant_eq), v.end());
}

// One merging round: pairs from adjacent popcount groups differing in a
// single cared bit combine into an implicant with that bit freed. Returns
// the merged implicants and flags the ones that took part.
void merge_round(const std::vector<implicant>& current,
                 std::vector<implicant>& merged, std::vector<char>& used,
                 bool parallel) {
  // Group indices by popcount of the value.
  std::vector<std::vector<int>> groups(33);
  for (std::size_t i = 0; i < current.size(); ++i) {
    groups[static_cast<std::size_t>(std::popcount(current[i].value))].push_back(
        static_cast<int>(i));
  }

  int max_threads = 1;
#ifdef _OPENMP
  if (parallel) max_threads = omp_get_max_threads();
#endif
  std::vector<std::vector<implicant>> merged_parts(
      static_cast<std::size_t>(max_threads));
  std::vector<std::vector<char>> used_parts(
      static_cast<std::size_t>(max_threads),
      std::vector<char>(current.size(), 0));

#pragma omp parallel num_threads(max_threads) if (parallel)
  {
    int tid = 0;
#ifdef _OPENMP
    tid = omp_get_thread_num();
#endif
    auto& my_merged = merged_parts[static_cast<std::size_t>(tid)];
    auto& my_used = used_parts[static_cast<std::size_t>(tid)];
    for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
      const auto& lo = groups[g];
      const auto& hi = groups[g + 1];
      if (lo.empty() || hi.empty()) continue;
      std::int64_t lo_count = static_cast<std::int64_t>(lo.size());
#pragma omp for schedule(static) nowait
      for (std::int64_t li = 0; li < lo_count; ++li) {
        const implicant& a = current[static_cast<std::size_t>(lo[li])];
        for (int hj : hi) {
          const implicant& b = current[static_cast<std::size_t>(hj)];
          if (a.care != b.care) continue;
          std::uint32_t diff = a.value ^ b.value;
          if (std::popcount(diff) != 1) continue;
          my_merged.push_back(
              implicant{a.care & ~diff, a.value & ~diff});
          my_used[static_cast<std::size_t>(lo[li])] = 1;
          my_used[static_cast<std::size_t>(hj)] = 1;
        }
      }
    }
  }

  merged.clear();
  used.assign(current.size(), 0);
  for (int t = 0; t < max_threads; ++t) {
    auto& part = merged_parts[static_cast<std::size_t>(t)];
    merged.insert(merged.end(), part.begin(), part.end());
    for (std::size_t i = 0; i < current.size(); ++i) {
      used[i] |= used_parts[static_cast<std::size_t>(t)][i];
    }
  }
  sort_unique(merged);
}

std::vector<implicant> prime_implicants(const std::vector<std::uint32_t>& minterms,
                                        int n, bool parallel) {
  std::vector<implicant> current;
  current.reserve(minterms.size());
  for (std::uint32_t m : minterms) {
    current.push_back(implicant{full_mask(n), m});
  }
  sort_unique(current);

  std::vector<implicant> primes;
  std::vector<implicant> merged;
  std::vector<char> used;
  while (!current.empty()) {
    merge_round(current, merged, used, parallel);
    for (std::size_t i = 0; i < current.size(); ++i) {
      if (!used[i]) primes.push_back(current[i]);
    }
    current.swap(merged);
  }
  sort_unique(primes);
  return primes;
}

// Fixed-width bitset over chart rows or columns.
using prime_set = std::vector<std::uint64_t>;

prime_set empty_set(std::size_t primes) {
  return prime_set((primes + 63) / 64, 0);
}

void set_bit(prime_set& s, int i) {
  s[static_cast<std::size_t>(i) / 64] |= std::uint64_t{1} << (i % 64);
}

bool subset_of(const prime_set& a, const prime_set& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] & ~b[i]) return false;
  }
  return true;
}

int set_size(const prime_set& s) {
  int total = 0;
  for (std::uint64_t w : s) total += std::popcount(w);
  return total;
}

std::vector<clause> cover_clauses(const std::vector<int>& cover,
                                  const std::vector<implicant>& primes) {
  std::vector<clause> out;
  out.reserve(cover.size());
  for (int pi : cover) {
    out.push_back(clause{primes[static_cast<std::size_t>(pi)].care,
                         primes[static_cast<std::size_t>(pi)].value});
  }
  std::sort(out.begin(), out.end(), clause_less);
  return out;
}

int total_literals(const std::vector<clause>& clauses) {
  int total = 0;
  for (const clause& c : clauses) total += std::popcount(c.vars);
  return total;
}

// Exact branch-and-bound cover of the cyclic residue. Pruning is strict
// (never cuts an equal-size branch), so every minimum-size cover reaches
// the leaf comparison and the full (fewest clauses, fewest literals,
// lexicographic) tie-break stays exact.
struct residue_solver {
  const std::vector<implicant>& primes;
  const std::vector<int>& forced;
  std::vector<std::vector<int>> position_covers;  // residue position -> prime ids
  std::vector<std::vector<int>> prime_positions;  // prime id -> residue positions

  std::vector<char> covered;
  int uncovered = 0;
  std::vector<int> picked;

  bool have_best = false;
  std::size_t best_size = 0;
  int best_literals = 0;
  std::vector<clause> best_clauses;

  residue_solver(const std::vector<implicant>& all_primes,
                 const std::vector<int>& chosen)
      : primes(all_primes), forced(chosen) {}

  int lower_bound() const {
    // Greedy independent columns: no two share a row, so each costs one.
    std::vector<char> blocked(position_covers.size(), 0);
    int bound = 0;
    for (std::size_t pos = 0; pos < position_covers.size(); ++pos) {
      if (covered[pos] || blocked[pos]) continue;
      ++bound;
      for (int pi : position_covers[pos]) {
        for (int other : prime_positions[static_cast<std::size_t>(pi)]) {
          blocked[static_cast<std::size_t>(other)] = 1;
        }
      }
    }
    return bound;
  }

  void complete() {
    std::vector<int> cover = forced;
    cover.insert(cover.end(), picked.begin(), picked.end());
    std::sort(cover.begin(), cover.end());
    cover.erase(std::unique(cover.begin(), cover.end()), cover.end());
    std::vector<clause> clauses = cover_clauses(cover, primes);
    int literals = total_literals(clauses);
    if (!have_best || clauses.size() < best_size ||
        (clauses.size() == best_size &&
         (literals < best_literals ||
          (literals == best_literals &&
           std::lexicographical_compare(clauses.begin(), clauses.end(),
                                        best_clauses.begin(),
                                        best_clauses.end(), clause_less))))) {
      have_best = true;
      best_size = clauses.size();
      best_literals = literals;
      best_clauses = std::move(clauses);
    }
  }

  void search() {
    if (uncovered == 0) {
      complete();
      return;
    }
    if (have_best &&
        forced.size() + picked.size() + static_cast<std::size_t>(lower_bound()) >
            best_size) {
      return;
    }
    // Branch on the tightest uncovered column; one of its rows must be in
    // every cover, so trying each is complete.
    std::size_t branch = position_covers.size();
    for (std::size_t pos = 0; pos < position_covers.size(); ++pos) {
      if (covered[pos]) continue;
      if (branch == position_covers.size() ||
          position_covers[pos].size() < position_covers[branch].size()) {
        branch = pos;
      }
    }
    for (int pi : position_covers[branch]) {
      std::vector<std::size_t> newly;
      for (int pos : prime_positions[static_cast<std::size_t>(pi)]) {
        auto upos = static_cast<std::size_t>(pos);
        if (!covered[upos]) {
          covered[upos] = 1;
          --uncovered;
          newly.push_back(upos);
        }
      }
      picked.push_back(pi);
      search();
      picked.pop_back();
      for (std::size_t pos : newly) {
        covered[pos] = 0;
        ++uncovered;
      }
    }
  }
};

// Exact minimum cover via the classic chart reduction: forced (essential)
// implicants, dominated columns, and cost-aware dominated rows shrink the
// chart until branch and bound handles the cyclic residue. Row dominance
// only removes an implicant when a surviving one covers at least as much at
// no higher literal cost, so a (fewest clauses, fewest literals) optimum
// always survives for the final tie-break.
std::vector<clause> select_cover(const std::vector<std::uint32_t>& minterms,
                                 const std::vector<implicant>& primes) {
  const std::size_t nm = minterms.size();
  const std::size_t np = primes.size();
  std::vector<std::vector<int>> covering(nm);
  for (std::size_t mi = 0; mi < nm; ++mi) {
    for (std::size_t pi = 0; pi < np; ++pi) {
      if ((minterms[mi] & primes[pi].care) == primes[pi].value) {
        covering[mi].push_back(static_cast<int>(pi));
      }
    }
    assert(!covering[mi].empty());
  }
  std::vector<std::vector<int>> covered_minterms(np);
  for (std::size_t mi = 0; mi < nm; ++mi) {
    for (int pi : covering[mi]) {
      covered_minterms[static_cast<std::size_t>(pi)].push_back(
          static_cast<int>(mi));
    }
  }

  std::vector<char> minterm_alive(nm, 1);
  std::vector<char> prime_active(np, 1);
  std::vector<int> chosen;

  auto select_prime = [&](int pi) {
    chosen.push_back(pi);
    prime_active[static_cast<std::size_t>(pi)] = 0;
    for (int mi : covered_minterms[static_cast<std::size_t>(pi)]) {
      minterm_alive[static_cast<std::size_t>(mi)] = 0;
    }
  };

  auto alive_coverage = [&](int pi) {
    prime_set s = empty_set(nm);
    for (int mi : covered_minterms[static_cast<std::size_t>(pi)]) {
      if (minterm_alive[static_cast<std::size_t>(mi)]) set_bit(s, mi);
    }
    return s;
  };

  bool changed = true;
  while (changed) {
    changed = false;

    // Essential step: an alive minterm with a single active cover forces
    // that implicant into every solution.
    for (std::size_t mi = 0; mi < nm; ++mi) {
      if (!minterm_alive[mi]) continue;
      int only = -1;
      int count = 0;
      for (int pi : covering[mi]) {
        if (prime_active[static_cast<std::size_t>(pi)]) {
          only = pi;
          if (++count > 1) break;
        }
      }
      if (count == 1) {
        select_prime(only);
        changed = true;
      }
    }
    if (changed) continue;

    // Column dominance, one bulk sweep against a snapshot of the chart: a
    // minterm whose active covers contain another minterm's active covers
    // adds no constraint. Minimal columns are never marked, so each
    // containment chain keeps a representative.
    std::vector<std::size_t> alive;
    for (std::size_t mi = 0; mi < nm; ++mi) {
      if (minterm_alive[mi]) alive.push_back(mi);
    }
    std::vector<std::vector<int>> active_covers(alive.size());
    for (std::size_t i = 0; i < alive.size(); ++i) {
      for (int pi : covering[alive[i]]) {
        if (prime_active[static_cast<std::size_t>(pi)]) {
          active_covers[i].push_back(pi);
        }
      }
    }
    for (std::size_t i = 0; i < alive.size(); ++i) {
      for (std::size_t j = 0; j < alive.size(); ++j) {
        if (i == j) continue;
        const auto& mine = active_covers[i];
        const auto& other = active_covers[j];
        if (other.size() > mine.size()) continue;
        if (other.size() == mine.size() && j > i) continue;
        if (std::includes(mine.begin(), mine.end(), other.begin(),
                          other.end())) {
          minterm_alive[alive[i]] = 0;
          changed = true;
          break;
        }
      }
    }
    if (changed) continue;

    // Row dominance, also one bulk sweep: drop an implicant when a
    // snapshot survivor covers everything it still covers at no higher
    // literal cost. The strictly-better preorder plus the key tie keeps a
    // representative of every chain, so a (fewest clauses, fewest
    // literals) optimum is still reachable.
    std::vector<prime_set> coverage(np);
    std::vector<std::size_t> rows;
    for (std::size_t pi = 0; pi < np; ++pi) {
      if (!prime_active[pi]) continue;
      coverage[pi] = alive_coverage(static_cast<int>(pi));
      if (set_size(coverage[pi]) == 0) {
        prime_active[pi] = 0;  // irrelevant row
      } else {
        rows.push_back(pi);
      }
    }
    std::vector<char> dropped(np, 0);
    for (std::size_t p : rows) {
      for (std::size_t q : rows) {
        if (p == q) continue;
        if (std::popcount(primes[q].care) > std::popcount(primes[p].care)) {
          continue;
        }
        if (!subset_of(coverage[p], coverage[q])) continue;
        bool same_cost = std::popcount(primes[q].care) ==
                         std::popcount(primes[p].care);
        bool same_coverage = coverage[p] == coverage[q];
        if (same_cost && same_coverage &&
            implicant_key(primes[q]) > implicant_key(primes[p])) {
          continue;  // deterministic survivor among exact ties
        }
        dropped[p] = 1;
        changed = true;
        break;
      }
    }
    for (std::size_t pi = 0; pi < np; ++pi) {
      if (dropped[pi]) prime_active[pi] = 0;
    }
  }

  // Petrick's product over the (usually tiny) cyclic residue.
  std::vector<prime_set> terms{empty_set(np)};
  for (std::size_t mi = 0; mi < nm; ++mi) {
    if (!minterm_alive[mi]) continue;
    std::vector<prime_set> expanded;
    for (const prime_set& t : terms) {
      for (int pi : covering[mi]) {
        if (!prime_active[static_cast<std::size_t>(pi)]) continue;
        prime_set grown = t;
        set_bit(grown, pi);
        expanded.push_back(std::move(grown));
      }
    }
    absorb(expanded);
    terms.swap(expanded);
    assert(!terms.empty());
  }

  std::vector<std::vector<int>> covers;
  covers.reserve(terms.size());
  for (const prime_set& t : terms) {
    std::vector<int> cover = chosen;
    for (std::size_t pi = 0; pi < np; ++pi) {
      if (t[pi / 64] & (std::uint64_t{1} << (pi % 64))) {
        cover.push_back(static_cast<int>(pi));
      }
    }
    std::sort(cover.begin(), cover.end());
    cover.erase(std::unique(cover.begin(), cover.end()), cover.end());
    covers.push_back(std::move(cover));
  }
  return covers;
}

std::vector<clause> cover_clauses(const std::vector<int>& cover,
                                  const std::vector<implicant>& primes) {
  std::vector<clause> out;
  out.reserve(cover.size());
  for (int pi : cover) {
    out.push_back(clause{primes[static_cast<std::size_t>(pi)].care,
                         primes[static_cast<std::size_t>(pi)].value});
  }
  std::sort(out.begin(), out.end(), clause_less);
  return out;
}

int total_literals(const std::vector<clause>& clauses) {
  int total = 0;
  for (const clause& c : clauses) total += std::popcount(c.vars);
  return total;
}

normal_form quine_mccluskey_impl(const truth_table& tt, bool parallel) {
  normal_form nf;
  nf.kind = normal_form::connective::dnf;
  nf.n = tt.n;

  std::vector<std::uint32_t> minterms;
  std::uint32_t total = std::uint32_t{1} << tt.n;
  for (std::uint32_t a = 0; a < total; ++a) {
    if (tt.at(a)) minterms.push_back(a);
  }
  if (minterms.empty()) return nf;
  if (minterms.size() == total) {
    nf.clauses.push_back(clause{0, 0});  // empty conjunction: constant true
    return nf;
  }

  std::vector<implicant> primes = prime_implicants(minterms, tt.n, parallel);
  std::vector<std::vector<int>> covers = candidate_covers(minterms, primes);
  assert(!covers.empty());

  std::vector<clause> best;
  bool have_best = false;
  int best_literals = 0;
  for (const auto& cover : covers) {
    std::vector<clause> clauses = cover_clauses(cover, primes);
    int literals = total_literals(clauses);
    if (!have_best || clauses.size() < best.size() ||
        (clauses.size() == best.size() &&
         (literals < best_literals ||
          (literals == best_literals &&
           std::lexicographical_compare(clauses.begin(), clauses.end(),
                                        best.begin(), best.end(),
                                        clause_less))))) {
      best = std::move(clauses);
      best_literals = literals;
      have_best = true;
    }
  }
  nf.clauses = std::move(best);
  return nf;
}

}  // namespace

normal_form quine_mccluskey(const truth_table& tt) {
  return quine_mccluskey_impl(tt, true);
}

normal_form quine_mccluskey_serial(const truth_table& tt) {
  return quine_mccluskey_impl(tt, false);
}

normal_form minimal_cnf(const truth_table& tt) {
  truth_table complement = tt;
  for (char& b : complement.bits) b = b ? 0 : 1;
  normal_form dnf = quine_mccluskey(complement);
  normal_form cnf;
  cnf.kind = normal_form::connective::cnf;
  cnf.n = tt.n;
  cnf.clauses.reserve(dnf.clauses.size());
  for (const clause& c : dnf.clauses) {
    cnf.clauses.push_back(clause{c.vars, c.vars ^ c.positive});
  }
  return cnf;
}

// ---------------------------------------------------------------------------
// Family duality

cause_family dual_family(const cause_family& f) {
  std::uint32_t total = std::uint32_t{1} << f.n;
  std::vector<char> member(total, 0);
  for (subset_mask m : f.members) member[m] = 1;
  std::vector<subset_mask> out;
  std::uint32_t complement_base = full_mask(f.n);
  for (std::uint32_t s = 0; s < total; ++s) {
    if (!member[complement_base ^ s]) out.push_back(s);
  }
  return make_family(f.n, std::move(out));
}

cause_family dual_family_syntactic(const cause_family& f, cnf_mode mode) {
  normal_form dnf = family_to_dnf(f);
  truth_table tt = to_truth_table(dnf);
  normal_form cnf =
      mode == cnf_mode::canonical ? canonical_cnf(tt) : minimal_cnf(tt);
  normal_form switched = switch_connectives(std::move(cnf));
  truth_table dual_tt = to_truth_table(switched);
  std::vector<subset_mask> out;
  std::uint32_t total = std::uint32_t{1} << f.n;
  for (std::uint32_t s = 0; s < total; ++s) {
    if (dual_tt.at(s)) out.push_back(s);
  }
  return make_family(f.n, std::move(out));
}

cause_family dual_family_checked(const cause_family& f, cnf_mode mode) {
  cause_family pointwise = dual_family(f);
  cause_family syntactic = dual_family_syntactic(f, mode);
  if (!(pointwise == syntactic)) {
    throw causal_error({diag_code::bad_input,
                        "internal: dual-family routes disagree", {}});
  }
  return pointwise;
}

pipeline_result minimal_sufficient_from_minimal_necessary(
    const cause_family& minimal_necessary, cnf_mode mode) {
  if (!is_antichain(minimal_necessary)) {
    throw causal_error({diag_code::not_antichain,
                        "input family is not an antichain", {}});
  }
  cause_family saturated = saturate_upward(minimal_necessary);
  cause_family dual = dual_family_checked(saturated, mode);
  cause_family minimal = minimize_family(dual);
  stripped_family stripped = strip_empty_member(minimal);
  return {stripped.family, stripped.dropped_empty_set};
}

}  // namespace causatum
