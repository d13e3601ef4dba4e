#include "causatum/boolfun.hpp"

#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <random>
#include <vector>

using namespace causatum;

namespace {

cause_family fam(int n, std::vector<subset_mask> members) {
  return make_family(n, std::move(members));
}

// Test-side dual oracle: straight set arithmetic over all subsets,
// independent of both production routes.
cause_family dual_oracle(const cause_family& f) {
  std::uint32_t total = std::uint32_t{1} << f.n;
  std::uint32_t everything = total - 1;
  std::vector<subset_mask> out;
  for (std::uint32_t s = 0; s < total; ++s) {
    if (!f.contains(everything ^ s)) out.push_back(s);
  }
  return make_family(f.n, std::move(out));
}

// Every family over n variables (including ones containing the empty set),
// one per bitmask over the 2^n subsets. Only usable for small n.
cause_family nth_family(int n, std::uint32_t id) {
  std::vector<subset_mask> members;
  std::uint32_t total = std::uint32_t{1} << n;
  for (std::uint32_t s = 0; s < total; ++s) {
    if (id & (std::uint32_t{1} << s)) members.push_back(s);
  }
  return make_family(n, std::move(members));
}

cause_family random_family(std::mt19937_64& rng, int n) {
  std::vector<subset_mask> members;
  std::uint32_t total = std::uint32_t{1} << n;
  for (std::uint32_t s = 0; s < total; ++s) {
    if (rng() & 1) members.push_back(s);
  }
  return make_family(n, std::move(members));
}

truth_table random_table(std::mt19937_64& rng, int n) {
  truth_table tt;
  tt.n = n;
  tt.bits.resize(std::size_t{1} << n);
  for (auto& b : tt.bits) b = rng() & 1 ? 1 : 0;
  return tt;
}

// Minimum cover size by brute force: enumerate the maximal valid
// implicants directly from the table, then try every subset.
int min_cover_size_oracle(const truth_table& tt) {
  const std::uint32_t total = std::uint32_t{1} << tt.n;
  const std::uint32_t full = total - 1;

  struct box {
    std::uint32_t care, value, coverage;
  };
  std::vector<box> valid;
  for (std::uint32_t care = 0; care <= full; ++care) {
    for (std::uint32_t value = care;; value = (value - 1) & care) {
      std::uint32_t coverage = 0;
      bool ok = true;
      for (std::uint32_t a = 0; a < total; ++a) {
        if ((a & care) == value) {
          if (!tt.at(a)) {
            ok = false;
            break;
          }
          coverage |= std::uint32_t{1} << a;
        }
      }
      if (ok && coverage != 0) valid.push_back({care, value, coverage});
      if (value == 0) break;
    }
    if (care == full) break;
  }

  std::uint32_t want = 0;
  for (std::uint32_t a = 0; a < total; ++a) {
    if (tt.at(a)) want |= std::uint32_t{1} << a;
  }
  if (want == 0) return 0;

  std::vector<std::uint32_t> maximal;
  for (const box& b : valid) {
    bool contained = false;
    for (const box& other : valid) {
      if (other.coverage != b.coverage &&
          (other.coverage & b.coverage) == b.coverage) {
        contained = true;
        break;
      }
    }
    if (!contained) maximal.push_back(b.coverage);
  }
  std::sort(maximal.begin(), maximal.end());
  maximal.erase(std::unique(maximal.begin(), maximal.end()), maximal.end());

  int best = static_cast<int>(maximal.size());
  for (std::uint32_t pick = 1; pick < (std::uint32_t{1} << maximal.size());
       ++pick) {
    std::uint32_t covered = 0;
    for (std::size_t i = 0; i < maximal.size(); ++i) {
      if (pick & (std::uint32_t{1} << i)) covered |= maximal[i];
    }
    if (covered == want) best = std::min(best, std::popcount(pick));
  }
  return best;
}

}  // namespace

TEST_SUITE("boolfun") {

TEST_CASE("canonical subset order walks combinations") {
  auto subsets = all_subsets_canonical(3, false);
  CHECK(subsets == std::vector<subset_mask>{0b001, 0b010, 0b100, 0b011, 0b101,
                                            0b110, 0b111});
  // Among equal sizes the lower first index wins: {V1,V4} before {V2,V3}.
  CHECK(canonical_subset_less(0b1001, 0b0110));
  CHECK_FALSE(canonical_subset_less(0b0110, 0b1001));
}

TEST_CASE("family DNF uses one full minterm per member") {
  normal_form xor_nf = family_to_dnf(fam(2, {1, 2}));
  REQUIRE(xor_nf.clauses.size() == 2);
  CHECK(xor_nf.clauses[0] == clause{3, 1});  // a & !b
  CHECK(xor_nf.clauses[1] == clause{3, 2});  // !a & b
  CHECK_FALSE(eval_nf(xor_nf, 0b11));
  CHECK(eval_nf(xor_nf, 0b01));
  CHECK(eval_nf(xor_nf, 0b10));

  CHECK(family_to_dnf(fam(2, {})).clauses.empty());
  CHECK_FALSE(eval_nf(family_to_dnf(fam(2, {})), 0));

  normal_form conj = family_to_dnf(fam(2, {3}));
  REQUIRE(conj.clauses.size() == 1);
  CHECK(conj.clauses[0] == clause{3, 3});
}

TEST_CASE("the empty CNF is true, the empty DNF false") {
  normal_form cnf;
  cnf.kind = normal_form::connective::cnf;
  cnf.n = 2;
  CHECK(eval_nf(cnf, 0b00));
  CHECK(eval_nf(cnf, 0b11));
  normal_form dnf;
  dnf.n = 2;
  CHECK_FALSE(eval_nf(dnf, 0b00));
}

TEST_CASE("truth table of the or-family") {
  truth_table tt = to_truth_table(family_to_dnf(fam(2, {1, 2, 3})));
  CHECK(tt.bits == std::vector<char>{0, 1, 1, 1});
}

TEST_CASE("canonical CNF lists one maxterm per falsifying assignment") {
  truth_table always;
  always.n = 2;
  always.bits = {1, 1, 1, 1};
  CHECK(canonical_cnf(always).clauses.empty());

  truth_table either;
  either.n = 2;
  either.bits = {0, 1, 1, 1};
  normal_form cnf = canonical_cnf(either);
  REQUIRE(cnf.clauses.size() == 1);
  CHECK(cnf.clauses[0] == clause{3, 3});  // a | b

  truth_table both;
  both.n = 2;
  both.bits = {0, 0, 0, 1};
  normal_form cnf2 = canonical_cnf(both);
  REQUIRE(cnf2.clauses.size() == 3);
  CHECK(cnf2.clauses[0] == clause{3, 3});  // falsified at 00: a | b
  CHECK(cnf2.clauses[1] == clause{3, 2});  // falsified at 10: !a | b
  CHECK(cnf2.clauses[2] == clause{3, 1});  // falsified at 01: a | !b
  CHECK(to_truth_table(cnf2) == both);
}

TEST_CASE("switching connectives transports clauses verbatim") {
  normal_form cnf;
  cnf.kind = normal_form::connective::cnf;
  cnf.n = 2;
  cnf.clauses = {clause{3, 3}};
  normal_form dnf = switch_connectives(cnf);
  CHECK(dnf.kind == normal_form::connective::dnf);
  CHECK(dnf.clauses == cnf.clauses);
  CHECK(eval_nf(dnf, 0b11));
  CHECK_FALSE(eval_nf(dnf, 0b01));

  normal_form empty_cnf;
  empty_cnf.kind = normal_form::connective::cnf;
  empty_cnf.n = 1;
  CHECK(eval_nf(empty_cnf, 0));
  CHECK_FALSE(eval_nf(switch_connectives(empty_cnf), 0));

  normal_form mixed;
  mixed.kind = normal_form::connective::cnf;
  mixed.n = 2;
  mixed.clauses = {clause{3, 3}, clause{1, 0}};
  CHECK(switch_connectives(mixed).clauses == mixed.clauses);
}

TEST_CASE("dual family on the worked families") {
  // Saturated necessary family of the conjunction model.
  CHECK(dual_family(fam(2, {1, 2, 3})) == fam(2, {3}));
  // Necessary family of the disjunction model.
  CHECK(dual_family(fam(2, {3})) == fam(2, {1, 2, 3}));
  // The dual of the constant-true family is constant false.
  CHECK(dual_family(fam(2, {0, 1, 2, 3})) == fam(2, {}));
  // And the dual of the empty family holds every subset.
  CHECK(dual_family(fam(2, {})) == fam(2, {0, 1, 2, 3}));
}

TEST_CASE("both dual routes match the oracle exhaustively at n <= 3") {
  for (int n = 0; n <= 3; ++n) {
    std::uint32_t family_count = std::uint32_t{1} << (std::uint32_t{1} << n);
    for (std::uint32_t id = 0; id < family_count; ++id) {
      cause_family f = nth_family(n, id);
      cause_family expected = dual_oracle(f);
      CHECK(dual_family(f) == expected);
      CHECK(dual_family_syntactic(f, cnf_mode::canonical) == expected);
      CHECK(dual_family_syntactic(f, cnf_mode::quine_mccluskey) == expected);
      CHECK(dual_family(expected) == f);  // involution
    }
  }
}

TEST_CASE("dual routes agree on random families up to n = 6") {
  std::mt19937_64 rng(11);
  for (int n = 4; n <= 6; ++n) {
    for (int trial = 0; trial < 40; ++trial) {
      cause_family f = random_family(rng, n);
      cause_family expected = dual_oracle(f);
      CHECK(dual_family_checked(f, cnf_mode::canonical) == expected);
      CHECK(dual_family_checked(f, cnf_mode::quine_mccluskey) == expected);
      CHECK(dual_family(expected) == f);
    }
  }
}

TEST_CASE("upward saturation adds exactly the supersets") {
  CHECK(saturate_upward(fam(2, {1, 2})) == fam(2, {1, 2, 3}));
  CHECK(saturate_upward(fam(2, {})) == fam(2, {}));
  CHECK(saturate_upward(fam(2, {3})) == fam(2, {3}));
}

TEST_CASE("antichain minimization strips strict supersets") {
  CHECK(minimize_family(fam(2, {1, 2, 3})) == fam(2, {1, 2}));
  CHECK(minimize_family(fam(2, {3})) == fam(2, {3}));
  // {{A},{A,B},{B,C},{A,B,C}} -> {{A},{B,C}}
  CHECK(minimize_family(fam(3, {0b001, 0b011, 0b110, 0b111})) ==
        fam(3, {0b001, 0b110}));
}

TEST_CASE("saturation and minimization algebra on every small family") {
  for (int n = 0; n <= 3; ++n) {
    std::uint32_t family_count = std::uint32_t{1} << (std::uint32_t{1} << n);
    for (std::uint32_t id = 0; id < family_count; ++id) {
      cause_family f = nth_family(n, id);
      cause_family closed = saturate_upward(f);
      CHECK(saturate_upward(closed) == closed);
      for (subset_mask m : f.members) CHECK(closed.contains(m));
      // Smallest superset-closed family: every member sits above some seed.
      for (subset_mask m : closed.members) {
        bool grounded = false;
        for (subset_mask seed : f.members) {
          if ((seed & m) == seed) grounded = true;
        }
        CHECK(grounded);
      }
      CHECK(minimize_family(closed) == minimize_family(f));
      CHECK(is_antichain(minimize_family(f)));
    }
  }
}

TEST_CASE("Quine-McCluskey absorbs adjacent minterms") {
  truth_table tt;
  tt.n = 2;
  tt.bits = {0, 1, 0, 1};  // a&!b, a&b
  normal_form dnf = quine_mccluskey(tt);
  REQUIRE(dnf.clauses.size() == 1);
  CHECK(dnf.clauses[0] == clause{1, 1});  // just "a"
}

TEST_CASE("Quine-McCluskey on the constants") {
  truth_table none;
  none.n = 3;
  none.bits.assign(8, 0);
  CHECK(quine_mccluskey(none).clauses.empty());

  truth_table all;
  all.n = 3;
  all.bits.assign(8, 1);
  normal_form top = quine_mccluskey(all);
  REQUIRE(top.clauses.size() == 1);
  CHECK(top.clauses[0] == clause{0, 0});
  CHECK(to_truth_table(top) == all);
}

TEST_CASE("the cyclic six-minterm chart needs three implicants") {
  truth_table tt;
  tt.n = 3;
  tt.bits.assign(8, 0);
  for (std::uint32_t m : {0u, 1u, 2u, 5u, 6u, 7u}) tt.bits[m] = 1;
  normal_form dnf = quine_mccluskey(tt);
  CHECK(to_truth_table(dnf) == tt);
  CHECK(static_cast<int>(dnf.clauses.size()) == min_cover_size_oracle(tt));
  CHECK(dnf.clauses.size() == 3);
}

TEST_CASE("Quine-McCluskey is sound on random tables") {
  std::mt19937_64 rng(5);
  for (int n = 0; n <= 4; ++n) {
    for (int trial = 0; trial < 60; ++trial) {
      truth_table tt = random_table(rng, n);
      CHECK(to_truth_table(quine_mccluskey(tt)) == tt);
    }
  }
  for (int trial = 0; trial < 30; ++trial) {
    truth_table tt = random_table(rng, 10);
    CHECK(to_truth_table(quine_mccluskey(tt)) == tt);
  }
}

TEST_CASE("Quine-McCluskey cover size is optimal for n <= 2 exhaustively") {
  for (int n = 0; n <= 2; ++n) {
    std::uint32_t total = std::uint32_t{1} << (std::uint32_t{1} << n);
    for (std::uint32_t bits = 0; bits < total; ++bits) {
      truth_table tt;
      tt.n = n;
      tt.bits.resize(std::size_t{1} << n);
      for (std::size_t i = 0; i < tt.bits.size(); ++i) {
        tt.bits[i] = (bits >> i) & 1 ? 1 : 0;
      }
      normal_form dnf = quine_mccluskey(tt);
      CHECK(to_truth_table(dnf) == tt);
      CHECK(static_cast<int>(dnf.clauses.size()) == min_cover_size_oracle(tt));
    }
  }
}

TEST_CASE("Quine-McCluskey cover size matches the oracle on random n = 3") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 120; ++trial) {
    truth_table tt = random_table(rng, 3);
    normal_form dnf = quine_mccluskey(tt);
    CHECK(to_truth_table(dnf) == tt);
    CHECK(static_cast<int>(dnf.clauses.size()) == min_cover_size_oracle(tt));
  }
}

TEST_CASE("minimal CNF is equivalent to its table") {
  std::mt19937_64 rng(23);
  for (int n = 0; n <= 5; ++n) {
    for (int trial = 0; trial < 25; ++trial) {
      truth_table tt = random_table(rng, n);
      normal_form cnf = minimal_cnf(tt);
      CHECK(cnf.kind == normal_form::connective::cnf);
      CHECK(to_truth_table(cnf) == tt);
    }
  }
}

TEST_CASE("minimal sufficient from minimal necessary on the worked pairs") {
  pipeline_result conj = minimal_sufficient_from_minimal_necessary(fam(2, {1, 2}));
  CHECK(conj.family == fam(2, {3}));
  CHECK_FALSE(conj.dropped_empty_set);

  pipeline_result disj = minimal_sufficient_from_minimal_necessary(fam(2, {3}));
  CHECK(disj.family == fam(2, {1, 2}));
  CHECK_FALSE(disj.dropped_empty_set);

  // An empty necessary family dualizes to everything; its minimum is the
  // empty set, which is dropped with a diagnostic.
  pipeline_result degenerate =
      minimal_sufficient_from_minimal_necessary(fam(2, {}));
  CHECK(degenerate.family == fam(2, {}));
  CHECK(degenerate.dropped_empty_set);

  CHECK_THROWS_AS(minimal_sufficient_from_minimal_necessary(fam(2, {1, 3})),
                  causal_error);
}

TEST_CASE("the pipeline agrees across CNF modes") {
  std::mt19937_64 rng(31);
  for (int n = 1; n <= 5; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      cause_family antichain = minimize_family(random_family(rng, n));
      pipeline_result canonical = minimal_sufficient_from_minimal_necessary(
          antichain, cnf_mode::canonical);
      pipeline_result reduced = minimal_sufficient_from_minimal_necessary(
          antichain, cnf_mode::quine_mccluskey);
      CHECK(canonical.family == reduced.family);
      CHECK(canonical.dropped_empty_set == reduced.dropped_empty_set);
    }
  }
}

}  // TEST_SUITE
