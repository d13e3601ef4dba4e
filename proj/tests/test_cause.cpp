#include "causatum/cause.hpp"

#include "causatum/boolfun.hpp"
#include "causatum/dsl.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

using namespace causatum;
using namespace causatum::testing;

namespace {

intervention single(const model& m, const std::string& name, int value) {
  return intervention{{{m.index_of(name), value}}};
}

// Test-side oracle: NC2 by direct search over the settings of X, written
// against model-core satisfaction only.
bool necessary_oracle(const cause_query& q, const std::vector<int>& vars) {
  if (!satisfies(q.sit.m, q.sit.u, {{}, q.phi})) return false;
  expr negated = expr::negation(q.phi);
  std::vector<int> digits(vars.size(), 0);
  while (true) {
    intervention iv;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      iv.settings.emplace_back(
          vars[i],
          q.sit.m.vars[static_cast<std::size_t>(vars[i])].rng.values
              [static_cast<std::size_t>(digits[i])]);
    }
    if (satisfies(q.sit.m, q.sit.u, {iv, negated})) return true;
    std::size_t pos = vars.size();
    while (pos > 0) {
      --pos;
      auto size = q.sit.m.vars[static_cast<std::size_t>(vars[pos])]
                      .rng.values.size();
      if (static_cast<std::size_t>(++digits[pos]) < size) break;
      digits[pos] = 0;
      if (pos == 0) return false;
    }
    if (vars.empty()) return false;
  }
}

bool sufficient_oracle(const cause_query& q, const std::vector<int>& vars) {
  if (!satisfies(q.sit.m, q.sit.u, {{}, q.phi})) return false;
  std::vector<int> complement;
  for (int v : q.v_res) {
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) {
      complement.push_back(v);
    }
  }
  std::vector<int> digits(complement.size(), 0);
  while (true) {
    intervention iv;
    for (std::size_t i = 0; i < complement.size(); ++i) {
      iv.settings.emplace_back(
          complement[i],
          q.sit.m.vars[static_cast<std::size_t>(complement[i])].rng.values
              [static_cast<std::size_t>(digits[i])]);
    }
    if (!satisfies(q.sit.m, q.sit.u, {iv, q.phi})) return false;
    std::size_t pos = complement.size();
    while (pos > 0) {
      --pos;
      auto size = q.sit.m.vars[static_cast<std::size_t>(complement[pos])]
                      .rng.values.size();
      if (static_cast<std::size_t>(++digits[pos]) < size) break;
      digits[pos] = 0;
      if (pos == 0) return true;
    }
    if (complement.empty()) return true;
  }
}

cause_family family_oracle(const cause_query& q, bool sufficient) {
  std::vector<subset_mask> members;
  for (subset_mask mask :
       all_subsets_canonical(static_cast<int>(q.v_res.size()), false)) {
    std::vector<int> vars = mask_to_vars(mask, q.v_res);
    bool holds = sufficient ? sufficient_oracle(q, vars)
                            : necessary_oracle(q, vars);
    if (holds) members.push_back(mask);
  }
  return make_family(static_cast<int>(q.v_res.size()), std::move(members));
}

}  // namespace

TEST_SUITE("cause") {

TEST_CASE("AC1 asks whether phi holds in the actual world") {
  cause_query wet = wet_ground_query(1);
  CHECK(check_ac1(wet, vars_of(wet.sit.m, {"W"})));

  cause_query broken = wet_ground_query(1);
  broken.phi = event_eq(broken.sit.m, "F", 0);
  CHECK_FALSE(check_ac1(broken, vars_of(broken.sit.m, {"W"})));

  cause_query cruel = cruel_neighbour_query(1);
  CHECK(check_ac1(cruel, vars_of(cruel.sit.m, {"WR"})));

  CHECK_THROWS_AS(check_ac1(wet, {}), causal_error);
}

TEST_CASE("the wet ground is a necessary cause of the fall") {
  cause_query q = wet_ground_query(1);
  cause_verdict verdict = is_necessary_cause(q, vars_of(q.sit.m, {"W"}));
  REQUIRE(verdict.holds);
  REQUIRE(verdict.setting.has_value());
  CHECK(verdict.setting->settings == single(q.sit.m, "W", 0).settings);
}

TEST_CASE("rain wetting the ground is not necessary for the fall") {
  cause_query q = cruel_neighbour_query(1);
  CHECK_FALSE(is_necessary_cause(q, vars_of(q.sit.m, {"WR"})).holds);
}

TEST_CASE("necessary causes of the disjunction model") {
  cause_query q = table_one_model(false);
  CHECK_FALSE(is_necessary_cause(q, vars_of(q.sit.m, {"A"})).holds);
  cause_verdict both = is_necessary_cause(q, vars_of(q.sit.m, {"A", "B"}));
  REQUIRE(both.holds);
  REQUIRE(both.setting.has_value());
  CHECK(both.setting->settings ==
        std::vector<std::pair<int, int>>{{q.sit.m.index_of("A"), 0},
                                         {q.sit.m.index_of("B"), 0}});
}

TEST_CASE("sufficient causes of the worked models") {
  cause_query conj = table_one_model(true);
  CHECK(is_sufficient_cause(conj, vars_of(conj.sit.m, {"A", "B"})).holds);
  CHECK_FALSE(is_sufficient_cause(conj, vars_of(conj.sit.m, {"A"})).holds);

  cause_query disj = table_one_model(false);
  CHECK(is_sufficient_cause(disj, vars_of(disj.sit.m, {"A"})).holds);
}

TEST_CASE("masked rain is an actual cause under the sprinkler contingency") {
  cause_query q = cruel_neighbour_query(1);
  cause_verdict verdict = is_actual_cause(q, vars_of(q.sit.m, {"WR"}));
  REQUIRE(verdict.holds);
  REQUIRE(verdict.contingency.has_value());
  CHECK(*verdict.contingency == vars_of(q.sit.m, {"S"}));
  REQUIRE(verdict.setting.has_value());
  CHECK(verdict.setting->settings == single(q.sit.m, "WR", 0).settings);
}

TEST_CASE("necessary causes are actual causes with an empty contingency") {
  cause_query q = wet_ground_query(1);
  cause_verdict verdict = is_actual_cause(q, vars_of(q.sit.m, {"W"}));
  REQUIRE(verdict.holds);
  REQUIRE(verdict.contingency.has_value());
  CHECK(verdict.contingency->empty());
  CHECK(verdict.setting->settings == single(q.sit.m, "W", 0).settings);
}

TEST_CASE("brute-forced actual cause of the conjunction model") {
  cause_query q = table_one_model(true);
  // Oracle: A = 0 already falsifies phi with no contingency at all.
  REQUIRE(necessary_oracle(q, vars_of(q.sit.m, {"A"})));
  cause_verdict verdict = is_actual_cause(q, vars_of(q.sit.m, {"A"}));
  REQUIRE(verdict.holds);
  CHECK(verdict.contingency->empty());
  CHECK(verdict.setting->settings == single(q.sit.m, "A", 0).settings);
}

TEST_CASE("enumerated families reproduce the comparison table") {
  cause_query conj = table_one_model(true);
  CHECK(enumerate_causes(conj, cause_kind::necessary, true) ==
        make_family(2, {0b01, 0b10}));
  CHECK(enumerate_causes(conj, cause_kind::sufficient, true) ==
        make_family(2, {0b11}));

  cause_query disj = table_one_model(false);
  CHECK(enumerate_causes(disj, cause_kind::necessary, true) ==
        make_family(2, {0b11}));
  CHECK(enumerate_causes(disj, cause_kind::sufficient, true) ==
        make_family(2, {0b01, 0b10}));
}

TEST_CASE("the full necessary family of the wet ground model") {
  cause_query q = wet_ground_query(1);
  REQUIRE(q.v_res == vars_of(q.sit.m, {"S", "W"}));
  cause_family full = enumerate_causes(q, cause_kind::necessary, false);
  CHECK(full == family_oracle(q, false));
  // {W} and {S,W}: the sprinkler alone cannot dry the ground while it
  // rains.
  CHECK(full == make_family(2, {0b10, 0b11}));
  CHECK(enumerate_causes(q, cause_kind::necessary, true) ==
        make_family(2, {0b10}));
}

TEST_CASE("an unsatisfied event has no causes") {
  cause_query q = wet_ground_query(1);
  q.phi = event_eq(q.sit.m, "F", 0);
  CHECK(enumerate_causes(q, cause_kind::necessary, false).members.empty());
  CHECK(enumerate_causes(q, cause_kind::sufficient, false).members.empty());
  CHECK(enumerate_causes(q, cause_kind::actual, false).members.empty());
}

TEST_CASE("oversized restrictions are rejected") {
  model m;
  m.declare("U", range::boolean(), true);
  for (int i = 0; i < 17; ++i) {
    std::string name = "E" + std::to_string(i);
    m.declare(name, range::boolean(), false);
    m.define(name, vref(m, "U"));
  }
  m.declare("T", range::boolean(), false);
  m.define("T", vref(m, "U"));
  REQUIRE(validate(m).empty());

  context u;
  u.values.resize(m.vars.size());
  u.values[0] = 1;
  cause_query q;
  q.phi = event_eq(m, "T", 1);
  q.v_res = default_restriction(m, q.phi);
  REQUIRE(q.v_res.size() == 17);
  q.sit = situation{std::move(m), std::move(u)};
  CHECK_THROWS_AS(enumerate_causes(q, cause_kind::necessary, false),
                  causal_error);
}

TEST_CASE("the generator is deterministic and seed-sensitive") {
  cause_query a = generate_random_model(0, 3, 3, 2);
  cause_query b = generate_random_model(0, 3, 3, 2);
  CHECK(pretty_print(to_document(a)) == pretty_print(to_document(b)));
  CHECK(same_document(to_document(a), to_document(b)));

  cause_query c = generate_random_model(1, 3, 3, 2);
  cause_query d = generate_random_model(2, 3, 3, 2);
  CHECK_FALSE(pretty_print(to_document(c)) == pretty_print(to_document(d)));
}

TEST_CASE("every generated model validates and satisfies its event") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    int n_endo = 1 + static_cast<int>(seed % 8);
    cause_query q = generate_random_model(seed, n_endo, n_endo, 3);
    CHECK(validate(q.sit.m).empty());
    CHECK(validate_context(q.sit.m, q.sit.u).empty());
    CHECK(validate_query(q).empty());
    CHECK(satisfies(q.sit.m, q.sit.u, {{}, q.phi}));
  }
}

TEST_CASE("generator guards its parameters") {
  CHECK_THROWS_AS(generate_random_model(0, 0, 1, 1), causal_error);
  CHECK_THROWS_AS(generate_random_model(0, 11, 1, 1), causal_error);
  CHECK_THROWS_AS(generate_random_model(0, 2, 0, 1), causal_error);
}

TEST_CASE("enumerated families match the oracle on fuzzed models") {
  for (std::uint64_t seed = 100; seed < 160; ++seed) {
    cause_query q = generate_random_model(seed, 1 + seed % 5, 3, 2);
    CHECK(enumerate_causes(q, cause_kind::necessary, false) ==
          family_oracle(q, false));
    CHECK(enumerate_causes(q, cause_kind::sufficient, false) ==
          family_oracle(q, true));
  }
}

TEST_CASE("necessary causes hold as actual causes with the same witness") {
  for (std::uint64_t seed = 200; seed < 260; ++seed) {
    cause_query q = generate_random_model(seed, 1 + seed % 5, 3, 2);
    auto necessary = enumerate_causes_detailed(q, cause_kind::necessary,
                                               false, exec_mode::serial);
    for (const enumerated_cause& found : necessary) {
      std::vector<int> vars = mask_to_vars(found.member, q.v_res);
      cause_verdict actual = is_actual_cause(q, vars);
      REQUIRE(actual.holds);
      REQUIRE(actual.contingency.has_value());
      CHECK(actual.contingency->empty());
      CHECK(actual.setting->settings == found.verdict.setting->settings);
    }
  }
}

TEST_CASE("actual causes extend to necessary causes via their contingency") {
  for (std::uint64_t seed = 300; seed < 360; ++seed) {
    cause_query q = generate_random_model(seed, 1 + seed % 5, 3, 2);
    auto actual = enumerate_causes_detailed(q, cause_kind::actual, false,
                                            exec_mode::serial);
    for (const enumerated_cause& found : actual) {
      std::vector<int> joined = mask_to_vars(found.member, q.v_res);
      joined.insert(joined.end(), found.verdict.contingency->begin(),
                    found.verdict.contingency->end());
      std::sort(joined.begin(), joined.end());
      joined.erase(std::unique(joined.begin(), joined.end()), joined.end());
      CHECK(is_necessary_cause(q, joined).holds);
      CHECK(necessary_oracle(q, joined));
    }
  }
}

TEST_CASE("necessary and sufficient families are upward closed") {
  for (std::uint64_t seed = 400; seed < 450; ++seed) {
    cause_query q = generate_random_model(seed, 1 + seed % 5, 3, 2);
    cause_family necessary =
        enumerate_causes(q, cause_kind::necessary, false);
    cause_family sufficient =
        enumerate_causes(q, cause_kind::sufficient, false);
    CHECK(saturate_upward(necessary) == necessary);
    CHECK(saturate_upward(sufficient) == sufficient);
  }
}

TEST_CASE("minimal families are the antichain of the full ones") {
  for (std::uint64_t seed = 500; seed < 540; ++seed) {
    cause_query q = generate_random_model(seed, 1 + seed % 5, 3, 2);
    for (cause_kind kind :
         {cause_kind::necessary, cause_kind::sufficient, cause_kind::actual}) {
      cause_family full = enumerate_causes(q, kind, false);
      cause_family minimal = enumerate_causes(q, kind, true);
      CHECK(minimal == minimize_family(full));
      if (kind != cause_kind::actual) {
        CHECK(saturate_upward(minimal) == full);
      }
    }
  }
}

}  // TEST_SUITE
