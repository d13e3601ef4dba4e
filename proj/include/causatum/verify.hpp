#pragma once

// Duality verification driver shared by the CLI and the test suites.

#include "causatum/boolfun.hpp"
#include "causatum/cause.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace causatum {

struct duality_check {
  bool ac1 = true;  // phi holds in the actual world; checks are vacuous otherwise
  bool pass = true;
  std::vector<std::string> failures;
  cause_family necessary;  // full (not-necessarily-minimal) families
  cause_family sufficient;
};

// Every duality-related property for one query: the necessary->sufficient
// transform by both dual routes (which must also agree with each other),
// the embedding of actual causes into necessary causes, upward closure of
// both families, and minimal-family pipeline equivalence in both
// directions under both CNF reducers.
duality_check check_duality(const cause_query& q);

struct verify_options {
  std::uint64_t seed = 0;
  int count = 1;
  int max_endo = 5;
  exec_mode mode = exec_mode::parallel;
};

struct verify_report {
  int passed = 0;
  int total = 0;
  bool input_error = false;  // phi false in the actual world
  std::string text;          // per-model lines plus summary, seed order

  bool ok() const { return !input_error && passed == total; }
};

// The exact model checked at `index` by verify_random under these options.
cause_query verify_corpus_model(const verify_options& opt, int index);

// Checks `count` generated models (model i is seeded from seed + i).
// Models may be processed concurrently; the report is identical either
// way.
verify_report verify_random(const verify_options& opt);

// One already-built query, labeled in the report.
verify_report verify_single(const cause_query& q, const std::string& label);

}  // namespace causatum
