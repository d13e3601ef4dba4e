#include "causatum/cause.hpp"

#include <algorithm>
#include <cassert>
#include <random>
#include <string>
#include <utility>

namespace causatum {

namespace {

// Thin wrapper so every draw goes through one deterministic path.
struct rng {
  std::mt19937_64 engine;

  explicit rng(std::uint64_t seed) : engine(seed) {}

  std::uint64_t below(std::uint64_t bound) {
    assert(bound > 0);
    return engine() % bound;
  }

  bool flip() { return below(2) == 1; }

  // Deterministic Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }
};

expr maybe_negate(rng& r, expr e) {
  return r.flip() ? expr::negation(std::move(e)) : std::move(e);
}

expr random_connective(rng& r, expr lhs, expr rhs) {
  switch (r.below(3)) {
    case 0: return expr::conjunction(std::move(lhs), std::move(rhs));
    case 1: return expr::disjunction(std::move(lhs), std::move(rhs));
    default: return expr::implication(std::move(lhs), std::move(rhs));
  }
}

// A left-folded random boolean expression mentioning every operand at least
// once (so the drawn parent set is exactly the syntactic dependency set).
expr random_bool_expr(rng& r, const std::vector<int>& operands) {
  std::vector<int> leaves = operands;
  std::size_t extras = r.below(2);
  for (std::size_t i = 0; i < extras; ++i) {
    leaves.push_back(operands[r.below(operands.size())]);
  }
  r.shuffle(leaves);

  expr out = maybe_negate(r, expr::var_ref(leaves[0]));
  for (std::size_t i = 1; i < leaves.size(); ++i) {
    out = random_connective(r, std::move(out),
                            maybe_negate(r, expr::var_ref(leaves[i])));
  }
  return out;
}

}  // namespace

cause_query generate_random_model(std::uint64_t seed, int n_endo, int n_exo,
                                  int max_parents) {
  if (n_endo < 1 || n_endo > 10) {
    throw causal_error({diag_code::bad_input,
                        "generator supports 1 to 10 endogenous variables",
                        {}});
  }
  if (n_exo < 1 || max_parents < 0) {
    throw causal_error({diag_code::bad_input,
                        "generator needs n_exo >= 1 and max_parents >= 0",
                        {}});
  }
  rng r(seed);

  model m;
  for (int i = 0; i < n_exo; ++i) {
    m.declare("U" + std::to_string(i), range::boolean(), true);
  }
  for (int i = 0; i < n_endo; ++i) {
    m.declare("X" + std::to_string(i), range::boolean(), false);
  }
  auto endo_index = [&](int j) { return n_exo + j; };

  std::vector<char> is_parent(static_cast<std::size_t>(n_endo), 0);
  for (int j = 0; j < n_endo; ++j) {
    int cap = std::min(j, max_parents);
    int parent_count =
        cap > 0 ? static_cast<int>(r.below(static_cast<std::uint64_t>(cap) + 1))
                : 0;
    std::vector<int> earlier(static_cast<std::size_t>(j));
    for (int k = 0; k < j; ++k) earlier[static_cast<std::size_t>(k)] = k;
    r.shuffle(earlier);
    earlier.resize(static_cast<std::size_t>(parent_count));
    std::sort(earlier.begin(), earlier.end());

    // Parents only from earlier variables plus one exogenous input each;
    // the result is acyclic by construction.
    int input = j < n_exo ? j : static_cast<int>(r.below(n_exo));
    std::vector<int> operands{input};
    for (int p : earlier) {
      operands.push_back(endo_index(p));
      is_parent[static_cast<std::size_t>(p)] = 1;
    }
    m.define("X" + std::to_string(j), random_bool_expr(r, operands));
  }

  context u;
  u.values.resize(m.vars.size());
  for (int i = 0; i < n_exo; ++i) {
    u.values[static_cast<std::size_t>(i)] = static_cast<int>(r.below(2));
  }

  std::vector<int> sinks;
  for (int j = 0; j < n_endo; ++j) {
    if (!is_parent[static_cast<std::size_t>(j)]) sinks.push_back(j);
  }
  assert(!sinks.empty());
  r.shuffle(sinks);
  std::size_t picked = sinks.size() >= 2 && r.flip() ? 2 : 1;
  sinks.resize(picked);

  auto primitive_event = [&](int j) {
    expr e = expr::equality(expr::var_ref(endo_index(j)),
                            expr::constant_of(static_cast<int>(r.below(2))));
    return maybe_negate(r, std::move(e));
  };
  expr phi = primitive_event(sinks[0]);
  if (picked == 2) {
    expr second = primitive_event(sinks[1]);
    phi = r.flip() ? expr::conjunction(std::move(phi), std::move(second))
                   : expr::disjunction(std::move(phi), std::move(second));
  }
  // AC1 must hold globally for the duality checks to bite.
  if (!satisfies(m, u, causal_formula{{}, phi})) {
    phi = expr::negation(std::move(phi));
  }

  cause_query q;
  q.v_res = default_restriction(m, phi);
  q.sit = situation{std::move(m), std::move(u)};
  q.phi = std::move(phi);
  return q;
}

}  // namespace causatum
