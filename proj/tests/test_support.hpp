#pragma once

// Shared builders for the worked-example models, used across the unit
// suites so each test constructs exactly the model it talks about.

#include "causatum/cause.hpp"
#include "causatum/model.hpp"

#include <string>
#include <vector>

namespace causatum::testing {

inline expr vref(const model& m, const std::string& name) {
  return expr::var_ref(m.index_of(name));
}

// S = !R, W = R | S, F = W with context R.
inline situation wet_ground(int rain) {
  model m;
  m.declare("R", range::boolean(), true);
  m.declare("S", range::boolean(), false);
  m.declare("W", range::boolean(), false);
  m.declare("F", range::boolean(), false);
  m.define("S", expr::negation(vref(m, "R")));
  m.define("W", expr::disjunction(vref(m, "R"), vref(m, "S")));
  m.define("F", vref(m, "W"));
  context u = make_context(m, {{"R", rain}});
  return situation{std::move(m), std::move(u)};
}

// WR = R, S = !WR, W = WR | S, F = W.
inline situation cruel_neighbour(int rain) {
  model m;
  m.declare("R", range::boolean(), true);
  m.declare("WR", range::boolean(), false);
  m.declare("S", range::boolean(), false);
  m.declare("W", range::boolean(), false);
  m.declare("F", range::boolean(), false);
  m.define("WR", vref(m, "R"));
  m.define("S", expr::negation(vref(m, "WR")));
  m.define("W", expr::disjunction(vref(m, "WR"), vref(m, "S")));
  m.define("F", vref(m, "W"));
  context u = make_context(m, {{"R", rain}});
  return situation{std::move(m), std::move(u)};
}

inline expr event_eq(const model& m, const std::string& name, int value) {
  return expr::equality(vref(m, name), expr::constant_of(value));
}

// Two endogenous variables copying dedicated exogenous inputs set to 1;
// phi is their conjunction or disjunction; the restriction is {A, B}.
inline cause_query table_one_model(bool conjunction) {
  model m;
  m.declare("UA", range::boolean(), true);
  m.declare("UB", range::boolean(), true);
  m.declare("A", range::boolean(), false);
  m.declare("B", range::boolean(), false);
  m.define("A", vref(m, "UA"));
  m.define("B", vref(m, "UB"));
  context u = make_context(m, {{"UA", 1}, {"UB", 1}});
  expr a = event_eq(m, "A", 1);
  expr b = event_eq(m, "B", 1);
  expr phi = conjunction ? expr::conjunction(std::move(a), std::move(b))
                         : expr::disjunction(std::move(a), std::move(b));
  cause_query q;
  q.v_res = {m.index_of("A"), m.index_of("B")};
  q.sit = situation{std::move(m), std::move(u)};
  q.phi = std::move(phi);
  return q;
}

inline cause_query wet_ground_query(int rain) {
  situation sit = wet_ground(rain);
  cause_query q;
  q.phi = event_eq(sit.m, "F", 1);
  q.v_res = default_restriction(sit.m, q.phi);
  q.sit = std::move(sit);
  return q;
}

inline cause_query cruel_neighbour_query(int rain) {
  situation sit = cruel_neighbour(rain);
  cause_query q;
  q.phi = event_eq(sit.m, "F", 1);
  q.v_res = default_restriction(sit.m, q.phi);
  q.sit = std::move(sit);
  return q;
}

inline std::vector<int> vars_of(const model& m,
                                const std::vector<std::string>& names) {
  std::vector<int> out;
  for (const std::string& name : names) out.push_back(m.index_of(name));
  return out;
}

}  // namespace causatum::testing
