#pragma once

// The semi-autonomous vehicle: obstacle O, attentive driver Att, and three
// agents (driver HD, obstacle detection ODS, driver assistant DA) whose
// choices decide whether the car collides (Col).

#include "causal_cgs/model.hpp"

namespace fixtures {

inline causal_cgs::CausalModel vehicle_model() {
  using causal_cgs::Expression;
  causal_cgs::ModelBuilder b;
  b.exogenous("U_O", {"0", "1"});
  b.exogenous("U_Att", {"0", "1"});
  b.endogenous("O", {"0", "1"});
  b.endogenous("Att", {"0", "1"});
  b.agent("HD", {"0", "1"});
  b.agent("ODS", {"0", "1"});
  b.agent("DA", {"0", "1"});
  b.endogenous("Col", {"0", "1"});
  b.equation("O", b.var("U_O"));
  b.equation("Att", b.var("U_Att"));
  b.equation("HD", Expression::disj(Expression::negate(b.var("O")),
                                    Expression::conj(b.var("O"), Expression::negate(b.var("Att")))));
  b.equation("ODS", b.var("O"));
  b.equation("DA", Expression::conj(b.var("HD"), Expression::negate(b.var("ODS"))));
  b.equation("Col", Expression::conj(Expression::conj(b.var("DA"), b.var("HD")), b.var("O")));
  return b.build();
}

// Obstacle on the road, driver not paying attention.
inline causal_cgs::Context vehicle_context(const causal_cgs::CausalModel& m) {
  return {{m.id("U_O"), causal_cgs::kTrue}, {m.id("U_Att"), causal_cgs::kFalse}};
}

}  // namespace fixtures
