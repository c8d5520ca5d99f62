#include <gtest/gtest.h>

#include <random>

#include "causal_cgs/model.hpp"
#include "causal_cgs/random_model.hpp"
#include "oracle.hpp"
#include "vehicle.hpp"

using namespace causal_cgs;

namespace {

TEST(SymbolTable, BooleansComeFirst) {
  SymbolTable t;
  EXPECT_EQ(t.find("0"), kFalse);
  EXPECT_EQ(t.find("1"), kTrue);
  const Symbol red = t.intern("red");
  EXPECT_EQ(t.intern("red"), red);
  EXPECT_EQ(t.text(red), "red");
  EXPECT_FALSE(t.find("blue"));
}

TEST(Evaluate, VehicleActualWorld) {
  const auto m = fixtures::vehicle_model();
  const auto a = evaluate(m, fixtures::vehicle_context(m));
  EXPECT_EQ(a[m.id("O")], kTrue);
  EXPECT_EQ(a[m.id("Att")], kFalse);
  EXPECT_EQ(a[m.id("HD")], kTrue);
  EXPECT_EQ(a[m.id("ODS")], kTrue);
  EXPECT_EQ(a[m.id("DA")], kFalse);
  EXPECT_EQ(a[m.id("Col")], kFalse);
}

TEST(Evaluate, InterventionCutsUpstream) {
  const auto m = fixtures::vehicle_model();
  const auto ctx = fixtures::vehicle_context(m);
  const auto a = evaluate(m, ctx, {{m.id("ODS"), kFalse}});
  EXPECT_EQ(a[m.id("ODS")], kFalse);
  EXPECT_EQ(a[m.id("DA")], kTrue);
  EXPECT_EQ(a[m.id("Col")], kTrue);
  EXPECT_EQ(a[m.id("O")], kTrue);
}

TEST(Evaluate, RejectsBadInputs) {
  const auto m = fixtures::vehicle_model();
  auto ctx = fixtures::vehicle_context(m);
  EXPECT_THROW(evaluate(m, ctx, {{m.id("U_O"), kTrue}}), ModelError);
  EXPECT_THROW(evaluate(m, ctx, {{m.id("HD"), 77}}), ModelError);
  ctx.erase(m.id("U_Att"));
  EXPECT_THROW(evaluate(m, ctx), ModelError);
}

TEST(IntervenedModel, MatchesEvaluationUnderIntervention) {
  const auto m = fixtures::vehicle_model();
  const auto ctx = fixtures::vehicle_context(m);
  const Intervention i{{m.id("HD"), kFalse}, {m.id("DA"), kTrue}};
  const auto mi = intervened_model(m, i);
  EXPECT_EQ(evaluate(mi, ctx), evaluate(m, ctx, i));
  EXPECT_TRUE(mi.is_agent(m.id("HD")));
}

TEST(Satisfies, Connectives) {
  const auto m = fixtures::vehicle_model();
  const auto a = evaluate(m, fixtures::vehicle_context(m));
  const auto col = EventFormula::event(m.id("Col"), kTrue);
  const auto hd = EventFormula::event(m.id("HD"), kTrue);
  EXPECT_FALSE(satisfies(a, col));
  EXPECT_TRUE(satisfies(a, EventFormula::negate(col)));
  EXPECT_TRUE(satisfies(a, EventFormula::disj(col, hd)));
  EXPECT_FALSE(satisfies(a, EventFormula::conj(col, hd)));
  EXPECT_EQ(format_formula(m, EventFormula::negate(col)), "!(Col=1)");
}

TEST(Validate, ReportsProblems) {
  ModelBuilder b;
  b.exogenous("U", {"0", "1"});
  b.endogenous("X", {"0", "1"});
  b.endogenous("Y", {"0", "1"});
  b.equation("X", b.var("Y"));
  b.equation("Y", b.var("X"));
  const auto diags = validate_model(b.build());
  ASSERT_FALSE(diags.empty());
  bool cycle = false;
  for (const auto& d : diags) cycle = cycle || d.kind == Diagnostic::Kind::cycle;
  EXPECT_TRUE(cycle);

  ModelBuilder c;
  c.exogenous("U", {"0", "1"});
  c.endogenous("X", {"0", "1"});
  const auto missing = validate_model(c.build());
  ASSERT_EQ(missing.size(), 1u);
  EXPECT_EQ(missing[0].kind, Diagnostic::Kind::missing_equation);
  EXPECT_EQ(missing[0].variable, "X");
}

TEST(Validate, EquationRangeAndNonBooleanOperand) {
  ModelBuilder b;
  b.exogenous("U", {"0", "1"});
  b.endogenous("C", {"red", "green"});
  b.endogenous("X", {"0", "1"});
  b.equation("C", b.constant("blue"));
  b.equation("X", Expression::negate(b.var("C")));
  std::set<Diagnostic::Kind> kinds;
  for (const auto& d : validate_model(b.build())) kinds.insert(d.kind);
  EXPECT_TRUE(kinds.count(Diagnostic::Kind::equation_range));
  EXPECT_TRUE(kinds.count(Diagnostic::Kind::non_boolean_operand));
}

TEST(Evaluate, NonBooleanDomains) {
  ModelBuilder b;
  b.exogenous("U", {"0", "1"});
  b.agent("Light", {"red", "amber", "green"});
  b.endogenous("Go", {"0", "1"});
  b.equation("Light", Expression::ite(b.var("U"), b.constant("green"), b.constant("red")));
  b.equation("Go", b.is("Light", "green"));
  const auto m = b.build();
  ASSERT_TRUE(validate_model(m).empty());
  const Context ctx{{m.id("U"), kTrue}};
  EXPECT_EQ(evaluate(m, ctx)[m.id("Go")], kTrue);
  EXPECT_EQ(evaluate(m, ctx, {{m.id("Light"), *m.symbol("amber")}})[m.id("Go")], kFalse);
}

// Property: the evaluator agrees with the fixed-point reference on random
// models, contexts and interventions.
TEST(EvaluateProperty, MatchesReferenceSolver) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 300; ++k) {
    const auto m = random_model(rng);
    for (const auto& ctx : all_contexts(m)) {
      for (const auto& vars : oracle::subsets(m.endogenous())) {
        if (vars.size() > 2) continue;
        for (const auto& vals : oracle::settings(m, vars)) {
          Intervention i;
          for (std::size_t n = 0; n < vars.size(); ++n) i[vars[n]] = vals[n];
          const auto a = evaluate(m, ctx, i);
          ASSERT_EQ(std::vector<Symbol>(a.values().begin(), a.values().end()),
                    oracle::solve(m, ctx, i));
        }
      }
    }
  }
}

TEST(EvaluateProperty, TopologicalOrderRespectsEquations) {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 200; ++k) {
    const auto m = random_model(rng);
    const auto& order = m.topological_order();
    std::map<VarId, std::size_t> pos;
    for (std::size_t n = 0; n < order.size(); ++n) pos[order[n]] = n;
    for (VarId v : m.endogenous()) {
      std::set<VarId> used;
      collect_variables(*m.equation(v), used);
      for (VarId u : used)
        if (m.is_endogenous(u)) EXPECT_LT(pos.at(u), pos.at(v));
    }
  }
}

}  // namespace
