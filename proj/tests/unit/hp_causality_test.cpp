#include <gtest/gtest.h>

#include <random>

#include "causal_cgs/hp_causality.hpp"
#include "causal_cgs/random_model.hpp"
#include "oracle.hpp"
#include "vehicle.hpp"

using namespace causal_cgs;

namespace {

class VehicleCauses : public ::testing::Test {
 protected:
  CausalModel m = fixtures::vehicle_model();
  Context ctx = fixtures::vehicle_context(m);
  EventFormula no_col = EventFormula::negate(EventFormula::event(m.id("Col"), kTrue));
};

TEST_F(VehicleCauses, AgentCausesAreButFor) {
  EnumerationOptions opts;
  opts.restrict_to_agents = true;
  const auto r = enumerate_causes(m, ctx, no_col, opts);
  ASSERT_EQ(r.causes.size(), 2u);
  EXPECT_EQ(r.causes[0].cause.vars, std::vector<VarId>{m.id("ODS")});
  EXPECT_EQ(r.causes[0].intervention(), (Intervention{{m.id("ODS"), kFalse}}));
  EXPECT_EQ(r.causes[1].cause.vars, std::vector<VarId>{m.id("DA")});
  EXPECT_EQ(r.causes[1].intervention(), (Intervention{{m.id("DA"), kTrue}}));
  for (const auto& c : r.causes) EXPECT_TRUE(c.witness.vars.empty());
}

TEST_F(VehicleCauses, DriverBrakingIsNotACause) {
  const auto cand = actual_candidate(m, ctx, {m.id("HD")});
  EXPECT_FALSE(check_cause(m, ctx, cand, no_col));
  EXPECT_FALSE(is_butfor_cause(m, ctx, cand, no_col));
}

TEST_F(VehicleCauses, PairFailsMinimality) {
  CauseSearch s(m, ctx, no_col);
  EXPECT_TRUE(s.ac2({m.id("ODS"), m.id("DA")}));
  EXPECT_FALSE(s.ac3({m.id("ODS"), m.id("DA")}));
  EXPECT_TRUE(s.ac3({m.id("ODS")}));
}

TEST_F(VehicleCauses, WitnessMustBeFrozenAtActualValues) {
  // Freezing DA at 0 blocks the ODS cause.
  EXPECT_FALSE(check_cause_with_witness(m, ctx, actual_candidate(m, ctx, {m.id("ODS")}),
                                        {m.id("DA")}, no_col));
  EXPECT_TRUE(check_cause_with_witness(m, ctx, actual_candidate(m, ctx, {m.id("ODS")}),
                                       {m.id("Att")}, no_col));
}

TEST_F(VehicleCauses, FalseOutcomeThrows) {
  EXPECT_THROW(enumerate_causes(m, ctx, EventFormula::event(m.id("Col"), kTrue)),
               CausalityError);
}

TEST_F(VehicleCauses, Ac1RejectsWrongValues) {
  CauseSearch s(m, ctx, no_col);
  EXPECT_FALSE(s.ac1({{m.id("ODS")}, {kFalse}}));
  EXPECT_TRUE(s.ac1({{m.id("ODS")}, {kTrue}}));
}

TEST_F(VehicleCauses, LimitsTruncate) {
  EnumerationOptions opts;
  opts.limits.max_cause_size = 1;
  const auto r = enumerate_causes(m, ctx, no_col, opts);
  EXPECT_TRUE(r.truncated);
}

TEST(Subsets, BySizeThenLexicographic) {
  const auto s = subsets_by_size({3, 5, 7}, 1, 2);
  const std::vector<std::vector<VarId>> want{{3}, {5}, {7}, {3, 5}, {3, 7}, {5, 7}};
  EXPECT_EQ(s, want);
}

std::set<oracle::Cause> as_set(const EnumerationResult& r) {
  std::set<oracle::Cause> out;
  for (const auto& c : r.causes) out.insert({c.cause.vars, c.cause.actual_values});
  return out;
}

// Property: the enumeration matches the definition-level reference on
// random models and every primitive outcome true in the setting.
TEST(CausesProperty, MatchReference) {
  std::mt19937_64 rng(31);
  RandomModelOptions opts;
  opts.max_endogenous = 4;
  for (int k = 0; k < 150; ++k) {
    const auto m = random_model(rng, opts);
    for (const auto& ctx : all_contexts(m)) {
      oracle::Setting ref(m, ctx);
      for (VarId y : m.endogenous()) {
        const auto phi = EventFormula::event(y, ref.actual()[y]);
        for (bool agents : {false, true}) {
          EnumerationOptions eo;
          eo.restrict_to_agents = agents;
          ASSERT_EQ(as_set(enumerate_causes(m, ctx, phi, eo)), oracle::all_causes(ref, phi, agents))
              << "model " << k;
        }
      }
    }
  }
}

TEST(CausesProperty, CertificatesFalsifyOutcome) {
  std::mt19937_64 rng(32);
  for (int k = 0; k < 150; ++k) {
    const auto m = random_model(rng);
    for (const auto& ctx : all_contexts(m)) {
      const auto actual = evaluate(m, ctx);
      for (VarId y : m.endogenous()) {
        const auto phi = EventFormula::event(y, actual[y]);
        EnumerationOptions eo;
        eo.all_witnesses = true;
        for (const auto& c : enumerate_causes(m, ctx, phi, eo).causes) {
          EXPECT_FALSE(satisfies(evaluate(m, ctx, c.intervention()), phi));
          for (std::size_t n = 0; n < c.witness.vars.size(); ++n)
            EXPECT_EQ(c.witness.values[n], actual[c.witness.vars[n]]);
        }
      }
    }
  }
}

TEST(CausesProperty, ButForCausesHaveEmptyWitness) {
  std::mt19937_64 rng(33);
  for (int k = 0; k < 150; ++k) {
    const auto m = random_model(rng);
    for (const auto& ctx : all_contexts(m)) {
      const auto actual = evaluate(m, ctx);
      for (VarId y : m.endogenous()) {
        const auto phi = EventFormula::event(y, actual[y]);
        EnumerationOptions eo;
        eo.butfor_only = true;
        for (const auto& c : enumerate_causes(m, ctx, phi, eo).causes) {
          EXPECT_TRUE(c.witness.vars.empty());
          EXPECT_TRUE(is_butfor_cause(m, ctx, c.cause, phi));
        }
      }
    }
  }
}

}  // namespace
