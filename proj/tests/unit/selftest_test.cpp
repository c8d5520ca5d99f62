#include <gtest/gtest.h>

#include "causal_cgs/selftest.hpp"
#include "vehicle.hpp"

using namespace causal_cgs;

namespace {

TEST(Selftest, VehiclePassesEveryCheck) {
  SelftestReport report;
  const auto m = fixtures::vehicle_model();
  check_causal_setting(m, fixtures::vehicle_context(m), "vehicle", report);
  EXPECT_TRUE(report.ok());
  for (const auto& t : report.checks) EXPECT_GT(t.checked, 0u) << t.name;
  EXPECT_EQ(report.checks.size(), 8u);
}

TEST(Selftest, RandomRunPasses) {
  const auto r = run_selftest({40, 3});
  EXPECT_TRUE(r.ok()) << format_report(r, false);
  EXPECT_EQ(r.models, 40u);
  EXPECT_GE(r.settings, 40u);
  EXPECT_GE(r.cgs_built, r.settings);
  EXPECT_NE(format_report(r, false).find("all checks passed"), std::string::npos);
}

TEST(Selftest, TallyKeepsFirstFailures) {
  CheckTally t{"x"};
  for (int k = 0; k < 9; ++k) t.record(k % 2 == 0, "case " + std::to_string(k));
  EXPECT_EQ(t.checked, 9u);
  EXPECT_EQ(t.failed, 4u);
  EXPECT_EQ(t.examples.front(), "case 1");
  SelftestReport r;
  r.tally("x");
  EXPECT_TRUE(r.ok());
  r.tally("x").record(false, "bad");
  EXPECT_FALSE(r.ok());
  EXPECT_NE(format_report(r, false).find("FAIL"), std::string::npos);
}

}  // namespace
