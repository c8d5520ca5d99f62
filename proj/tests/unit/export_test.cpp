#include <gtest/gtest.h>

#include <random>

#include "causal_cgs/export.hpp"
#include "causal_cgs/random_model.hpp"
#include "vehicle.hpp"

using namespace causal_cgs;

namespace {

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

class VehicleExport : public ::testing::Test {
 protected:
  CausalModel m = fixtures::vehicle_model();
  Context ctx = fixtures::vehicle_context(m);
  CausalCgs g = build_causal_cgs(m, ctx);
};

TEST_F(VehicleExport, Dot) {
  const auto dot = export_dot(g);
  EXPECT_EQ(dot.rfind("digraph causal_cgs {", 0), 0u);
  EXPECT_EQ(count(dot, "[label=\"q_"), 13u);
  EXPECT_EQ(count(dot, " -> "), 12u);
  EXPECT_NE(dot.find("\"<1,0,->\""), std::string::npos);
  EXPECT_NE(dot.find("q_2_5\\nO=1 Att=0 HD=1 ODS=0 DA=1 Col=1"), std::string::npos);
}

TEST_F(VehicleExport, JsonRecord) {
  const auto rec = to_record(g);
  EXPECT_EQ(rec.states.size(), 13u);
  EXPECT_EQ(rec.transitions.size(), 20u);
  EXPECT_EQ(rec.agents, (std::vector<std::string>{"HD", "ODS", "DA"}));
  EXPECT_EQ(rec.context.size(), 2u);
  EXPECT_TRUE(rec.intervention.empty());
  const auto& root = rec.states.front();
  EXPECT_EQ(root.label.size(), 8u);
  EXPECT_EQ(rec.transitions.front().vector,
            (CgsRecord::Vector{"0", "0", std::nullopt}));
}

TEST_F(VehicleExport, JsonRoundTripAndDigest) {
  const auto text = export_json(g);
  EXPECT_EQ(parse_cgs_json(text), to_record(g));
  EXPECT_EQ(to_json(parse_cgs_json(text)), text);
  EXPECT_EQ(export_json(build_causal_cgs(m, ctx)), text);
  EXPECT_EQ(digest(text).size(), 16u);
  EXPECT_EQ(digest(text), digest(export_json(build_causal_cgs(m, ctx))));
}

TEST(Export, Fnv1aKnownValues) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(digest(""), "cbf29ce484222325");
}

TEST(Export, MalformedJsonThrows) {
  EXPECT_THROW(parse_cgs_json("{"), std::runtime_error);
  EXPECT_THROW(parse_cgs_json("{\"states\": 3}"), std::runtime_error);
  EXPECT_THROW(parse_cgs_json("[]"), std::runtime_error);
}

// Export determinism: the same model built twice gives identical bytes.
TEST(ExportProperty, Deterministic) {
  std::mt19937_64 a(71), b(71);
  for (int k = 0; k < 100; ++k) {
    const auto m1 = random_model(a);
    const auto m2 = random_model(b);
    for (const auto& ctx : all_contexts(m1)) {
      const auto g1 = build_causal_cgs(m1, ctx);
      const auto g2 = build_causal_cgs(m2, ctx);
      EXPECT_EQ(export_json(g1), export_json(g2));
      EXPECT_EQ(export_dot(g1), export_dot(g2));
      EXPECT_EQ(parse_cgs_json(export_json(g1)), to_record(g1));
    }
  }
}

}  // namespace
