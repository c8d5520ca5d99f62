#include <benchmark/benchmark.h>

#include <random>

#include "causal_cgs/cgs_builder.hpp"
#include "causal_cgs/dsl.hpp"
#include "causal_cgs/export.hpp"
#include "causal_cgs/hp_causality.hpp"
#include "causal_cgs/random_model.hpp"
#include "causal_cgs/strategy_bridge.hpp"

using namespace causal_cgs;

namespace {

const char* kVehicle = R"(
exogenous U_O in {0,1}
exogenous U_Att in {0,1}
endogenous O in {0,1}
endogenous Att in {0,1}
agent HD in {0,1}
agent ODS in {0,1}
agent DA in {0,1}
endogenous Col in {0,1}
eq O := U_O
eq Att := U_Att
eq HD := !O | (O & !Att)
eq ODS := O
eq DA := HD & !ODS
eq Col := DA & HD & O
context U_O = 1, U_Att = 0
outcome no_collision : !Col
)";

const dsl::LoadedModel& vehicle() {
  static const dsl::LoadedModel m = *dsl::load_model(kVehicle).loaded;
  return m;
}

// A wide model: n agents at one rank, each copying U, and a conjunction.
CausalModel wide(int n) {
  ModelBuilder b;
  b.exogenous("U", {"0", "1"});
  for (int k = 0; k < n; ++k) b.agent("A" + std::to_string(k), {"0", "1"});
  b.endogenous("Y", {"0", "1"});
  for (int k = 0; k < n; ++k) b.equation("A" + std::to_string(k), b.var("U"));
  Expression all = b.var("A0");
  for (int k = 1; k < n; ++k) all = Expression::conj(all, b.var("A" + std::to_string(k)));
  b.equation("Y", all);
  return b.build();
}

void BM_ParseVehicle(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(dsl::load_model(kVehicle));
}
BENCHMARK(BM_ParseVehicle);

void BM_BuildVehicle(benchmark::State& state) {
  const auto& v = vehicle();
  for (auto _ : state) benchmark::DoNotOptimize(build_causal_cgs(v.model, v.context));
}
BENCHMARK(BM_BuildVehicle);

void BM_BuildWide(benchmark::State& state) {
  const auto m = wide(static_cast<int>(state.range(0)));
  const Context ctx{{m.id("U"), kTrue}};
  for (auto _ : state) benchmark::DoNotOptimize(build_causal_cgs(m, ctx));
}
BENCHMARK(BM_BuildWide)->DenseRange(2, 12, 2);

void BM_ExportVehicleJson(benchmark::State& state) {
  const auto& v = vehicle();
  const auto g = build_causal_cgs(v.model, v.context);
  for (auto _ : state) benchmark::DoNotOptimize(export_json(g));
}
BENCHMARK(BM_ExportVehicleJson);

void BM_EnumerateVehicleCauses(benchmark::State& state) {
  const auto& v = vehicle();
  const auto& phi = v.outcome("no_collision")->formula;
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_causes(v.model, v.context, phi));
}
BENCHMARK(BM_EnumerateVehicleCauses);

void BM_EnumerateRandomCauses(benchmark::State& state) {
  std::mt19937_64 rng(9);
  RandomModelOptions opts;
  opts.min_endogenous = opts.max_endogenous = static_cast<int>(state.range(0));
  std::vector<std::pair<CausalModel, Context>> settings;
  for (int k = 0; k < 32; ++k) {
    auto m = random_model(rng, opts);
    auto ctx = all_contexts(m).front();
    settings.emplace_back(std::move(m), std::move(ctx));
  }
  std::size_t k = 0;
  for (auto _ : state) {
    const auto& [m, ctx] = settings[k++ % settings.size()];
    const VarId y = m.endogenous().back();
    const auto phi = EventFormula::event(y, evaluate(m, ctx)[y]);
    benchmark::DoNotOptimize(enumerate_causes(m, ctx, phi));
  }
}
BENCHMARK(BM_EnumerateRandomCauses)->DenseRange(2, 8, 2);

void BM_BridgeAllWitnesses(benchmark::State& state) {
  const auto& v = vehicle();
  const auto& phi = v.outcome("no_collision")->formula;
  const auto cand = actual_candidate(v.model, v.context, {v.model.id("DA")});
  for (auto _ : state) {
    BridgeEngine e(v.model, v.context);
    benchmark::DoNotOptimize(e.all_witnesses(BridgeKind::cause_iff_strategy, cand, phi));
  }
}
BENCHMARK(BM_BridgeAllWitnesses);

}  // namespace
BENCHMARK_MAIN();
