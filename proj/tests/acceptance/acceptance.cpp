// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all
// pass. Limits and seeds are fixed below.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "causal_cgs/cgs_builder.hpp"
#include "causal_cgs/hp_causality.hpp"
#include "causal_cgs/random_model.hpp"
#include "causal_cgs/strategy_bridge.hpp"
#include "cli.hpp"
#include "json.hpp"
#include "oracle.hpp"
#include "vehicle.hpp"

using namespace causal_cgs;
using json = nlohmann::json;

namespace {

constexpr double kGoldenSeconds = 1.0;
constexpr double kDeviationSeconds = 60.0;
constexpr double kOracleSeconds = 120.0;
constexpr std::size_t kDeviationModels = 500;
constexpr std::uint64_t kDeviationSeed = 4;
constexpr std::size_t kBridgeModels = 200;
constexpr std::uint64_t kBridgeSeed = 5;
constexpr int kOracleMaxEndogenous = 4;
// Models with four endogenous variables: every equation has at most this many
// essential inputs (all models are covered up to three variables).
constexpr int kOracleFourVarInputs = 2;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> problems;

  void fail(const std::string& why) {
    pass = false;
    if (problems.size() < 8) problems.push_back(why);
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Criteria 6 and 7 look at every CGS the other criteria build.
struct Audit {
  std::size_t cgs = 0;
  std::size_t states = 0;
  Outcome stability;
  Outcome size;

  void add(const CausalCgs& g) {
    ++cgs;
    states += g.num_states();
    check_stability_literal(g);
    check_size(g);
  }

  void check_size(const CausalCgs& g) {
    std::size_t prod = 1;
    for (VarId a : g.model().agents()) prod *= g.model().variable(a).domain.size();
    if (g.num_states() > 1 + 2 * prod)
      size.fail(std::to_string(g.num_states()) + " states exceed 1 + 2*" + std::to_string(prod));
  }

  // For every X of rank i and every q_{i,j}: X=x is in the label of q_{i,j}
  // iff it is in the label of every descendant.
  void check_stability_literal(const CausalCgs& g) {
    const Cgs& base = g.base();
    const auto& model = g.generated_model();
    const auto rho = oracle::ranks(model);
    std::map<std::string, std::size_t> prop_index;
    for (std::size_t p = 0; p < base.propositions().size(); ++p)
      prop_index[base.propositions()[p]] = p;
    if (rho != g.ranking().rho) stability.fail("ranking differs from the reference ranking");
    for (StateId q = 0; q < base.num_states(); ++q) {
      const int i = g.index(q).i;
      std::vector<StateId> desc;
      std::vector<StateId> todo{q};
      while (!todo.empty()) {
        StateId c = todo.back();
        todo.pop_back();
        for (std::size_t k = 0; k < base.num_move_vectors(c); ++k) {
          StateId n = base.transition_by_index(c, k);
          if (n == c) continue;
          desc.push_back(n);
          todo.push_back(n);
        }
      }
      if (desc.empty()) continue;
      for (const auto& [x, r] : rho) {
        if (r != i) continue;
        for (Symbol s : model.variable(x).domain) {
          const std::size_t p = prop_index.at(model.name(x) + "=" + model.text(s));
          const bool here = base.label(q).count(p) > 0;
          const bool everywhere = std::all_of(desc.begin(), desc.end(), [&](StateId d) {
            return base.label(d).count(p) > 0;
          });
          if (here != everywhere)
            stability.fail(base.state_name(q) + " " + model.name(x) + "=" + model.text(s));
        }
      }
    }
  }
};

Audit audit;

// ---------------------------------------------------------------------------
// 1. Vehicle golden suite

// Labels written as in the figure: a name is X=1, !name is X=0.
std::map<std::string, std::string> spell(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  for (std::string w; in >> w;) {
    if (w[0] == '!')
      out[w.substr(1)] = "0";
    else
      out[w] = "1";
  }
  return out;
}

void expect_label(Outcome& o, const CausalCgs& g, const std::string& state,
                  const std::string& text) {
  const auto& model = g.model();
  StateId q = kNoState;
  for (StateId s = 0; s < g.num_states(); ++s)
    if (g.base().state_name(s) == state) q = s;
  if (q == kNoState) return o.fail("no state " + state);
  std::map<std::string, std::string> got;
  for (VarId v : model.endogenous()) got[model.name(v)] = model.text(g.label(q)[v]);
  if (got != spell(text)) o.fail("label of " + state + " differs from {" + text + "}");
  // The proposition set must carry the same facts.
  for (const auto& [name, value] : spell(text)) {
    const auto& props = g.base().propositions();
    auto it = std::find(props.begin(), props.end(), name + "=" + value);
    if (it == props.end() || !g.base().label(q).count(static_cast<std::size_t>(it - props.begin())))
      o.fail(state + " lacks proposition " + name + "=" + value);
  }
}

Outcome criterion_golden() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto model = fixtures::vehicle_model();
  const auto ctx = fixtures::vehicle_context(model);
  const auto g = build_causal_cgs(model, ctx);
  audit.add(g);

  expect_label(o, g, "q_0_0", "O !Att HD ODS !DA !Col");
  if (g.num_states() != 13) o.fail(std::to_string(g.num_states()) + " states, expected 13");

  // The transition table, agents in the order HD, ODS, DA; "-" is the no-op
  // of an agent that does not act at the state.
  const std::set<std::tuple<std::string, std::string, std::string>> table = {
      {"q_0_0", "0,0,-", "q_1_0"}, {"q_0_0", "0,1,-", "q_1_1"},
      {"q_0_0", "1,0,-", "q_1_2"}, {"q_0_0", "1,1,-", "q_1_3"},
      {"q_1_0", "-,-,0", "q_2_0"}, {"q_1_0", "-,-,1", "q_2_1"},
      {"q_1_1", "-,-,0", "q_2_2"}, {"q_1_1", "-,-,1", "q_2_3"},
      {"q_1_2", "-,-,0", "q_2_4"}, {"q_1_2", "-,-,1", "q_2_5"},
      {"q_1_3", "-,-,0", "q_2_6"}, {"q_1_3", "-,-,1", "q_2_7"},
      {"q_2_0", "-,-,-", "q_2_0"}, {"q_2_1", "-,-,-", "q_2_1"},
      {"q_2_2", "-,-,-", "q_2_2"}, {"q_2_3", "-,-,-", "q_2_3"},
      {"q_2_4", "-,-,-", "q_2_4"}, {"q_2_5", "-,-,-", "q_2_5"},
      {"q_2_6", "-,-,-", "q_2_6"}, {"q_2_7", "-,-,-", "q_2_7"},
  };
  std::set<std::tuple<std::string, std::string, std::string>> got;
  const Cgs& base = g.base();
  for (StateId q = 0; q < base.num_states(); ++q)
    for (const auto& v : legal_move_vectors(base, q)) {
      std::string vec;
      for (std::size_t k = 0; k < v.size(); ++k)
        vec += (k ? "," : "") + (v[k].is_noop() ? std::string("-") : model.text(v[k].value()));
      got.emplace(base.state_name(q), vec, base.state_name(base.transition(q, v)));
    }
  if (got != table)
    o.fail("transition table differs (" + std::to_string(got.size()) + " transitions)");
  if (base.num_transitions() != table.size())
    o.fail(std::to_string(base.num_transitions()) + " transitions defined");

  expect_label(o, g, "q_1_0", "O !Att !HD !ODS !DA !Col");
  expect_label(o, g, "q_2_1", "O !Att !HD !ODS DA !Col");
  const char* leaves[] = {
      "O !Att !HD !ODS !DA !Col", "O !Att !HD !ODS DA !Col", "O !Att !HD ODS !DA !Col",
      "O !Att !HD ODS DA !Col",   "O !Att HD !ODS !DA !Col", "O !Att HD !ODS DA Col",
      "O !Att HD ODS !DA !Col",   "O !Att HD ODS DA Col",
  };
  for (int j = 0; j < 8; ++j) expect_label(o, g, "q_2_" + std::to_string(j), leaves[j]);

  const double secs = seconds_since(t0);
  if (secs >= kGoldenSeconds) o.fail("took " + std::to_string(secs) + " s");
  o.detail = "13 states, " + std::to_string(table.size()) + " transitions, 11 labels checked";
  return o;
}

// ---------------------------------------------------------------------------
// 2. Cause reproduction through the command line

Outcome criterion_causes() {
  Outcome o;
  const std::string file = std::string(CAUSAL_CGS_MODELS_DIR) + "/vehicle.scm";
  std::ostringstream out, err;
  const int code = cli::run_cli(
      {"causes", file, "--outcome", "no_collision", "--agents-only", "--format", "json"}, out,
      err);
  if (code != 0) {
    o.fail("exit code " + std::to_string(code) + ": " + err.str());
    return o;
  }
  const json report = json::parse(out.str());
  const json expected = json::parse(R"([
    {"cause": {"ODS": "1"}, "witness": {}, "intervention": {"ODS": "0"}},
    {"cause": {"DA": "0"}, "witness": {}, "intervention": {"DA": "1"}}
  ])");
  json got = json::array();
  for (const auto& c : report.at("causes"))
    got.push_back({{"cause", c.at("cause")},
                   {"witness", c.at("witness")},
                   {"intervention", c.at("intervention")}});
  if (got != expected) o.fail("causes: " + got.dump());

  // Each intervention flips the collision in the reference evaluator.
  const auto model = fixtures::vehicle_model();
  const auto ctx = fixtures::vehicle_context(model);
  for (const auto& c : expected) {
    Intervention i;
    for (const auto& [name, value] : c.at("intervention").items())
      i[model.id(name)] = *model.symbol(value.get<std::string>());
    if (oracle::solve(model, ctx, i)[model.id("Col")] != kTrue)
      o.fail(c.at("intervention").dump() + " does not produce a collision");
  }
  o.detail = "{ODS=1} via [ODS<-0], {DA=0} via [DA<-1], both but-for";
  return o;
}

// ---------------------------------------------------------------------------
// 3. Reachability under the causal strategy profile

Outcome criterion_profile_play() {
  Outcome o;
  const auto model = fixtures::vehicle_model();
  const auto ctx = fixtures::vehicle_context(model);
  const auto g = build_causal_cgs(model, ctx);
  audit.add(g);
  const auto profile = causal_profile(model, ctx, g).profile();
  const auto history = play(g.base(), g.root(), profile);
  const std::string end = g.base().state_name(history.back());
  if (end != "q_2_6") o.fail("play ends in " + end);
  const auto world = oracle::solve(model, ctx);
  if (std::vector<Symbol>(g.label(history.back()).values().begin(),
                          g.label(history.back()).values().end()) != world)
    o.fail(end + " does not correspond to (M, u)");
  expect_label(o, g, "q_2_6", "O !Att HD ODS !DA !Col");
  o.detail = "q_0_0 -> q_1_3 -> q_2_6";
  if (history.size() != 3 || g.base().state_name(history[1]) != "q_1_3")
    o.fail("unexpected path");
  return o;
}

// ---------------------------------------------------------------------------
// 4. Deviation play-outs

Outcome criterion_deviation() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(kDeviationSeed);
  std::size_t plays = 0, settings = 0;
  for (std::size_t k = 0; k < kDeviationModels; ++k) {
    const auto model = random_model(rng);
    for (const auto& ctx : all_contexts(model)) {
      ++settings;
      const auto g = build_causal_cgs(model, ctx);
      audit.add(g);
      for (const auto& coalition : oracle::subsets(model.agents())) {
        for (const auto& values : oracle::settings(model, coalition)) {
          std::vector<FixedActionStrategy> fixed;
          Intervention i;
          for (std::size_t a = 0; a < coalition.size(); ++a) {
            fixed.push_back({coalition[a], values[a]});
            i[coalition[a]] = values[a];
          }
          ++plays;
          try {
            const StateIndex leaf = play_deviation(g, model, ctx, fixed);
            const auto& label = g.label(leaf);
            const auto expected = oracle::solve(model, ctx, i);
            if (std::vector<Symbol>(label.values().begin(), label.values().end()) != expected)
              o.fail("model " + std::to_string(k) + " " + format_intervention(model, i));
          } catch (const std::exception& e) {
            o.fail("model " + std::to_string(k) + ": " + e.what());
          }
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  if (secs >= kDeviationSeconds) o.fail("took " + std::to_string(secs) + " s");
  o.detail = std::to_string(kDeviationModels) + " models, " + std::to_string(settings) +
             " settings, " + std::to_string(plays) + " plays";
  return o;
}

// ---------------------------------------------------------------------------
// 5. Bridge equivalence against the reference cause conditions

Outcome criterion_bridge() {
  Outcome o;
  std::mt19937_64 rng(kBridgeSeed);
  std::size_t verdicts = 0;
  for (std::size_t k = 0; k < kBridgeModels; ++k) {
    const auto model = random_model(rng);
    if (model.agents().size() > 3) {
      o.fail("generator produced more than three agents");
      continue;
    }
    for (const auto& ctx : all_contexts(model)) {
      BridgeEngine engine(model, ctx);
      oracle::Setting ref(model, ctx);
      for (VarId y : model.endogenous()) {
        const auto outcome = EventFormula::event(y, ref.actual()[y]);
        for (const auto& vars : oracle::subsets(model.agents())) {
          if (vars.empty()) continue;
          CandidateCause cand{vars, {}};
          for (VarId v : vars) cand.actual_values.push_back(ref.actual()[v]);
          const bool ac3 = ref.ac3(vars, outcome);
          for (auto kind : {BridgeKind::cause_iff_strategy, BridgeKind::superset_strategy}) {
            const auto& pool = kind == BridgeKind::cause_iff_strategy ? model.endogenous()
                                                                      : model.agents();
            std::vector<VarId> rest;
            for (VarId v : pool)
              if (std::find(vars.begin(), vars.end(), v) == vars.end()) rest.push_back(v);
            for (const auto& w : oracle::subsets(rest)) {
              ++verdicts;
              const auto v = kind == BridgeKind::cause_iff_strategy
                                 ? engine.cause_iff_strategy(cand, w, outcome)
                                 : engine.superset_strategy(cand, w, outcome);
              const bool ac2 = ref.ac2(vars, w, outcome);
              const bool cause = ac2 && ac3;
              std::string where = "model " + std::to_string(k) + " " +
                                  std::string(to_string(kind)) + " " +
                                  format_formula(model, outcome);
              if (!v.agree) o.fail(where + ": sides disagree");
              if (v.cause_side.has_value() != cause) o.fail(where + ": cause side vs reference");
              if (v.ac2_with_witness != ac2) o.fail(where + ": AC2 vs reference");
              if (v.strategy_side.coalition_wins != ac2)
                o.fail(where + ": coalition vs reference AC2");
              if (v.strategy_positive() != cause) o.fail(where + ": strategy side vs reference");
            }
          }
        }
      }
      engine.for_each_cgs([](const CausalCgs& g) { audit.add(g); });
    }
  }
  o.detail = std::to_string(kBridgeModels) + " models, " + std::to_string(verdicts) + " verdicts";
  return o;
}

// ---------------------------------------------------------------------------
// 8. Cause enumeration against the truth-table reference

Outcome criterion_oracle() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t models = 0, checks = 0;
  for (int n = 1; n <= kOracleMaxEndogenous; ++n) {
    const int max_inputs = n < 4 ? n : kOracleFourVarInputs;
    oracle::for_each_table_model(n, max_inputs, [&](const oracle::TableModel& tm) {
      ++models;
      const auto model = to_causal_model(tm);
      for (int u = 0; u <= 1; ++u) {
        const oracle::TableSetting ref(tm, u);
        const Context ctx{{0, u ? kTrue : kFalse}};
        for (int t = 0; t < n; ++t) {
          ++checks;
          const int value = ref.actual()[t + 1];
          const auto outcome =
              EventFormula::event(static_cast<VarId>(t + 1), value ? kTrue : kFalse);
          std::set<oracle::TableCause> got;
          for (const auto& c : enumerate_causes(model, ctx, outcome).causes) {
            oracle::TableCause tc;
            for (std::size_t k = 0; k < c.cause.vars.size(); ++k) {
              tc.vars.push_back(static_cast<int>(c.cause.vars[k]) - 1);
              tc.values.push_back(static_cast<int>(c.cause.actual_values[k]));
            }
            got.insert(std::move(tc));
          }
          if (got != ref.causes(t, value))
            o.fail("n=" + std::to_string(n) + " model #" + std::to_string(models) +
                   " u=" + std::to_string(u) + " outcome X" + std::to_string(t + 1));
        }
      }
    });
  }
  const double secs = seconds_since(t0);
  if (secs >= kOracleSeconds) o.fail("took " + std::to_string(secs) + " s");
  o.detail = std::to_string(models) + " models, " + std::to_string(checks) + " outcomes";
  return o;
}

}  // namespace

int main() {
  struct Row {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  std::vector<Row> rows = {
      {1, "vehicle golden suite", criterion_golden},
      {2, "cause reproduction", criterion_causes},
      {3, "causal profile reaches q_2_6", criterion_profile_play},
      {4, "deviation play-outs", criterion_deviation},
      {5, "bridge equivalence", criterion_bridge},
      {6, "stability on every built CGS",
       [] {
         Outcome o = audit.stability;
         o.detail = std::to_string(audit.cgs) + " CGS, " + std::to_string(audit.states) + " states";
         if (audit.cgs == 0) o.fail("no CGS audited");
         return o;
       }},
      {7, "size bound on every built CGS",
       [] {
         Outcome o = audit.size;
         o.detail = std::to_string(audit.cgs) + " CGS";
         if (audit.cgs == 0) o.fail("no CGS audited");
         return o;
       }},
      {8, "cause enumeration matches reference", criterion_oracle},
  };
  bool all = true;
  for (const auto& row : rows) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = row.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    all = all && o.pass;
    std::printf("%s criterion %d (%s): %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", row.id, row.name,
                o.detail.c_str(), seconds_since(t0));
    for (const auto& p : o.problems) std::printf("    %s\n", p.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
