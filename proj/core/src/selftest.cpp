#include "causal_cgs/selftest.hpp"

#include <random>
#include <sstream>

#include "causal_cgs/cgs_builder.hpp"
#include "causal_cgs/hp_causality.hpp"
#include "causal_cgs/random_model.hpp"
#include "causal_cgs/strategy_bridge.hpp"
#include "json.hpp"

namespace causal_cgs {

namespace {

constexpr std::size_t kMaxExamples = 5;

const char* const kCheckNames[] = {
    "size-bound", "stability", "leaf-correspondence", "tree-shape",
    "causal-profile", "deviation-play", "cause-iff-strategy", "superset-strategy",
};

void structural_checks(const CausalCgs& cgs, const std::string& tag, SelftestReport& r) {
  const std::string where =
      tag + " gen " + format_intervention(cgs.model(), cgs.origin().generating);
  auto size = size_report(cgs);
  r.tally("size-bound").record(size.within_bound, where + ": " + std::to_string(size.states) +
                                                      " states, bound " +
                                                      std::to_string(size.bound));
  auto note = [&](const char* name, const std::vector<std::string>& problems) {
    r.tally(name).record(problems.empty(), where + ": " + (problems.empty() ? "" : problems[0]));
  };
  note("stability", check_stability(cgs));
  note("leaf-correspondence", check_leaf_correspondence(cgs));
  note("tree-shape", check_tree_shape(cgs));
}

}  // namespace

void CheckTally::record(bool ok, const std::string& what) {
  ++checked;
  if (ok) return;
  ++failed;
  if (examples.size() < kMaxExamples) examples.push_back(what);
}

bool SelftestReport::ok() const {
  for (const auto& c : checks)
    if (c.failed) return false;
  return true;
}

CheckTally& SelftestReport::tally(const std::string& name) {
  for (auto& c : checks)
    if (c.name == name) return c;
  checks.push_back({name, 0, 0, {}});
  return checks.back();
}

void check_causal_setting(const CausalModel& model, const Context& context,
                          const std::string& tag, SelftestReport& r) {
  // Register every tally up front; references below must stay valid.
  for (const char* name : kCheckNames) r.tally(name);
  ++r.settings;
  BridgeEngine engine(model, context);
  const CausalCgs& cgs = engine.cgs();
  const auto actual = evaluate(model, context);

  // Each acting agent plays its equation's value under the path so far.
  {
    const auto& prof = engine.profile();
    bool ok = true;
    for (StateId q = 0; q < cgs.num_states() && ok; ++q) {
      const auto values = evaluate(model, context, cgs.path(q).as_intervention());
      for (AgentId a = 0; a < cgs.agents().size(); ++a) {
        const Move m = prof.choice(a, q);
        if (cgs.rank_of_agent(a) == cgs.index(q).i + 1)
          ok = ok && !m.is_noop() && m.value() == values[cgs.agents()[a]];
        else
          ok = ok && m.is_noop();
      }
    }
    r.tally("causal-profile").record(ok, tag);
  }

  // Every coalition and fixed assignment; generic play and the engine's walk
  // must reach the same leaf.
  auto& deviation = r.tally("deviation-play");
  for (const auto& coalition : subsets_by_size(model.agents(), 0, model.agents().size())) {
    for (const auto& setting : all_settings(model, coalition)) {
      std::vector<FixedActionStrategy> fixed;
      Intervention as_map;
      for (std::size_t k = 0; k < coalition.size(); ++k) {
        fixed.push_back({coalition[k], setting[k]});
        as_map[coalition[k]] = setting[k];
      }
      const std::string what = tag + " fixed " + format_intervention(model, as_map);
      try {
        StateIndex leaf = play_deviation(cgs, model, context, fixed);
        deviation.record(cgs.id(leaf) == engine.deviation_leaf({}, as_map), what);
      } catch (const std::logic_error& e) {
        deviation.record(false, what + ": " + e.what());
      }
    }
  }

  // Bridge verdicts for every primitive event that holds, every agent
  // candidate and every admissible witness.
  auto& iff = r.tally("cause-iff-strategy");
  auto& superset = r.tally("superset-strategy");
  for (VarId y : model.endogenous()) {
    const auto outcome = EventFormula::event(y, actual[y]);
    for (const auto& vars : subsets_by_size(model.agents(), 1, model.agents().size())) {
      const auto cand = actual_candidate(model, context, vars);
      Intervention cause;
      for (std::size_t k = 0; k < vars.size(); ++k) cause[vars[k]] = cand.actual_values[k];
      for (auto kind : {BridgeKind::cause_iff_strategy, BridgeKind::superset_strategy}) {
        auto& tally = kind == BridgeKind::cause_iff_strategy ? iff : superset;
        auto describe = [&](const BridgeVerdict* v) {
          std::string what = tag + " outcome " + format_formula(model, outcome) + " cause " +
                             format_intervention(model, cause);
          if (!v) return what;
          what += " witness {";
          for (std::size_t k = 0; k < v->witness.vars.size(); ++k)
            what += (k ? "," : "") + model.name(v->witness.vars[k]);
          return what + "}";
        };
        try {
          for (const auto& v : engine.all_witnesses(kind, cand, outcome))
            tally.record(v.agree, v.agree ? std::string() : describe(&v));
        } catch (const std::logic_error& e) {
          tally.record(false, describe(nullptr) + ": " + e.what());
        }
      }
    }
  }

  engine.for_each_cgs([&](const CausalCgs& g) { structural_checks(g, tag, r); });
  r.cgs_built += engine.cgs_built();
}

SelftestReport run_selftest(const SelftestOptions& options) {
  SelftestReport r;
  r.models = options.models;
  r.seed = options.seed;
  for (const char* name : kCheckNames) r.tally(name);  // fixed report order
  std::mt19937_64 rng(options.seed);
  for (std::size_t k = 0; k < options.models; ++k) {
    const CausalModel model = random_model(rng);
    const auto contexts = all_contexts(model);
    for (std::size_t c = 0; c < contexts.size(); ++c)
      check_causal_setting(model, contexts[c],
                           "model " + std::to_string(k) + " context " + std::to_string(c), r);
  }
  return r;
}

std::string format_report(const SelftestReport& r, bool color) {
  const char* green = color ? "\033[32m" : "";
  const char* red = color ? "\033[31m" : "";
  const char* reset = color ? "\033[0m" : "";
  std::ostringstream out;
  out << "selftest seed " << r.seed << ", " << r.models << " models, " << r.settings
      << " causal settings, " << r.cgs_built << " CGS built\n";
  for (const auto& c : r.checks) {
    out << (c.failed ? red : green) << (c.failed ? "FAIL" : "ok  ") << reset << " " << c.name
        << ": " << (c.checked - c.failed) << "/" << c.checked << "\n";
    for (const auto& e : c.examples) out << "       " << e << "\n";
  }
  out << (r.ok() ? "all checks passed\n" : "some checks failed\n");
  return out.str();
}

std::string report_json(const SelftestReport& r) {
  nlohmann::ordered_json doc;
  doc["seed"] = r.seed;
  doc["models"] = r.models;
  doc["settings"] = r.settings;
  doc["cgs_built"] = r.cgs_built;
  doc["ok"] = r.ok();
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"checked", c.checked},
                      {"failed", c.failed},
                      {"examples", c.examples}});
  doc["checks"] = std::move(checks);
  return doc.dump(2) + "\n";
}

}  // namespace causal_cgs
