#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "causal_cgs/causal_graph.hpp"
#include "causal_cgs/cgs_builder.hpp"
#include "causal_cgs/dsl.hpp"
#include "causal_cgs/export.hpp"
#include "causal_cgs/hp_causality.hpp"
#include "causal_cgs/selftest.hpp"
#include "causal_cgs/strategy_bridge.hpp"

namespace causal_cgs::cli {

namespace {

using json = nlohmann::ordered_json;

// Errors in command arguments that only show up once the model is loaded.
struct ArgumentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool color_enabled() {
  const char* v = std::getenv("CAUSAL_CGS_COLOR");
  return v && std::string(v) == "1";
}

struct Paint {
  bool on;
  std::string operator()(const char* code, const std::string& s) const {
    return on ? std::string("\033[") + code + "m" + s + "\033[0m" : s;
  }
};

struct Session {
  std::ostream& out;
  std::ostream& err;
  std::string format = "text";
  Paint paint{color_enabled()};

  bool as_json() const { return format == "json"; }
};

std::optional<dsl::LoadedModel> load(Session& s, const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  auto result = dsl::load_model(buf.str());
  if (result.loaded) return std::move(result.loaded);
  if (s.as_json()) {
    json diags = json::array();
    for (const auto& d : result.diagnostics)
      diags.push_back({{"line", d.loc.line},
                       {"column", d.loc.column},
                       {"kind", d.kind},
                       {"variable", d.variable},
                       {"message", d.message}});
    s.out << json{{"file", path}, {"ok", false}, {"diagnostics", diags}}.dump(2) << "\n";
  } else {
    for (const auto& d : result.diagnostics)
      s.err << path << ":" << s.paint("31", dsl::format_diagnostic(d)) << "\n";
  }
  return std::nullopt;
}

const dsl::NamedOutcome& find_outcome(const dsl::LoadedModel& m, const std::string& name) {
  if (const auto* o = m.outcome(name)) return *o;
  std::string known;
  for (const auto& o : m.outcomes) known += (known.empty() ? "" : ", ") + o.name;
  throw ArgumentError("no outcome named '" + name + "'" +
                      (known.empty() ? std::string(" (the file defines none)")
                                     : " (known: " + known + ")"));
}

std::pair<VarId, Symbol> parse_setting(const CausalModel& model, const std::string& text) {
  auto eq = text.find('=');
  if (eq == std::string::npos) throw ArgumentError("expected VAR=VAL, got '" + text + "'");
  const std::string name = text.substr(0, eq);
  const std::string value = text.substr(eq + 1);
  auto v = model.find(name);
  if (!v) throw ArgumentError("unknown variable '" + name + "'");
  auto sym = model.symbol(value);
  if (!sym || !model.variable(*v).in_domain(*sym))
    throw ArgumentError("'" + value + "' is not in the domain of " + name);
  return {*v, *sym};
}

VarId parse_variable(const CausalModel& model, const std::string& name) {
  auto v = model.find(name);
  if (!v) throw ArgumentError("unknown variable '" + name + "'");
  return *v;
}

json settings_json(const CausalModel& m, const std::vector<VarId>& vars,
                   const std::vector<Symbol>& values) {
  json out = json::object();
  for (std::size_t k = 0; k < vars.size(); ++k) out[m.name(vars[k])] = m.text(values[k]);
  return out;
}

std::string settings_text(const CausalModel& m, const std::vector<VarId>& vars,
                          const std::vector<Symbol>& values) {
  std::string out = "{";
  for (std::size_t k = 0; k < vars.size(); ++k)
    out += (k ? ", " : "") + m.name(vars[k]) + "=" + m.text(values[k]);
  return out + "}";
}

std::string names_text(const CausalModel& m, const std::vector<VarId>& vars) {
  std::string out = "{";
  for (std::size_t k = 0; k < vars.size(); ++k) out += (k ? ", " : "") + m.name(vars[k]);
  return out + "}";
}

json intervention_json(const CausalModel& m, const Intervention& i) {
  json out = json::object();
  for (const auto& [v, s] : i) out[m.name(v)] = m.text(s);
  return out;
}

void write_file(std::ostream& out, const std::string& path, const std::string& text) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("cannot write " + path);
  f << text;
}

// ---------------------------------------------------------------------------

int cmd_validate(Session& s, const std::string& path) {
  auto m = load(s, path);
  if (!m) return kDiagnostics;
  if (s.as_json()) {
    s.out << json{{"file", path}, {"ok", true}, {"diagnostics", json::array()}}.dump(2) << "\n";
  } else {
    s.out << path << ": " << s.paint("32", "ok") << " (" << m->model.num_variables()
          << " variables, " << m->model.agents().size() << " agents, "
          << m->outcomes.size() << " outcomes)\n";
  }
  return kOk;
}

int cmd_rank(Session& s, const std::string& path) {
  auto m = load(s, path);
  if (!m) return kDiagnostics;
  const auto& model = m->model;
  const auto levels = variable_levels(build_network(model), model);
  const auto ranking = agent_ranking(model, levels);
  if (s.as_json()) {
    json vars = json::array();
    for (VarId v : model.endogenous())
      vars.push_back({{"name", model.name(v)},
                      {"level", levels.at(v)},
                      {"rank", ranking.rank(v)},
                      {"agent", model.is_agent(v)}});
    s.out << json{{"n_max", ranking.n_max}, {"variables", vars}}.dump(2) << "\n";
    return kOk;
  }
  std::size_t width = 10;
  for (VarId v : model.endogenous()) width = std::max(width, model.name(v).size() + 2);
  s.out << std::left << std::setw(static_cast<int>(width)) << "variable" << std::setw(7)
        << "level" << std::setw(6) << "rank"
        << "agent\n";
  for (VarId v : model.endogenous())
    s.out << std::setw(static_cast<int>(width)) << model.name(v) << std::setw(7) << levels.at(v)
          << std::setw(6) << ranking.rank(v) << (model.is_agent(v) ? "yes" : "") << "\n";
  s.out << "n_max = " << ranking.n_max << "\n";
  return kOk;
}

int cmd_build(Session& s, const std::string& path, const std::vector<std::string>& intervene,
              const std::string& dot_path, const std::string& json_path) {
  auto m = load(s, path);
  if (!m) return kDiagnostics;
  const auto& model = m->model;
  Intervention gen;
  for (const auto& t : intervene) {
    auto [v, sym] = parse_setting(model, t);
    if (!model.is_endogenous(v)) throw ArgumentError(model.name(v) + " is not endogenous");
    gen[v] = sym;
  }
  const auto cgs = build_causal_cgs(model, m->context, gen);
  const auto size = size_report(cgs);
  const std::string exported = export_json(cgs);
  if (!dot_path.empty()) write_file(s.out, dot_path, export_dot(cgs));
  if (!json_path.empty()) write_file(s.out, json_path, exported);
  if (s.as_json()) {
    s.out << json{{"states", size.states},
                  {"transitions", size.transitions},
                  {"leaves", size.leaves},
                  {"bound", size.bound},
                  {"within_bound", size.within_bound},
                  {"intervention", intervention_json(model, gen)},
                  {"digest", digest(exported)}}
                 .dump(2)
          << "\n";
    return kOk;
  }
  s.out << "causal CGS of " << path;
  if (!gen.empty()) s.out << " under " << format_intervention(model, gen);
  s.out << "\n  states:      " << size.states << "\n  transitions: " << size.transitions
        << "\n  leaves:      " << size.leaves << "\n  bound:       " << size.bound + 1
        << (size.within_bound ? "" : "  (exceeded)") << "\n  digest:      " << digest(exported)
        << "\n";
  for (StateId q = 0; q < cgs.num_states(); ++q)
    s.out << "  " << std::left << std::setw(8) << cgs.base().state_name(q)
          << format_assignment(model, cgs.label(q), true) << "\n";
  return kOk;
}

int cmd_causes(Session& s, const std::string& path, const std::string& outcome_name,
               bool agents_only, bool butfor, bool all_witnesses) {
  auto m = load(s, path);
  if (!m) return kDiagnostics;
  const auto& model = m->model;
  const auto& outcome = find_outcome(*m, outcome_name);
  EnumerationOptions opts;
  opts.restrict_to_agents = agents_only;
  opts.butfor_only = butfor;
  opts.all_witnesses = all_witnesses;
  const auto result = enumerate_causes(model, m->context, outcome.formula, opts);
  if (s.as_json()) {
    json causes = json::array();
    for (const auto& c : result.causes)
      causes.push_back({{"cause", settings_json(model, c.cause.vars, c.cause.actual_values)},
                        {"witness", settings_json(model, c.witness.vars, c.witness.values)},
                        {"alternative", settings_json(model, c.cause.vars, c.alternative)},
                        {"intervention", intervention_json(model, c.intervention())},
                        {"butfor", c.witness.vars.empty()}});
    s.out << json{{"outcome", outcome.name},
                  {"formula", format_formula(model, outcome.formula)},
                  {"causes", causes},
                  {"truncated", result.truncated}}
                 .dump(2)
          << "\n";
    return kOk;
  }
  s.out << "causes of " << outcome.name << " (" << format_formula(model, outcome.formula)
        << "):\n";
  if (result.causes.empty()) s.out << "  none\n";
  for (const auto& c : result.causes) {
    s.out << "  " << s.paint("1", settings_text(model, c.cause.vars, c.cause.actual_values))
          << "  witness " << settings_text(model, c.witness.vars, c.witness.values)
          << "  intervention " << format_intervention(model, c.intervention())
          << (c.witness.vars.empty() ? "  but-for" : "") << "\n";
  }
  return kOk;
}

std::string leaf_text(const std::optional<StateIndex>& leaf) {
  return leaf ? state_name(*leaf) : "-";
}

json verdict_json(const CausalModel& model, const BridgeVerdict& v) {
  const auto& ev = v.strategy_side;
  json strategy{{"coalition", json::array()},
                {"generating", intervention_json(model, ev.generating)},
                {"coalition_wins", ev.coalition_wins},
                {"minimal", ev.minimal},
                {"winning", ev.winning ? intervention_json(model, *ev.winning) : json(nullptr)},
                {"leaf", ev.reached_leaf ? json(state_name(*ev.reached_leaf)) : json(nullptr)}};
  for (VarId a : ev.coalition) strategy["coalition"].push_back(model.name(a));
  if (ev.blocking_subset) {
    json sub = json::array(), wit = json::array();
    for (VarId x : *ev.blocking_subset) sub.push_back(model.name(x));
    for (VarId x : *ev.blocking_witness) wit.push_back(model.name(x));
    strategy["blocking"] = {{"coalition", sub}, {"witness", wit}};
  }
  json cause = nullptr;
  if (v.cause_side)
    cause = {{"alternative",
              settings_json(model, v.cause_side->cause.vars, v.cause_side->alternative)},
             {"intervention", intervention_json(model, v.cause_side->intervention())}};
  return {{"kind", std::string(to_string(v.kind))},
          {"candidate", settings_json(model, v.candidate.vars, v.candidate.actual_values)},
          {"witness", settings_json(model, v.witness.vars, v.witness.values)},
          {"ac1", v.ac1},
          {"ac2_with_witness", v.ac2_with_witness},
          {"cause", cause},
          {"strategy", strategy},
          {"strategy_positive", v.strategy_positive()},
          {"agree", v.agree}};
}

int cmd_bridge(Session& s, const std::string& path, const std::string& outcome_name,
               const std::vector<std::string>& cause_args,
               const std::optional<std::vector<std::string>>& witness_args,
               const std::string& kind_arg) {
  auto m = load(s, path);
  if (!m) return kDiagnostics;
  const auto& model = m->model;
  const auto& outcome = find_outcome(*m, outcome_name);

  std::vector<CandidateCause> candidates;
  if (!cause_args.empty()) {
    std::vector<std::pair<VarId, Symbol>> settings;
    for (const auto& t : cause_args) settings.push_back(parse_setting(model, t));
    std::sort(settings.begin(), settings.end());
    CandidateCause c;
    for (auto [v, sym] : settings) {
      c.vars.push_back(v);
      c.actual_values.push_back(sym);
    }
    candidates.push_back(std::move(c));
  } else {
    for (const auto& vars : subsets_by_size(model.agents(), 1, model.agents().size()))
      candidates.push_back(actual_candidate(model, m->context, vars));
  }
  std::vector<BridgeKind> kinds;
  if (kind_arg != "superset") kinds.push_back(BridgeKind::cause_iff_strategy);
  if (kind_arg != "iff") kinds.push_back(BridgeKind::superset_strategy);

  BridgeEngine engine(model, m->context);
  std::vector<BridgeVerdict> verdicts;
  for (const auto& c : candidates) {
    for (auto kind : kinds) {
      if (witness_args) {
        std::vector<VarId> w;
        for (const auto& name : *witness_args) w.push_back(parse_variable(model, name));
        verdicts.push_back(kind == BridgeKind::cause_iff_strategy
                               ? engine.cause_iff_strategy(c, w, outcome.formula)
                               : engine.superset_strategy(c, w, outcome.formula));
      } else {
        for (auto& v : engine.all_witnesses(kind, c, outcome.formula))
          verdicts.push_back(std::move(v));
      }
    }
  }

  const bool all_agree =
      std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.agree; });
  if (s.as_json()) {
    json list = json::array();
    for (const auto& v : verdicts) list.push_back(verdict_json(model, v));
    s.out << json{{"outcome", outcome.name}, {"verdicts", list}, {"all_agree", all_agree}}.dump(2)
          << "\n";
  } else {
    s.out << "bridge verdicts for " << outcome.name << " ("
          << format_formula(model, outcome.formula) << "):\n";
    for (const auto& v : verdicts) {
      const auto& ev = v.strategy_side;
      s.out << "  " << std::left << std::setw(19) << to_string(v.kind) << " "
            << settings_text(model, v.candidate.vars, v.candidate.actual_values) << " W="
            << names_text(model, v.witness.vars) << "  cause=" << (v.cause_side ? "yes" : "no")
            << " strategy=" << (v.strategy_positive() ? "yes" : "no");
      if (ev.coalition_wins)
        s.out << " (" << format_intervention(model, *ev.winning) << " reaches "
              << leaf_text(ev.reached_leaf) << (ev.minimal ? "" : ", not minimal") << ")";
      s.out << "  " << (v.agree ? s.paint("32", "agree") : s.paint("31", "DISAGREE")) << "\n";
    }
  }
  return all_agree ? kOk : kDiagnostics;
}

int cmd_selftest(Session& s, std::size_t models, std::uint64_t seed) {
  const auto report = run_selftest({models, seed});
  s.out << (s.as_json() ? report_json(report) : format_report(report, s.paint.on));
  return report.ok() ? kOk : kDiagnostics;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Session s{out, err};
  CLI::App app{"Causal models, actual causes and their concurrent game structures",
               "causal-cgs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "causal-cgs 0.1.0");

  std::string file;
  auto add_common = [&](CLI::App* sub, bool needs_file) {
    if (needs_file) sub->add_option("file", file, "Model file")->required()->check(CLI::ExistingFile);
    sub->add_option("--format", s.format, "Report format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
  };

  auto* validate = app.add_subcommand("validate", "Check a model file");
  add_common(validate, true);

  auto* rank = app.add_subcommand("rank", "Print variable levels and agent ranks");
  add_common(rank, true);

  auto* build = app.add_subcommand("build", "Build the causal CGS and export it");
  add_common(build, true);
  std::vector<std::string> intervene;
  std::string dot_path, json_path;
  build->add_option("--intervene", intervene, "Generating intervention VAR=VAL");
  build->add_option("--dot", dot_path, "Write DOT to PATH ('-' for stdout)");
  build->add_option("--json", json_path, "Write JSON to PATH ('-' for stdout)");

  auto* causes = app.add_subcommand("causes", "Enumerate actual causes of an outcome");
  add_common(causes, true);
  std::string outcome;
  bool agents_only = false, butfor = false, all_witnesses = false;
  causes->add_option("--outcome", outcome, "Outcome name")->required();
  causes->add_flag("--agents-only", agents_only, "Only causes over agent variables");
  causes->add_flag("--butfor", butfor, "Only but-for causes");
  causes->add_flag("--all-witnesses", all_witnesses, "One line per minimal witness");

  auto* bridge = app.add_subcommand("bridge", "Compare causes with coalition strategies");
  add_common(bridge, true);
  std::vector<std::string> cause_args, witness_args;
  std::string kind = "both";
  bridge->add_option("--outcome", outcome, "Outcome name")->required();
  bridge->add_option("--cause", cause_args, "Candidate cause VAR=VAL (default: every agent set)");
  auto* witness_opt = bridge->add_option("--witness", witness_args,
                                         "Witness variables (default: every admissible set)")
                          ->expected(0, -1);
  bridge->add_option("--kind", kind, "Which check to run")
      ->check(CLI::IsMember({"iff", "superset", "both"}))
      ->capture_default_str();

  auto* selftest = app.add_subcommand("selftest", "Run the random-model property suite");
  add_common(selftest, false);
  std::size_t models = 100;
  std::uint64_t seed = 0;
  selftest->add_option("--models", models, "Number of random models")->capture_default_str();
  selftest->add_option("--seed", seed, "Generator seed")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(s, file);
    if (*rank) return cmd_rank(s, file);
    if (*build) return cmd_build(s, file, intervene, dot_path, json_path);
    if (*causes) return cmd_causes(s, file, outcome, agents_only, butfor, all_witnesses);
    if (*bridge) {
      std::optional<std::vector<std::string>> w;
      if (witness_opt->count() > 0) {
        // A bare --witness arrives as one empty string.
        w.emplace();
        for (auto& name : witness_args)
          if (!name.empty()) w->push_back(name);
      }
      return cmd_bridge(s, file, outcome, cause_args, w, kind);
    }
    if (*selftest) return cmd_selftest(s, models, seed);
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDiagnostics;
  }
  return kUsage;
}

}  // namespace causal_cgs::cli
