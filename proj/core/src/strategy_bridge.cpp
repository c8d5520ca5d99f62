#include "causal_cgs/strategy_bridge.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace causal_cgs {

CausalStrategyProfile::CausalStrategyProfile(const CausalCgs& cgs) {
  const auto& model = cgs.generated_model();
  const auto& agents = cgs.agents();
  auto table = std::make_shared<Table>(cgs.num_states(),
                                       std::vector<Move>(agents.size(), Move::noop()));
  std::vector<Symbol> fixed(model.num_variables(), kNoValue);
  for (StateId q = 0; q < cgs.num_states(); ++q) {
    const int i = cgs.index(q).i;
    bool anyone_acts = false;
    for (AgentId a = 0; a < agents.size(); ++a)
      anyone_acts = anyone_acts || cgs.rank_of_agent(a) == i + 1;
    if (!anyone_acts) continue;
    // The path at q holds exactly the actions of the agents ranked below i + 1.
    std::fill(fixed.begin(), fixed.end(), kNoValue);
    for (const auto& [u, s] : cgs.origin().context) fixed[u] = s;
    for (const auto& [v, s] : cgs.path(q).actions) fixed[v] = s;
    const Assignment values = evaluate_fixed(model, fixed);
    for (AgentId a = 0; a < agents.size(); ++a)
      if (cgs.rank_of_agent(a) == i + 1) (*table)[q][a] = Move::of(values[agents[a]]);
  }
  table_ = std::move(table);
}

StrategyProfile CausalStrategyProfile::profile() const {
  StrategyProfile p;
  const std::size_t n = table_->empty() ? 0 : table_->front().size();
  for (AgentId a = 0; a < n; ++a) {
    p.set(a, [t = table_, a](std::span<const StateId> history) {
      return (*t)[history.back()][a];
    });
  }
  return p;
}

CausalStrategyProfile causal_profile(const CausalModel& model, const Context& context,
                                     const CausalCgs& cgs) {
  if (context != cgs.origin().context)
    throw CgsError("causal profile requested for a different context than the CGS");
  if (model.num_variables() != cgs.model().num_variables())
    throw CgsError("causal profile requested for a different model than the CGS");
  return CausalStrategyProfile(cgs);
}

Strategy fixed_action_strategy(const CausalCgs& cgs, const FixedActionStrategy& f) {
  if (!cgs.agent_of(f.agent))
    throw CgsError(cgs.model().name(f.agent) + " is not an agent variable");
  if (!cgs.model().variable(f.agent).in_domain(f.value))
    throw ModelError("value #" + std::to_string(f.value) + " is not in the domain of " +
                     cgs.model().name(f.agent));
  const int acts_at = cgs.ranking().rank(f.agent) - 1;
  auto levels = std::make_shared<std::vector<int>>();
  for (StateId q = 0; q < cgs.num_states(); ++q) levels->push_back(cgs.index(q).i);
  return [levels, acts_at, value = f.value](std::span<const StateId> history) {
    return (*levels)[history.back()] == acts_at ? Move::of(value) : Move::noop();
  };
}

StateIndex play_deviation(const CausalCgs& cgs, const CausalModel& model,
                          const Context& context,
                          const std::vector<FixedActionStrategy>& fixed) {
  StrategyProfile deviating;
  Intervention as_intervention;
  for (const auto& f : fixed) {
    auto a = cgs.agent_of(f.agent);
    if (!a) throw CgsError(model.name(f.agent) + " is not an agent variable");
    if (deviating.covers(*a))
      throw CgsError("agent " + model.name(f.agent) + " is fixed twice");
    deviating.set(*a, fixed_action_strategy(cgs, f));
    as_intervention[f.agent] = f.value;
  }
  auto profile = StrategyProfile::compose(deviating,
                                          causal_profile(model, context, cgs).profile());
  auto history = play(cgs.base(), cgs.root(), profile);
  const StateId leaf = history.back();
  if (!cgs.is_leaf(leaf)) throw std::logic_error("play stopped before a leaf");
  const auto played = intervened_model(model, cgs.origin().generating);
  if (!corresponds(cgs.label(leaf), played, context, as_intervention))
    throw std::logic_error("deviation leaf " + cgs.base().state_name(leaf) +
                           " does not correspond to " +
                           format_intervention(model, as_intervention));
  return cgs.index(leaf);
}

std::string_view to_string(BridgeKind k) {
  switch (k) {
    case BridgeKind::cause_iff_strategy: return "cause-iff-strategy";
    case BridgeKind::superset_strategy: return "superset-strategy";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------

BridgeEngine::BridgeEngine(CausalModel model, Context context)
    : model_(std::move(model)), context_(std::move(context)) {
  actual_ = evaluate(model_, context_);
}

BridgeEngine::Entry& BridgeEngine::entry(const Intervention& generating) {
  auto it = cache_.find(generating);
  if (it == cache_.end()) {
    Entry e;
    e.cgs = std::make_unique<CausalCgs>(build_causal_cgs(model_, context_, generating));
    e.profile = std::make_unique<CausalStrategyProfile>(*e.cgs);
    it = cache_.emplace(generating, std::move(e)).first;
  }
  return it->second;
}

const CausalCgs& BridgeEngine::cgs(const Intervention& generating) {
  return *entry(generating).cgs;
}

const CausalStrategyProfile& BridgeEngine::profile(const Intervention& generating) {
  return *entry(generating).profile;
}

StateId BridgeEngine::deviation_leaf(const Intervention& generating,
                                     const Intervention& fixed) {
  auto key = std::make_pair(generating, fixed);
  if (auto it = leaves_.find(key); it != leaves_.end()) return it->second;
  Entry& e = entry(generating);
  const CausalCgs& g = *e.cgs;
  StateId q = g.root();
  MoveVector v(g.agents().size(), Move::noop());
  while (!g.is_leaf(q)) {
    const int i = g.index(q).i;
    for (AgentId a = 0; a < g.agents().size(); ++a) {
      v[a] = e.profile->choice(a, q);
      if (g.rank_of_agent(a) != i + 1) continue;
      if (auto f = fixed.find(g.agents()[a]); f != fixed.end()) v[a] = Move::of(f->second);
    }
    q = g.base().transition(q, v);
  }
  leaves_.emplace(std::move(key), q);
  return q;
}

BridgeEngine::OutcomeState& BridgeEngine::outcome_state(const EventFormula& outcome) {
  auto key = format_formula(model_, outcome);
  auto it = outcomes_.find(key);
  if (it == outcomes_.end()) {
    OutcomeState os{outcome, std::make_unique<CauseSearch>(model_, context_, outcome), {}};
    it = outcomes_.emplace(std::move(key), std::move(os)).first;
  }
  return it->second;
}

std::optional<Intervention> BridgeEngine::coalition_wins(OutcomeState& os,
                                                         const Intervention& generating,
                                                         const std::vector<VarId>& choosers,
                                                         const Intervention& pinned) {
  auto key = std::make_tuple(generating, choosers, pinned);
  if (auto it = os.wins.find(key); it != os.wins.end()) return it->second;
  std::optional<Intervention> found;
  const CausalCgs& g = cgs(generating);
  for (const auto& setting : all_settings(model_, choosers)) {
    Intervention fixed = pinned;
    for (std::size_t k = 0; k < choosers.size(); ++k) fixed[choosers[k]] = setting[k];
    const StateId leaf = deviation_leaf(generating, fixed);
    if (!satisfies(g.label(leaf), os.formula)) {
      found = std::move(fixed);
      break;
    }
  }
  os.wins.emplace(std::move(key), found);
  return found;
}

void BridgeEngine::strategic_minimality(OutcomeState& os, const std::vector<VarId>& vars,
                                        StrategyEvidence& ev) {
  if (vars.size() < 2) return;
  for (const auto& sub : subsets_by_size(vars, 1, vars.size() - 1)) {
    std::vector<VarId> rest;
    for (VarId v : model_.endogenous())
      if (std::find(sub.begin(), sub.end(), v) == sub.end()) rest.push_back(v);
    for (const auto& w : subsets_by_size(rest, 0, rest.size())) {
      Intervention generating;
      for (VarId x : w) generating[x] = actual_[x];
      if (coalition_wins(os, generating, sub, {})) {
        ev.minimal = false;
        ev.blocking_subset = sub;
        ev.blocking_witness = w;
        return;
      }
    }
  }
}

BridgeVerdict BridgeEngine::verdict(BridgeKind kind, const CandidateCause& candidate_in,
                                    const std::vector<VarId>& witness_in,
                                    const EventFormula& outcome) {
  if (candidate_in.vars.empty()) throw CausalityError("candidate cause is empty");
  if (candidate_in.vars.size() != candidate_in.actual_values.size())
    throw CausalityError("candidate has mismatched variables and values");
  CandidateCause candidate;
  {
    std::vector<std::pair<VarId, Symbol>> zipped;
    for (std::size_t k = 0; k < candidate_in.vars.size(); ++k)
      zipped.emplace_back(candidate_in.vars[k], candidate_in.actual_values[k]);
    std::sort(zipped.begin(), zipped.end());
    for (auto& [v, s] : zipped) {
      candidate.vars.push_back(v);
      candidate.actual_values.push_back(s);
    }
  }
  std::vector<VarId> witness = witness_in;
  std::sort(witness.begin(), witness.end());
  witness.erase(std::unique(witness.begin(), witness.end()), witness.end());

  for (std::size_t k = 0; k < candidate.vars.size(); ++k) {
    const VarId v = candidate.vars[k];
    if (v >= model_.num_variables())
      throw CausalityError("unknown variable #" + std::to_string(v));
    if (!model_.is_agent(v))
      throw CausalityError(model_.name(v) +
                           " is not an agent variable; strategies exist only for agents");
    if (!model_.variable(v).in_domain(candidate.actual_values[k]))
      throw ModelError("candidate value is outside the domain of " + model_.name(v));
  }
  if (std::adjacent_find(candidate.vars.begin(), candidate.vars.end()) != candidate.vars.end())
    throw CausalityError("candidate repeats a variable");
  for (VarId w : witness) {
    if (w >= model_.num_variables() || !model_.is_endogenous(w))
      throw CausalityError("witness variables must be endogenous");
    if (std::binary_search(candidate.vars.begin(), candidate.vars.end(), w))
      throw CausalityError("witness overlaps the candidate at " + model_.name(w));
    if (kind == BridgeKind::superset_strategy && !model_.is_agent(w))
      throw CausalityError("superset strategies need agent-only witnesses; " +
                           model_.name(w) + " is not an agent variable");
  }

  OutcomeState& os = outcome_state(outcome);
  if (!os.search->outcome_holds())
    throw CausalityError("outcome " + format_formula(model_, outcome) +
                         " does not hold in (M, u)");

  BridgeVerdict v;
  v.kind = kind;
  v.candidate = candidate;
  v.witness.vars = witness;
  for (VarId w : witness) v.witness.values.push_back(actual_[w]);
  v.outcome = format_formula(model_, outcome);

  // Cause side.
  v.ac1 = os.search->ac1(candidate);
  auto cert = os.search->ac2_with_witness(candidate.vars, witness);
  v.ac2_with_witness = cert.has_value();
  if (v.ac1 && cert && os.search->ac3(candidate.vars)) v.cause_side = std::move(cert);

  // Strategy side.
  Intervention frozen;
  for (VarId w : witness) frozen[w] = actual_[w];
  StrategyEvidence& ev = v.strategy_side;
  ev.coalition = candidate.vars;
  std::optional<Intervention> win;
  if (kind == BridgeKind::cause_iff_strategy) {
    ev.generating = frozen;
    win = coalition_wins(os, frozen, candidate.vars, {});
  } else {
    ev.coalition.insert(ev.coalition.end(), witness.begin(), witness.end());
    std::sort(ev.coalition.begin(), ev.coalition.end());
    win = coalition_wins(os, {}, candidate.vars, frozen);
  }
  if (win) {
    ev.coalition_wins = true;
    ev.reached_leaf = cgs(ev.generating).index(deviation_leaf(ev.generating, *win));
    bool same_as_actual = true;
    for (VarId x : candidate.vars) same_as_actual = same_as_actual && win->at(x) == actual_[x];
    if (same_as_actual)
      throw std::logic_error("winning strategy replays the actual values of the candidate");
    ev.winning = std::move(win);
  }
  strategic_minimality(os, candidate.vars, ev);

  v.agree = v.cause_side.has_value() == v.strategy_positive() &&
            v.ac2_with_witness == ev.coalition_wins;
  return v;
}

BridgeVerdict BridgeEngine::cause_iff_strategy(const CandidateCause& candidate,
                                               const std::vector<VarId>& witness,
                                               const EventFormula& outcome) {
  return verdict(BridgeKind::cause_iff_strategy, candidate, witness, outcome);
}

BridgeVerdict BridgeEngine::superset_strategy(const CandidateCause& candidate,
                                              const std::vector<VarId>& witness,
                                              const EventFormula& outcome) {
  return verdict(BridgeKind::superset_strategy, candidate, witness, outcome);
}

std::vector<BridgeVerdict> BridgeEngine::all_witnesses(BridgeKind kind,
                                                       const CandidateCause& candidate,
                                                       const EventFormula& outcome) {
  const auto& pool =
      kind == BridgeKind::cause_iff_strategy ? model_.endogenous() : model_.agents();
  std::vector<VarId> rest;
  for (VarId v : pool)
    if (std::find(candidate.vars.begin(), candidate.vars.end(), v) == candidate.vars.end())
      rest.push_back(v);
  std::vector<BridgeVerdict> out;
  for (const auto& w : subsets_by_size(rest, 0, rest.size()))
    out.push_back(verdict(kind, candidate, w, outcome));
  return out;
}

namespace {

void check_witness_values(const CausalModel& model, const Context& context,
                          const Witness& witness) {
  if (witness.values.empty()) return;
  if (witness.values.size() != witness.vars.size())
    throw CausalityError("witness has mismatched variables and values");
  const auto actual = evaluate(model, context);
  for (std::size_t k = 0; k < witness.vars.size(); ++k)
    if (actual[witness.vars[k]] != witness.values[k])
      throw CausalityError("witness " + model.name(witness.vars[k]) +
                           " must be frozen at its actual value");
}

}  // namespace

BridgeVerdict check_prop_cause_iff_strategy(const CausalModel& model,
                                            const Context& context,
                                            const CandidateCause& candidate,
                                            const Witness& witness,
                                            const EventFormula& outcome) {
  check_witness_values(model, context, witness);
  BridgeEngine engine(model, context);
  return engine.cause_iff_strategy(candidate, witness.vars, outcome);
}

BridgeVerdict check_prop_superset_strategy(const CausalModel& model,
                                           const Context& context,
                                           const CandidateCause& candidate,
                                           const Witness& witness,
                                           const EventFormula& outcome) {
  check_witness_values(model, context, witness);
  BridgeEngine engine(model, context);
  return engine.superset_strategy(candidate, witness.vars, outcome);
}

}  // namespace causal_cgs
