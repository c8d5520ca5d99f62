#pragma once

// Strategies in the causal CGS and their relation to actual causes.
//
// The causal strategy profile F_M lets each agent play the value its equation
// yields given the actions already taken on the path. A fixed-action strategy
// F_{X=x} plays x wherever the agent acts. Playing F_{X=x} composed with F_M
// reaches the leaf that corresponds to (M^{X <- x}, u); the bridge checks use
// that to compare "X = x is a cause with witness W" against "the agents of X
// can force not-phi".

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "causal_cgs/cgs.hpp"
#include "causal_cgs/cgs_builder.hpp"
#include "causal_cgs/hp_causality.hpp"
#include "causal_cgs/model.hpp"

namespace causal_cgs {

class CausalStrategyProfile {
 public:
  explicit CausalStrategyProfile(const CausalCgs& cgs);

  // The move F_M prescribes for agent a at state q.
  Move choice(AgentId a, StateId q) const { return table_->at(q).at(a); }
  StrategyProfile profile() const;

 private:
  using Table = std::vector<std::vector<Move>>;  // [state][agent]
  std::shared_ptr<const Table> table_;
};

// F_M for `cgs`. The model and context must be the ones the CGS was built
// from (the generating intervention is applied on top of `model`).
CausalStrategyProfile causal_profile(const CausalModel& model, const Context& context,
                                     const CausalCgs& cgs);

struct FixedActionStrategy {
  VarId agent;
  Symbol value;
};

// F_{X=x} as a generic strategy for one agent of `cgs`.
Strategy fixed_action_strategy(const CausalCgs& cgs, const FixedActionStrategy& f);

// Leaf reached by F_{X=x} composed with F_M. Throws CgsError for repeated or
// non-agent variables and ModelError for out-of-domain values; throws
// std::logic_error if the leaf fails to correspond to (M^{X <- x}, u).
StateIndex play_deviation(const CausalCgs& cgs, const CausalModel& model,
                          const Context& context,
                          const std::vector<FixedActionStrategy>& fixed);

enum class BridgeKind {
  cause_iff_strategy,  // CGS of (M^{W <- w*}, u), coalition = agents of X
  superset_strategy,   // CGS of (M, u), coalition = agents of X and W
};

std::string_view to_string(BridgeKind k);

struct StrategyEvidence {
  std::vector<VarId> coalition;
  Intervention generating;                 // CGS the coalition played in
  std::optional<Intervention> winning;     // fixed actions reaching not-phi
  std::optional<StateIndex> reached_leaf;  // leaf of the winning play
  bool coalition_wins = false;
  // No strict sub-coalition of the candidate can force not-phi in the CGS of
  // any witness it might use.
  bool minimal = true;
  std::optional<std::vector<VarId>> blocking_subset;
  std::optional<std::vector<VarId>> blocking_witness;
};

struct BridgeVerdict {
  BridgeKind kind = BridgeKind::cause_iff_strategy;
  CandidateCause candidate;
  Witness witness;
  std::string outcome;
  bool ac1 = false;
  bool ac2_with_witness = false;
  std::optional<CauseCertificate> cause_side;
  StrategyEvidence strategy_side;

  bool strategy_positive() const {
    return ac1 && strategy_side.coalition_wins && strategy_side.minimal;
  }
  // Cause exists iff the strategy side is positive, and AC2 with this witness
  // holds iff the coalition can force not-phi.
  bool agree = false;
};

// Shares CGS builds, strategy play-outs and cause searches across many
// bridge queries against one causal setting.
class BridgeEngine {
 public:
  BridgeEngine(CausalModel model, Context context);

  const CausalModel& model() const { return model_; }
  const Context& context() const { return context_; }

  const CausalCgs& cgs(const Intervention& generating = {});
  const CausalStrategyProfile& profile(const Intervention& generating = {});

  // Leaf reached in the CGS of (M^{generating}, u) when `fixed` deviates from
  // F_M; memoized.
  StateId deviation_leaf(const Intervention& generating, const Intervention& fixed);

  BridgeVerdict cause_iff_strategy(const CandidateCause& candidate,
                                   const std::vector<VarId>& witness,
                                   const EventFormula& outcome);
  BridgeVerdict superset_strategy(const CandidateCause& candidate,
                                  const std::vector<VarId>& witness,
                                  const EventFormula& outcome);

  // Verdicts for every admissible witness set: subsets of V \ X for
  // cause_iff_strategy, subsets of V_a \ X for superset_strategy.
  std::vector<BridgeVerdict> all_witnesses(BridgeKind kind,
                                           const CandidateCause& candidate,
                                           const EventFormula& outcome);

  template <class F>
  void for_each_cgs(F&& f) const {
    for (const auto& [key, entry] : cache_) f(*entry.cgs);
  }
  std::size_t cgs_built() const { return cache_.size(); }

 private:
  struct Entry {
    std::unique_ptr<CausalCgs> cgs;
    std::unique_ptr<CausalStrategyProfile> profile;
  };
  struct OutcomeState {
    EventFormula formula;
    std::unique_ptr<CauseSearch> search;
    // (generating, choosers, pinned) -> winning actions, if any
    std::map<std::tuple<Intervention, std::vector<VarId>, Intervention>,
             std::optional<Intervention>>
        wins;
  };

  Entry& entry(const Intervention& generating);
  OutcomeState& outcome_state(const EventFormula& outcome);
  std::optional<Intervention> coalition_wins(OutcomeState& os,
                                             const Intervention& generating,
                                             const std::vector<VarId>& choosers,
                                             const Intervention& pinned);
  void strategic_minimality(OutcomeState& os, const std::vector<VarId>& vars,
                            StrategyEvidence& ev);
  BridgeVerdict verdict(BridgeKind kind, const CandidateCause& candidate,
                        const std::vector<VarId>& witness, const EventFormula& outcome);

  CausalModel model_;
  Context context_;
  Assignment actual_;
  std::map<Intervention, Entry> cache_;
  std::map<std::pair<Intervention, Intervention>, StateId> leaves_;
  std::map<std::string, OutcomeState> outcomes_;
};

// One-shot forms of the bridge checks.
BridgeVerdict check_prop_cause_iff_strategy(const CausalModel& model,
                                            const Context& context,
                                            const CandidateCause& candidate,
                                            const Witness& witness,
                                            const EventFormula& outcome);
BridgeVerdict check_prop_superset_strategy(const CausalModel& model,
                                           const Context& context,
                                           const CandidateCause& candidate,
                                           const Witness& witness,
                                           const EventFormula& outcome);

}  // namespace causal_cgs
