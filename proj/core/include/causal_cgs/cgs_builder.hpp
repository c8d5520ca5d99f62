#pragma once

// The tree-shaped causal CGS generated by a causal setting (M, u).
//
// Agents act in rank order: at a state q_{i,j} exactly the agents of rank
// i + 1 choose a value of their variable, every other agent plays no-op.
// A state's label is the evaluation of M under the interventions made by the
// actions on its root path. Child indices are j' = j * b_i + idx, where b_i is
// the number of joint actions of the agents of rank i + 1 and idx is the
// lexicographic index of the chosen values (agents in declaration order).

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "causal_cgs/causal_graph.hpp"
#include "causal_cgs/cgs.hpp"
#include "causal_cgs/model.hpp"

namespace causal_cgs {

struct StateIndex {
  int i = 0;
  std::size_t j = 0;

  friend bool operator==(const StateIndex&, const StateIndex&) = default;
  friend auto operator<=>(const StateIndex&, const StateIndex&) = default;
};

std::string state_name(StateIndex s);  // "q_i_j"

struct ActionPath {
  std::vector<std::pair<VarId, Symbol>> actions;  // in the order taken

  Intervention as_intervention() const;
  friend bool operator==(const ActionPath&, const ActionPath&) = default;
};

struct CgsOrigin {
  Context context;
  Intervention generating;  // empty for the CGS of (M, u) itself
};

class CausalCgs {
 public:
  const Cgs& base() const { return base_; }
  // The model as given, and the model actually played (the given one with
  // the generating intervention applied).
  const CausalModel& model() const { return model_; }
  const CausalModel& generated_model() const { return generated_; }
  const AgentRanking& ranking() const { return ranking_; }
  const CgsOrigin& origin() const { return origin_; }

  int n_max() const { return ranking_.n_max; }
  std::size_t breadth(int i) const { return breadth_.at(i); }  // m_i
  std::size_t num_states() const { return base_.num_states(); }
  StateId id(StateIndex s) const;
  StateIndex index(StateId q) const { return index_.at(q); }
  StateId root() const { return 0; }
  bool is_leaf(StateId q) const { return index_.at(q).i == n_max(); }
  std::vector<StateId> leaves() const;
  std::vector<StateId> children(StateId q) const;
  // Strict descendants.
  std::vector<StateId> descendants(StateId q) const;

  // Agent k controls agents()[k]; declaration order.
  const std::vector<VarId>& agents() const { return agents_; }
  std::optional<AgentId> agent_of(VarId v) const;
  int rank_of_agent(AgentId a) const { return ranking_.rank(agents_.at(a)); }

  const Assignment& label(StateId q) const { return labels_.at(q); }
  const Assignment& label(StateIndex s) const { return labels_.at(id(s)); }
  std::optional<std::pair<StateId, MoveVector>> parent(StateId q) const;
  const ActionPath& path(StateId q) const { return paths_.at(q); }

 private:
  friend CausalCgs build_causal_cgs(const CausalModel&, const Context&,
                                    const Intervention&);
  CausalCgs(Cgs base, CausalModel model, CausalModel generated)
      : base_(std::move(base)), model_(std::move(model)), generated_(std::move(generated)) {}

  Cgs base_;
  CausalModel model_;
  CausalModel generated_;
  AgentRanking ranking_;
  CgsOrigin origin_;
  std::vector<std::size_t> breadth_;
  std::vector<StateId> level_offset_;
  std::vector<StateIndex> index_;
  std::vector<VarId> agents_;
  std::vector<Assignment> labels_;
  std::vector<std::optional<std::pair<StateId, MoveVector>>> parent_;
  std::vector<ActionPath> paths_;
};

// Throws ModelError for invalid models, models without agents, or bad
// contexts and interventions.
CausalCgs build_causal_cgs(const CausalModel& model, const Context& context,
                           const Intervention& generating = {});

// The individual construction steps, usable without building a whole CGS.
std::vector<StateIndex> build_states(const AgentRanking& ranking,
                                     const CausalModel& model);
std::vector<Move> moves_at(const AgentRanking& ranking, const CausalModel& model,
                           StateIndex state, VarId agent);
// Throws CgsError for move vectors that are not legal at `state`. Move vectors
// list one move per agent variable, in declaration order.
StateIndex transition(const AgentRanking& ranking, const CausalModel& model,
                      StateIndex state, const MoveVector& profile);
std::map<StateIndex, Assignment> label_states(const CausalModel& model,
                                              const Context& context,
                                              const Intervention& generating = {});

ActionPath action_path(const CausalCgs& cgs, StateIndex state);

// The label agrees with (M^{Y <- y}, u) on every variable.
bool corresponds(const Assignment& label, const CausalModel& model,
                 const Context& context, const Intervention& intervention);

struct SizeReport {
  std::size_t states = 0;
  std::size_t transitions = 0;
  std::size_t leaves = 0;
  std::size_t bound = 0;  // 2 * prod |R(Y)| over agent variables
  bool within_bound = false;  // states <= bound + 1
};

SizeReport size_report(const CausalCgs& cgs);

// Structural checks on a built CGS; each returns human-readable violations.
// Stability: a variable of rank i keeps its value from any q_{i,j} through
// all descendants.
std::vector<std::string> check_stability(const CausalCgs& cgs);
// Every leaf corresponds to (M^{Y <- y}, u) with Y <- y its action path.
std::vector<std::string> check_leaf_correspondence(const CausalCgs& cgs);
// One parent per non-root state, injective transitions, child index ranges.
std::vector<std::string> check_tree_shape(const CausalCgs& cgs);

}  // namespace causal_cgs
