#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "causal_cgs/model.hpp"

namespace causal_cgs {

// Dependency graph over the endogenous variables. An edge (X, Y) means X
// occurs syntactically in the equation of Y.
struct CausalNetwork {
  std::vector<VarId> nodes;                          // declaration order
  std::set<std::pair<VarId, VarId>> edges;           // endogenous -> endogenous
  std::map<VarId, std::set<VarId>> exogenous_parents;
  std::vector<VarId> topological_order;

  std::vector<VarId> parents(VarId v) const;
  std::vector<VarId> children(VarId v) const;
  // Strict descendants of v.
  std::set<VarId> descendants(VarId v) const;
};

// Throws ModelError naming one cycle when the network is cyclic.
CausalNetwork build_network(const CausalModel& model);

using VariableLevels = std::map<VarId, int>;

VariableLevels variable_levels(const CausalNetwork& network,
                               const CausalModel& model);

struct AgentRanking {
  std::map<VarId, int> rho;  // endogenous variables only
  int n_max = 0;

  int rank(VarId v) const { return rho.at(v); }
  // Agents of the given rank in declaration order.
  std::vector<VarId> agents_of_rank(const CausalModel& model, int r) const;
};

// Throws ModelError when the model has no agent variables.
AgentRanking agent_ranking(const CausalModel& model, const VariableLevels& levels);

// Convenience: network, levels and ranking in one step.
AgentRanking agent_ranking(const CausalModel& model);

}  // namespace causal_cgs
