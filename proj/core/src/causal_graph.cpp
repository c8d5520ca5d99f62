#include "causal_cgs/causal_graph.hpp"

#include <algorithm>

namespace causal_cgs {

std::vector<VarId> CausalNetwork::parents(VarId v) const {
  std::vector<VarId> out;
  for (const auto& [from, to] : edges)
    if (to == v) out.push_back(from);
  return out;
}

std::vector<VarId> CausalNetwork::children(VarId v) const {
  std::vector<VarId> out;
  for (auto it = edges.lower_bound({v, 0}); it != edges.end() && it->first == v; ++it)
    out.push_back(it->second);
  return out;
}

std::set<VarId> CausalNetwork::descendants(VarId v) const {
  std::set<VarId> seen;
  std::vector<VarId> todo = children(v);
  while (!todo.empty()) {
    VarId c = todo.back();
    todo.pop_back();
    if (!seen.insert(c).second) continue;
    for (VarId g : children(c)) todo.push_back(g);
  }
  return seen;
}

CausalNetwork build_network(const CausalModel& model) {
  if (!model.acyclic()) {
    for (const auto& d : validate_model(model))
      if (d.kind == Diagnostic::Kind::cycle) throw ModelError(d.message);
    throw ModelError("causal network is cyclic");
  }
  CausalNetwork net;
  net.nodes = model.endogenous();
  for (VarId v : model.endogenous()) {
    const auto& eq = model.equation(v);
    if (!eq) continue;
    std::set<VarId> refs;
    collect_variables(*eq, refs);
    for (VarId p : refs) {
      if (model.is_endogenous(p))
        net.edges.emplace(p, v);
      else
        net.exogenous_parents[v].insert(p);
    }
  }
  net.topological_order = model.topological_order();
  return net;
}

VariableLevels variable_levels(const CausalNetwork& network,
                               const CausalModel&) {
  VariableLevels level;
  for (VarId v : network.topological_order) {
    int l = 1;
    for (VarId p : network.parents(v)) l = std::max(l, level.at(p) + 1);
    level[v] = l;
  }
  return level;
}

std::vector<VarId> AgentRanking::agents_of_rank(const CausalModel& model,
                                                int r) const {
  std::vector<VarId> out;
  for (VarId a : model.agents())
    if (rho.at(a) == r) out.push_back(a);
  return out;
}

AgentRanking agent_ranking(const CausalModel& model, const VariableLevels& levels) {
  if (model.agents().empty())
    throw ModelError("agent ranking needs at least one agent variable");

  std::set<int> agent_levels;
  for (VarId a : model.agents()) agent_levels.insert(levels.at(a));

  // Rank-compress the distinct agent levels into 1..n_max.
  std::map<int, int> rank_of_level;
  int next = 1;
  for (int l : agent_levels) rank_of_level[l] = next++;

  AgentRanking ranking;
  ranking.n_max = static_cast<int>(agent_levels.size());
  for (VarId v : model.endogenous()) {
    const int l = levels.at(v);
    if (model.is_agent(v)) {
      ranking.rho[v] = rank_of_level.at(l);
      continue;
    }
    // Agent level closest to l from above (or equal); none means v sits above
    // every agent.
    auto it = agent_levels.lower_bound(l);
    ranking.rho[v] =
        it == agent_levels.end() ? ranking.n_max : rank_of_level.at(*it) - 1;
  }
  return ranking;
}

AgentRanking agent_ranking(const CausalModel& model) {
  auto net = build_network(model);
  return agent_ranking(model, variable_levels(net, model));
}

}  // namespace causal_cgs
