#include "causal_cgs/cgs_builder.hpp"

#include <algorithm>
#include <set>

namespace causal_cgs {

std::string state_name(StateIndex s) {
  return "q_" + std::to_string(s.i) + "_" + std::to_string(s.j);
}

Intervention ActionPath::as_intervention() const {
  Intervention out;
  for (const auto& [v, s] : actions) out[v] = s;
  return out;
}

namespace {

std::vector<std::size_t> breadths(const AgentRanking& ranking,
                                  const CausalModel& model) {
  std::vector<std::size_t> m(ranking.n_max + 1, 1);
  for (int i = 1; i <= ranking.n_max; ++i) {
    std::size_t prod = 1;
    for (VarId a : model.agents())
      if (ranking.rank(a) <= i) prod *= model.variable(a).domain.size();
    m[i] = prod;
  }
  return m;
}

std::size_t domain_index(const Variable& var, Symbol s) {
  auto it = std::find(var.domain.begin(), var.domain.end(), s);
  return static_cast<std::size_t>(it - var.domain.begin());
}

}  // namespace

std::vector<StateIndex> build_states(const AgentRanking& ranking,
                                     const CausalModel& model) {
  auto m = breadths(ranking, model);
  std::vector<StateIndex> out{{0, 0}};
  for (int i = 1; i <= ranking.n_max; ++i)
    for (std::size_t j = 0; j < m[i]; ++j) out.push_back({i, j});
  return out;
}

std::vector<Move> moves_at(const AgentRanking& ranking, const CausalModel& model,
                           StateIndex state, VarId agent) {
  if (ranking.rank(agent) != state.i + 1) return {Move::noop()};
  std::vector<Move> out;
  for (Symbol s : model.variable(agent).domain) out.push_back(Move::of(s));
  return out;
}

StateIndex transition(const AgentRanking& ranking, const CausalModel& model,
                      StateIndex state, const MoveVector& profile) {
  const auto& agents = model.agents();
  if (profile.size() != agents.size())
    throw CgsError("move vector has " + std::to_string(profile.size()) +
                   " entries, expected " + std::to_string(agents.size()));
  std::size_t base = 1;
  std::size_t idx = 0;
  for (std::size_t k = 0; k < agents.size(); ++k) {
    const auto legal = moves_at(ranking, model, state, agents[k]);
    if (std::find(legal.begin(), legal.end(), profile[k]) == legal.end())
      throw CgsError("illegal move for agent " + model.name(agents[k]) + " at " +
                     state_name(state));
    if (profile[k].is_noop()) continue;
    const auto& var = model.variable(agents[k]);
    base *= var.domain.size();
    idx = idx * var.domain.size() + domain_index(var, profile[k].value());
  }
  if (state.i >= ranking.n_max) return state;
  return {state.i + 1, state.j * base + idx};
}

// ---------------------------------------------------------------------------

StateId CausalCgs::id(StateIndex s) const {
  if (s.i < 0 || s.i > n_max() || s.j >= breadth_.at(s.i))
    throw CgsError("no state " + state_name(s));
  return level_offset_[s.i] + static_cast<StateId>(s.j);
}

std::vector<StateId> CausalCgs::leaves() const {
  std::vector<StateId> out;
  for (std::size_t j = 0; j < breadth_.back(); ++j)
    out.push_back(level_offset_.back() + static_cast<StateId>(j));
  return out;
}

std::vector<StateId> CausalCgs::children(StateId q) const {
  if (is_leaf(q)) return {};
  std::vector<StateId> out;
  for (std::size_t k = 0; k < base_.num_move_vectors(q); ++k)
    out.push_back(base_.transition_by_index(q, k));
  return out;
}

std::vector<StateId> CausalCgs::descendants(StateId q) const {
  std::vector<StateId> out;
  std::vector<StateId> todo = children(q);
  while (!todo.empty()) {
    StateId c = todo.back();
    todo.pop_back();
    out.push_back(c);
    for (StateId g : children(c)) todo.push_back(g);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<AgentId> CausalCgs::agent_of(VarId v) const {
  auto it = std::find(agents_.begin(), agents_.end(), v);
  if (it == agents_.end()) return std::nullopt;
  return static_cast<AgentId>(it - agents_.begin());
}

std::optional<std::pair<StateId, MoveVector>> CausalCgs::parent(StateId q) const {
  return parent_.at(q);
}

CausalCgs build_causal_cgs(const CausalModel& model, const Context& context,
                           const Intervention& generating) {
  if (auto diags = validate_model(model); !diags.empty())
    throw ModelError("invalid model: " + diags.front().message);
  check_context(model, context);
  CausalModel generated = intervened_model(model, generating);
  AgentRanking ranking = agent_ranking(generated);
  const auto& agents = model.agents();

  auto states = build_states(ranking, generated);
  std::vector<std::string> names;
  names.reserve(states.size());
  for (auto s : states) names.push_back(state_name(s));

  std::vector<std::string> props;
  std::vector<std::size_t> prop_offset;
  for (const auto& var : model.variables()) {
    prop_offset.push_back(props.size());
    for (Symbol s : var.domain) props.push_back(var.name + "=" + model.text(s));
  }

  CausalCgs cgs(Cgs(agents.size(), names, props), model, generated);
  cgs.ranking_ = ranking;
  cgs.origin_ = {context, generating};
  cgs.agents_ = agents;
  cgs.breadth_ = breadths(ranking, generated);
  cgs.level_offset_.assign(ranking.n_max + 1, 0);
  for (int i = 1; i <= ranking.n_max; ++i)
    cgs.level_offset_[i] =
        cgs.level_offset_[i - 1] + static_cast<StateId>(cgs.breadth_[i - 1]);
  cgs.index_ = states;
  cgs.parent_.assign(states.size(), std::nullopt);
  cgs.paths_.assign(states.size(), ActionPath{});
  cgs.labels_.assign(states.size(), Assignment{});

  Cgs& base = cgs.base_;
  for (StateId q = 0; q < states.size(); ++q)
    for (AgentId a = 0; a < agents.size(); ++a)
      base.set_moves(a, q, moves_at(ranking, generated, states[q], agents[a]));

  // States are numbered level by level, so parents precede their children.
  for (StateId q = 0; q < states.size(); ++q) {
    if (q == 0) {
      cgs.labels_[q] = evaluate(generated, context);
    } else {
      cgs.labels_[q] = evaluate(generated, context, cgs.paths_[q].as_intervention());
    }
    for (const auto& v : legal_move_vectors(base, q)) {
      StateIndex next = transition(ranking, generated, states[q], v);
      StateId to = cgs.id(next);
      base.set_transition(q, v, to);
      if (to == q) continue;
      cgs.parent_[to] = std::make_pair(q, v);
      ActionPath path = cgs.paths_[q];
      for (AgentId a = 0; a < agents.size(); ++a)
        if (!v[a].is_noop()) path.actions.emplace_back(agents[a], v[a].value());
      cgs.paths_[to] = std::move(path);
    }
    Cgs::Label label;
    for (VarId x = 0; x < model.num_variables(); ++x)
      label.insert(prop_offset[x] + domain_index(model.variable(x), cgs.labels_[q][x]));
    base.set_label(q, std::move(label));
  }
  return cgs;
}

std::map<StateIndex, Assignment> label_states(const CausalModel& model,
                                              const Context& context,
                                              const Intervention& generating) {
  auto cgs = build_causal_cgs(model, context, generating);
  std::map<StateIndex, Assignment> out;
  for (StateId q = 0; q < cgs.num_states(); ++q) out.emplace(cgs.index(q), cgs.label(q));
  return out;
}

ActionPath action_path(const CausalCgs& cgs, StateIndex state) {
  return cgs.path(cgs.id(state));
}

bool corresponds(const Assignment& label, const CausalModel& model,
                 const Context& context, const Intervention& intervention) {
  auto expected = evaluate(intervened_model(model, intervention), context);
  return expected == label;
}

SizeReport size_report(const CausalCgs& cgs) {
  SizeReport r;
  r.states = cgs.num_states();
  r.transitions = cgs.base().num_transitions();
  r.leaves = cgs.leaves().size();
  std::size_t prod = 1;
  for (VarId a : cgs.agents()) prod *= cgs.model().variable(a).domain.size();
  r.bound = 2 * prod;
  r.within_bound = r.states <= r.bound + 1;
  return r;
}

std::vector<std::string> check_stability(const CausalCgs& cgs) {
  std::vector<std::string> out;
  const auto& model = cgs.generated_model();
  for (StateId q = 0; q < cgs.num_states(); ++q) {
    const int i = cgs.index(q).i;
    const auto desc = cgs.descendants(q);
    for (VarId x : model.endogenous()) {
      if (cgs.ranking().rank(x) != i) continue;
      for (StateId d : desc) {
        if (cgs.label(d)[x] != cgs.label(q)[x]) {
          out.push_back(model.name(x) + " changes from " + cgs.base().state_name(q) +
                        " to " + cgs.base().state_name(d));
          break;
        }
      }
    }
  }
  return out;
}

std::vector<std::string> check_leaf_correspondence(const CausalCgs& cgs) {
  std::vector<std::string> out;
  for (StateId leaf : cgs.leaves()) {
    if (!corresponds(cgs.label(leaf), cgs.generated_model(), cgs.origin().context,
                     cgs.path(leaf).as_intervention()))
      out.push_back(cgs.base().state_name(leaf) +
                    " does not correspond to its action-path intervention");
  }
  return out;
}

std::vector<std::string> check_tree_shape(const CausalCgs& cgs) {
  std::vector<std::string> out;
  const Cgs& base = cgs.base();
  std::vector<int> parents(cgs.num_states(), 0);
  for (StateId q = 0; q < cgs.num_states(); ++q) {
    const StateIndex s = cgs.index(q);
    std::set<StateId> targets;
    const std::size_t n = base.num_move_vectors(q);
    for (std::size_t k = 0; k < n; ++k) {
      StateId to = base.transition_by_index(q, k);
      if (!targets.insert(to).second)
        out.push_back("two move vectors at " + base.state_name(q) + " share a successor");
      if (cgs.is_leaf(q)) {
        if (to != q) out.push_back("leaf " + base.state_name(q) + " does not self-loop");
        continue;
      }
      ++parents[to];
      const StateIndex t = cgs.index(to);
      if (t.i != s.i + 1 || t.j < n * s.j || t.j > n * (s.j + 1) - 1)
        out.push_back("child " + base.state_name(to) + " of " + base.state_name(q) +
                      " is outside the permitted index range");
    }
    if (cgs.is_leaf(q) && n != 1)
      out.push_back("leaf " + base.state_name(q) + " has more than one move vector");
  }
  for (StateId q = 1; q < cgs.num_states(); ++q)
    if (parents[q] != 1)
      out.push_back(base.state_name(q) + " has " + std::to_string(parents[q]) +
                    " parents");
  if (parents[0] != 0) out.push_back("the root has a parent");
  return out;
}

}  // namespace causal_cgs
