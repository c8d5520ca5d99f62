#include "causal_cgs/cgs.hpp"

#include <algorithm>

namespace causal_cgs {

Cgs::Cgs(std::size_t n_agents, std::vector<std::string> state_names,
         std::vector<std::string> propositions)
    : n_agents_(n_agents),
      state_names_(std::move(state_names)),
      propositions_(std::move(propositions)),
      moves_(state_names_.size(),
             std::vector<std::vector<Move>>(n_agents, std::vector<Move>{Move::noop()})),
      delta_(state_names_.size()),
      labels_(state_names_.size()) {
  if (n_agents_ == 0) throw CgsError("a CGS needs at least one agent");
  for (auto& d : delta_) d.assign(1, kNoState);
}

void Cgs::set_moves(AgentId a, StateId q, std::vector<Move> moves) {
  if (moves.empty()) throw CgsError("every agent needs at least one move");
  moves_.at(q).at(a) = std::move(moves);
  delta_.at(q).assign(num_move_vectors(q), kNoState);
}

const std::vector<Move>& Cgs::moves(AgentId a, StateId q) const {
  return moves_.at(q).at(a);
}

std::size_t Cgs::num_move_vectors(StateId q) const {
  std::size_t n = 1;
  for (const auto& m : moves_.at(q)) n *= m.size();
  return n;
}

std::size_t Cgs::move_vector_index(StateId q, const MoveVector& v) const {
  if (v.size() != n_agents_)
    throw CgsError("move vector has " + std::to_string(v.size()) +
                   " entries, expected " + std::to_string(n_agents_));
  std::size_t index = 0;
  for (AgentId a = 0; a < n_agents_; ++a) {
    const auto& ms = moves_.at(q)[a];
    auto it = std::find(ms.begin(), ms.end(), v[a]);
    if (it == ms.end())
      throw CgsError("illegal move for agent " + std::to_string(a) + " at state " +
                     state_names_.at(q));
    index = index * ms.size() + static_cast<std::size_t>(it - ms.begin());
  }
  return index;
}

MoveVector Cgs::move_vector_at(StateId q, std::size_t index) const {
  MoveVector v(n_agents_, Move::noop());
  for (AgentId a = static_cast<AgentId>(n_agents_); a-- > 0;) {
    const auto& ms = moves_.at(q)[a];
    v[a] = ms[index % ms.size()];
    index /= ms.size();
  }
  return v;
}

void Cgs::set_transition(StateId q, const MoveVector& v, StateId to) {
  if (to >= num_states()) throw CgsError("transition target out of range");
  delta_.at(q).at(move_vector_index(q, v)) = to;
}

StateId Cgs::transition(StateId q, const MoveVector& v) const {
  return transition_by_index(q, move_vector_index(q, v));
}

StateId Cgs::transition_by_index(StateId q, std::size_t index) const {
  StateId to = delta_.at(q).at(index);
  if (to == kNoState)
    throw CgsError("transition undefined at state " + state_names_.at(q));
  return to;
}

std::size_t Cgs::num_transitions() const {
  std::size_t n = 0;
  for (const auto& d : delta_)
    n += static_cast<std::size_t>(std::count_if(
        d.begin(), d.end(), [](StateId s) { return s != kNoState; }));
  return n;
}

void Cgs::set_label(StateId q, Label label) { labels_.at(q) = std::move(label); }

std::vector<std::string> Cgs::check_well_formed() const {
  std::vector<std::string> problems;
  for (StateId q = 0; q < num_states(); ++q) {
    for (std::size_t k = 0; k < delta_[q].size(); ++k)
      if (delta_[q][k] == kNoState)
        problems.push_back("state " + state_names_[q] +
                           " lacks a transition for move vector #" + std::to_string(k));
    for (std::size_t p : labels_[q])
      if (p >= propositions_.size())
        problems.push_back("state " + state_names_[q] + " has an unknown proposition");
  }
  return problems;
}

std::vector<MoveVector> legal_move_vectors(const Cgs& cgs, StateId q) {
  std::vector<MoveVector> out;
  const std::size_t n = cgs.num_move_vectors(q);
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.push_back(cgs.move_vector_at(q, k));
  return out;
}

// ---------------------------------------------------------------------------

const Strategy& StrategyProfile::at(AgentId a) const {
  auto it = strategies_.find(a);
  if (it == strategies_.end())
    throw CgsError("profile has no strategy for agent " + std::to_string(a));
  return it->second;
}

std::set<AgentId> StrategyProfile::agents() const {
  std::set<AgentId> out;
  for (const auto& [a, s] : strategies_) out.insert(a);
  return out;
}

bool StrategyProfile::total(std::size_t n_agents) const {
  for (AgentId a = 0; a < n_agents; ++a)
    if (!covers(a)) return false;
  return true;
}

StrategyProfile StrategyProfile::compose(const StrategyProfile& preferred,
                                         const StrategyProfile& fallback) {
  StrategyProfile out = fallback;
  for (const auto& [a, s] : preferred.strategies_) out.strategies_[a] = s;
  return out;
}

std::vector<StateId> play(const Cgs& cgs, StateId start,
                          const StrategyProfile& profile,
                          std::optional<std::size_t> max_steps) {
  if (!profile.total(cgs.n_agents()))
    throw CgsError("play needs a strategy for every agent");
  const std::size_t limit = max_steps.value_or(cgs.num_states());
  std::vector<StateId> history{start};
  for (std::size_t step = 0; step < limit; ++step) {
    const StateId q = history.back();
    MoveVector v(cgs.n_agents(), Move::noop());
    for (AgentId a = 0; a < cgs.n_agents(); ++a) v[a] = profile.at(a)(history);
    const StateId next = cgs.transition(q, v);  // throws on illegal moves
    if (next == q) break;
    history.push_back(next);
  }
  return history;
}

}  // namespace causal_cgs
