#pragma once

// Concurrent game structures and strategies, independent of how the structure
// was produced.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "causal_cgs/model.hpp"

namespace causal_cgs {

class CgsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using StateId = std::uint32_t;
using AgentId = std::uint32_t;
inline constexpr StateId kNoState = std::numeric_limits<StateId>::max();

// A move is a domain value, or the no-op token which lies outside every domain.
class Move {
 public:
  static Move noop() { return Move(); }
  static Move of(Symbol value) { return Move(value); }

  bool is_noop() const { return !value_.has_value(); }
  Symbol value() const { return value_.value(); }

  friend bool operator==(const Move&, const Move&) = default;
  friend auto operator<=>(const Move&, const Move&) = default;

 private:
  Move() = default;
  explicit Move(Symbol v) : value_(v) {}
  std::optional<Symbol> value_;
};

using MoveVector = std::vector<Move>;

class Cgs {
 public:
  using Label = std::set<std::size_t>;  // indices into propositions()

  Cgs(std::size_t n_agents, std::vector<std::string> state_names,
      std::vector<std::string> propositions);

  std::size_t n_agents() const { return n_agents_; }
  std::size_t num_states() const { return state_names_.size(); }
  const std::string& state_name(StateId q) const { return state_names_.at(q); }
  const std::vector<std::string>& propositions() const { return propositions_; }

  // Moves must be set for every agent before transitions out of q.
  void set_moves(AgentId a, StateId q, std::vector<Move> moves);
  const std::vector<Move>& moves(AgentId a, StateId q) const;

  // |D(q)|, the number of move vectors at q.
  std::size_t num_move_vectors(StateId q) const;
  // Position of v in the lexicographic enumeration of D(q); throws CgsError
  // when v is not a legal move vector at q.
  std::size_t move_vector_index(StateId q, const MoveVector& v) const;
  MoveVector move_vector_at(StateId q, std::size_t index) const;

  void set_transition(StateId q, const MoveVector& v, StateId to);
  StateId transition(StateId q, const MoveVector& v) const;
  StateId transition_by_index(StateId q, std::size_t index) const;
  std::size_t num_transitions() const;

  void set_label(StateId q, Label label);
  const Label& label(StateId q) const { return labels_.at(q); }

  // Empty when every transition over D(q) is defined and every label is a
  // subset of the propositions.
  std::vector<std::string> check_well_formed() const;

 private:
  std::size_t n_agents_;
  std::vector<std::string> state_names_;
  std::vector<std::string> propositions_;
  std::vector<std::vector<std::vector<Move>>> moves_;  // [state][agent]
  std::vector<std::vector<StateId>> delta_;            // [state][vector index]
  std::vector<Label> labels_;
};

// D(q) in lexicographic order, the first agent varying slowest.
std::vector<MoveVector> legal_move_vectors(const Cgs& cgs, StateId q);

// Maps a nonempty history (ending at the current state) to a move.
using Strategy = std::function<Move(std::span<const StateId> history)>;

class StrategyProfile {
 public:
  StrategyProfile() = default;

  void set(AgentId a, Strategy s) { strategies_[a] = std::move(s); }
  bool covers(AgentId a) const { return strategies_.contains(a); }
  const Strategy& at(AgentId a) const;
  std::set<AgentId> agents() const;
  bool total(std::size_t n_agents) const;

  // Follows `preferred` on its agents and `fallback` on the others.
  static StrategyProfile compose(const StrategyProfile& preferred,
                                 const StrategyProfile& fallback);

 private:
  std::map<AgentId, Strategy> strategies_;
};

// Plays the profile from `start`. Stops after max_steps transitions, or at a
// state whose chosen transition is a self-loop. The result starts with
// `start`. max_steps defaults to the number of states.
std::vector<StateId> play(const Cgs& cgs, StateId start,
                          const StrategyProfile& profile,
                          std::optional<std::size_t> max_steps = std::nullopt);

}  // namespace causal_cgs
