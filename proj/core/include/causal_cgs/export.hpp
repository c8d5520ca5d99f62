#pragma once

// DOT and JSON renderings of a causal CGS.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "causal_cgs/cgs_builder.hpp"

namespace causal_cgs {

// One node per state with its label, one edge per transition that leaves the
// state, annotated with the move vector ("-" for no-op).
std::string export_dot(const CausalCgs& cgs);

// Plain-data view of the JSON export. Values are symbol texts; a no-op move
// is std::nullopt.
struct CgsRecord {
  using Setting = std::pair<std::string, std::string>;
  using Vector = std::vector<std::optional<std::string>>;

  struct State {
    int i = 0;
    std::size_t j = 0;
    std::vector<Setting> label;  // declaration order
    friend bool operator==(const State&, const State&) = default;
  };
  struct Transition {
    std::string from;
    Vector vector;
    std::string to;
    friend bool operator==(const Transition&, const Transition&) = default;
  };

  std::vector<State> states;
  std::vector<std::string> agents;
  // agent -> state -> legal moves, both in construction order
  using StateMoves = std::vector<std::pair<std::string, Vector>>;
  std::vector<std::pair<std::string, StateMoves>> moves;
  std::vector<Transition> transitions;
  std::vector<std::pair<std::string, int>> ranks;
  std::vector<Setting> context;
  std::vector<Setting> intervention;

  friend bool operator==(const CgsRecord&, const CgsRecord&) = default;
};

CgsRecord to_record(const CausalCgs& cgs);
std::string export_json(const CausalCgs& cgs);
std::string to_json(const CgsRecord& record);
// Throws std::runtime_error on malformed input.
CgsRecord parse_cgs_json(std::string_view text);

// 64-bit FNV-1a, printed as 16 hex digits.
std::uint64_t fnv1a(std::string_view bytes);
std::string digest(std::string_view bytes);

}  // namespace causal_cgs
