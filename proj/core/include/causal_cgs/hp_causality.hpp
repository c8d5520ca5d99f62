#pragma once

// Actual causes under the modified Halpern-Pearl definition.
//
// A candidate X = x is a cause of an outcome phi in (M, u) when
//   AC1  (M, u) satisfies X = x and phi,
//   AC2  for some W disjoint from X, frozen at its actual values w*, and some
//        setting x' of X: (M, u) satisfies [X <- x', W <- w*] not phi,
//   AC3  no strict nonempty subset of X satisfies AC1 and AC2.
//
// All searches are exhaustive and visit witnesses by size, then declaration
// order; alternative settings are visited in lexicographic domain order.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "causal_cgs/model.hpp"

namespace causal_cgs {

class CausalityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CandidateCause {
  std::vector<VarId> vars;  // declaration order
  std::vector<Symbol> actual_values;

  friend bool operator==(const CandidateCause&, const CandidateCause&) = default;
};

struct Witness {
  std::vector<VarId> vars;
  std::vector<Symbol> values;  // actual values w*

  friend bool operator==(const Witness&, const Witness&) = default;
};

struct CauseCertificate {
  CandidateCause cause;
  Witness witness;
  std::vector<Symbol> alternative;  // x', parallel to cause.vars
  EventFormula outcome;

  // X <- x' together with W <- w*.
  Intervention intervention() const;
};

struct SearchLimits {
  std::optional<std::size_t> max_cause_size;
  std::optional<std::size_t> max_witness_size;
};

// Candidate built from the actual values of `vars` in (M, u).
CandidateCause actual_candidate(const CausalModel& model, const Context& context,
                                std::vector<VarId> vars);
Witness actual_witness(const CausalModel& model, const Context& context,
                       std::vector<VarId> vars);

// Search state for one (model, context, outcome). Memoizes AC2 per subset, so
// one instance should serve all queries against the same outcome.
class CauseSearch {
 public:
  CauseSearch(const CausalModel& model, Context context, EventFormula outcome,
              SearchLimits limits = {});

  const CausalModel& model() const { return model_; }
  const Context& context() const { return context_; }
  const Assignment& actual() const { return actual_; }
  const EventFormula& outcome() const { return outcome_; }
  bool outcome_holds() const { return outcome_holds_; }

  bool ac1(const CandidateCause& candidate) const;

  // First (witness, alternative) pair establishing AC2, if any.
  std::optional<CauseCertificate> ac2(const std::vector<VarId>& vars);
  // AC2 with the witness set fixed.
  std::optional<CauseCertificate> ac2_with_witness(const std::vector<VarId>& vars,
                                                   const std::vector<VarId>& witness);
  // Every witness set establishing AC2, each with its first alternative.
  std::vector<CauseCertificate> ac2_all_witnesses(const std::vector<VarId>& vars);

  bool ac3(const std::vector<VarId>& vars);

  // Set when a limit cut the search short somewhere.
  bool truncated() const { return truncated_; }

 private:
  using Mask = std::uint64_t;

  Mask mask_of(const std::vector<VarId>& vars) const;
  std::vector<VarId> vars_of(Mask m) const;
  bool ac2_holds(Mask m);
  std::optional<std::vector<Symbol>> falsifying_alternative(
      const std::vector<VarId>& vars, const std::vector<VarId>& witness) const;
  std::vector<std::vector<VarId>> witness_sets(const std::vector<VarId>& vars);

  const CausalModel& model_;
  Context context_;
  EventFormula outcome_;
  SearchLimits limits_;
  Assignment actual_;
  bool outcome_holds_ = false;
  std::vector<VarId> endogenous_;
  std::vector<int> position_;  // VarId -> index in endogenous_, or -1
  std::unordered_map<Mask, bool> ac2_memo_;
  bool truncated_ = false;
};

std::optional<CauseCertificate> check_cause(const CausalModel& model,
                                            const Context& context,
                                            const CandidateCause& candidate,
                                            const EventFormula& outcome,
                                            SearchLimits limits = {});

// Full AC1-AC3 check where AC2 must hold with the given witness set.
std::optional<CauseCertificate> check_cause_with_witness(
    const CausalModel& model, const Context& context,
    const CandidateCause& candidate, const std::vector<VarId>& witness,
    const EventFormula& outcome);

// x' when the candidate is a but-for cause (AC2 with an empty witness).
std::optional<std::vector<Symbol>> is_butfor_cause(const CausalModel& model,
                                                   const Context& context,
                                                   const CandidateCause& candidate,
                                                   const EventFormula& outcome);

struct EnumerationOptions {
  bool restrict_to_agents = false;
  bool all_witnesses = false;
  bool butfor_only = false;
  SearchLimits limits;
};

struct EnumerationResult {
  std::vector<CauseCertificate> causes;
  bool truncated = false;
};

// Throws CausalityError when the outcome does not hold in (M, u).
EnumerationResult enumerate_causes(const CausalModel& model,
                                   const Context& context,
                                   const EventFormula& outcome,
                                   const EnumerationOptions& options = {});

// All subsets of `pool` (declaration order preserved) by size, then
// lexicographically; sizes outside [min_size, max_size] are skipped.
std::vector<std::vector<VarId>> subsets_by_size(const std::vector<VarId>& pool,
                                                std::size_t min_size,
                                                std::size_t max_size);

// Every setting of `vars` in lexicographic domain order.
std::vector<std::vector<Symbol>> all_settings(const CausalModel& model,
                                              const std::vector<VarId>& vars);

}  // namespace causal_cgs
