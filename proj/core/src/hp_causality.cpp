#include "causal_cgs/hp_causality.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace causal_cgs {

Intervention CauseCertificate::intervention() const {
  Intervention out;
  for (std::size_t k = 0; k < cause.vars.size(); ++k)
    out[cause.vars[k]] = alternative[k];
  for (std::size_t k = 0; k < witness.vars.size(); ++k)
    out[witness.vars[k]] = witness.values[k];
  return out;
}

namespace {

std::vector<Symbol> values_of(const Assignment& a, const std::vector<VarId>& vars) {
  std::vector<Symbol> out;
  out.reserve(vars.size());
  for (VarId v : vars) out.push_back(a[v]);
  return out;
}

void check_outcome(const CausalModel& model, const EventFormula& outcome) {
  std::set<VarId> refs;
  collect_variables(outcome, refs);
  for (VarId v : refs) {
    if (v >= model.num_variables())
      throw CausalityError("outcome refers to unknown variable #" + std::to_string(v));
    if (!model.is_endogenous(v))
      throw CausalityError("outcome refers to exogenous variable " + model.name(v));
  }
}

void check_endogenous(const CausalModel& model, const std::vector<VarId>& vars,
                      const char* what) {
  std::set<VarId> seen;
  for (VarId v : vars) {
    if (v >= model.num_variables())
      throw CausalityError(std::string(what) + " refers to unknown variable #" +
                           std::to_string(v));
    if (!model.is_endogenous(v))
      throw CausalityError(std::string(what) + " contains exogenous variable " +
                           model.name(v));
    if (!seen.insert(v).second)
      throw CausalityError(std::string(what) + " repeats variable " + model.name(v));
  }
}

CandidateCause normalized(const CandidateCause& c) {
  if (c.vars.size() != c.actual_values.size())
    throw CausalityError("candidate has mismatched variables and values");
  std::vector<std::size_t> idx(c.vars.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return c.vars[a] < c.vars[b]; });
  CandidateCause out;
  for (std::size_t k : idx) {
    out.vars.push_back(c.vars[k]);
    out.actual_values.push_back(c.actual_values[k]);
  }
  return out;
}

}  // namespace

CandidateCause actual_candidate(const CausalModel& model, const Context& context,
                                std::vector<VarId> vars) {
  std::sort(vars.begin(), vars.end());
  auto actual = evaluate(model, context);
  CandidateCause c;
  c.actual_values = values_of(actual, vars);
  c.vars = std::move(vars);
  return c;
}

Witness actual_witness(const CausalModel& model, const Context& context,
                       std::vector<VarId> vars) {
  std::sort(vars.begin(), vars.end());
  auto actual = evaluate(model, context);
  Witness w;
  w.values = values_of(actual, vars);
  w.vars = std::move(vars);
  return w;
}

std::vector<std::vector<VarId>> subsets_by_size(const std::vector<VarId>& pool,
                                                std::size_t min_size,
                                                std::size_t max_size) {
  std::vector<std::vector<VarId>> out;
  const std::size_t n = pool.size();
  for (std::size_t k = min_size; k <= std::min(max_size, n); ++k) {
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      std::vector<VarId> s;
      s.reserve(k);
      for (std::size_t i : idx) s.push_back(pool[i]);
      out.push_back(std::move(s));
      // Advance to the next k-combination in lexicographic order.
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

std::vector<std::vector<Symbol>> all_settings(const CausalModel& model,
                                              const std::vector<VarId>& vars) {
  std::vector<std::vector<Symbol>> out;
  std::vector<std::size_t> digit(vars.size(), 0);
  while (true) {
    std::vector<Symbol> s;
    s.reserve(vars.size());
    for (std::size_t k = 0; k < vars.size(); ++k)
      s.push_back(model.variable(vars[k]).domain[digit[k]]);
    out.push_back(std::move(s));
    std::size_t k = vars.size();
    while (k > 0) {
      --k;
      if (++digit[k] < model.variable(vars[k]).domain.size()) break;
      digit[k] = 0;
      if (k == 0) return out;
    }
    if (vars.empty()) return out;
  }
}

// ---------------------------------------------------------------------------

CauseSearch::CauseSearch(const CausalModel& model, Context context,
                         EventFormula outcome, SearchLimits limits)
    : model_(model),
      context_(std::move(context)),
      outcome_(std::move(outcome)),
      limits_(limits) {
  check_outcome(model_, outcome_);
  actual_ = evaluate(model_, context_);
  outcome_holds_ = satisfies(actual_, outcome_);
  endogenous_ = model_.endogenous();
  if (endogenous_.size() > 64)
    throw CausalityError("cause search supports at most 64 endogenous variables");
  position_.assign(model_.num_variables(), -1);
  for (std::size_t k = 0; k < endogenous_.size(); ++k)
    position_[endogenous_[k]] = static_cast<int>(k);
}

CauseSearch::Mask CauseSearch::mask_of(const std::vector<VarId>& vars) const {
  Mask m = 0;
  for (VarId v : vars) m |= Mask{1} << position_.at(v);
  return m;
}

std::vector<VarId> CauseSearch::vars_of(Mask m) const {
  std::vector<VarId> out;
  for (std::size_t k = 0; k < endogenous_.size(); ++k)
    if (m & (Mask{1} << k)) out.push_back(endogenous_[k]);
  return out;
}

bool CauseSearch::ac1(const CandidateCause& candidate) const {
  if (!outcome_holds_) return false;
  for (std::size_t k = 0; k < candidate.vars.size(); ++k)
    if (actual_[candidate.vars[k]] != candidate.actual_values[k]) return false;
  return true;
}

std::optional<std::vector<Symbol>> CauseSearch::falsifying_alternative(
    const std::vector<VarId>& vars, const std::vector<VarId>& witness) const {
  std::vector<Symbol> fixed(model_.num_variables(), kNoValue);
  for (const auto& [u, s] : context_) fixed[u] = s;
  for (VarId w : witness) fixed[w] = actual_[w];
  const auto actual_x = values_of(actual_, vars);
  for (auto& setting : all_settings(model_, vars)) {
    if (setting == actual_x) continue;
    for (std::size_t k = 0; k < vars.size(); ++k) fixed[vars[k]] = setting[k];
    if (!satisfies(evaluate_fixed(model_, fixed), outcome_)) return setting;
  }
  return std::nullopt;
}

std::vector<std::vector<VarId>> CauseSearch::witness_sets(
    const std::vector<VarId>& vars) {
  std::vector<VarId> rest;
  for (VarId v : endogenous_)
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) rest.push_back(v);
  std::size_t cap = rest.size();
  if (limits_.max_witness_size && *limits_.max_witness_size < cap) {
    cap = *limits_.max_witness_size;
    truncated_ = true;
  }
  return subsets_by_size(rest, 0, cap);
}

std::optional<CauseCertificate> CauseSearch::ac2(const std::vector<VarId>& vars) {
  for (const auto& w : witness_sets(vars)) {
    if (auto cert = ac2_with_witness(vars, w)) return cert;
  }
  return std::nullopt;
}

std::optional<CauseCertificate> CauseSearch::ac2_with_witness(
    const std::vector<VarId>& vars, const std::vector<VarId>& witness) {
  auto alt = falsifying_alternative(vars, witness);
  if (!alt) return std::nullopt;
  CauseCertificate cert{
      CandidateCause{vars, values_of(actual_, vars)},
      Witness{witness, values_of(actual_, witness)},
      std::move(*alt),
      outcome_,
  };
  return cert;
}

std::vector<CauseCertificate> CauseSearch::ac2_all_witnesses(
    const std::vector<VarId>& vars) {
  std::vector<CauseCertificate> out;
  for (const auto& w : witness_sets(vars))
    if (auto cert = ac2_with_witness(vars, w)) out.push_back(std::move(*cert));
  return out;
}

bool CauseSearch::ac2_holds(Mask m) {
  if (auto it = ac2_memo_.find(m); it != ac2_memo_.end()) return it->second;
  bool holds = ac2(vars_of(m)).has_value();
  ac2_memo_.emplace(m, holds);
  return holds;
}

bool CauseSearch::ac3(const std::vector<VarId>& vars) {
  const Mask full = mask_of(vars);
  // Strict nonempty submasks; AC1 holds for any restriction of actual values.
  for (Mask sub = (full - 1) & full; sub != 0; sub = (sub - 1) & full)
    if (ac2_holds(sub)) return false;
  return true;
}

// ---------------------------------------------------------------------------

std::optional<CauseCertificate> check_cause(const CausalModel& model,
                                            const Context& context,
                                            const CandidateCause& candidate,
                                            const EventFormula& outcome,
                                            SearchLimits limits) {
  check_endogenous(model, candidate.vars, "candidate");
  if (candidate.vars.empty()) throw CausalityError("candidate cause is empty");
  CauseSearch search(model, context, outcome, limits);
  auto c = normalized(candidate);
  if (!search.ac1(c)) return std::nullopt;
  auto cert = search.ac2(c.vars);
  if (!cert || !search.ac3(c.vars)) return std::nullopt;
  return cert;
}

std::optional<CauseCertificate> check_cause_with_witness(
    const CausalModel& model, const Context& context,
    const CandidateCause& candidate, const std::vector<VarId>& witness,
    const EventFormula& outcome) {
  check_endogenous(model, candidate.vars, "candidate");
  check_endogenous(model, witness, "witness");
  if (candidate.vars.empty()) throw CausalityError("candidate cause is empty");
  for (VarId w : witness)
    if (std::find(candidate.vars.begin(), candidate.vars.end(), w) !=
        candidate.vars.end())
      throw CausalityError("witness overlaps the candidate at " + model.name(w));
  CauseSearch search(model, context, outcome);
  auto c = normalized(candidate);
  if (!search.ac1(c)) return std::nullopt;
  auto w = witness;
  std::sort(w.begin(), w.end());
  auto cert = search.ac2_with_witness(c.vars, w);
  if (!cert || !search.ac3(c.vars)) return std::nullopt;
  return cert;
}

std::optional<std::vector<Symbol>> is_butfor_cause(const CausalModel& model,
                                                   const Context& context,
                                                   const CandidateCause& candidate,
                                                   const EventFormula& outcome) {
  auto cert = check_cause_with_witness(model, context, candidate, {}, outcome);
  if (!cert) return std::nullopt;
  return cert->alternative;
}

EnumerationResult enumerate_causes(const CausalModel& model,
                                   const Context& context,
                                   const EventFormula& outcome,
                                   const EnumerationOptions& options) {
  SearchLimits limits = options.limits;
  if (options.butfor_only) limits.max_witness_size.reset();
  CauseSearch search(model, context, outcome, limits);
  if (!search.outcome_holds())
    throw CausalityError("AC1 violated for every candidate: outcome " +
                         format_formula(model, outcome) + " is false in (M, u)");

  const auto& pool = options.restrict_to_agents ? model.agents() : model.endogenous();
  std::size_t max_size = pool.size();
  bool truncated = false;
  if (options.limits.max_cause_size && *options.limits.max_cause_size < max_size) {
    max_size = *options.limits.max_cause_size;
    truncated = true;
  }

  EnumerationResult result;
  for (const auto& vars : subsets_by_size(pool, 1, max_size)) {
    if (options.butfor_only) {
      auto cert = search.ac2_with_witness(vars, {});
      if (cert && search.ac3(vars)) result.causes.push_back(std::move(*cert));
      continue;
    }
    auto first = search.ac2(vars);
    if (!first || !search.ac3(vars)) continue;
    if (options.all_witnesses) {
      for (auto& cert : search.ac2_all_witnesses(vars))
        result.causes.push_back(std::move(cert));
    } else {
      result.causes.push_back(std::move(*first));
    }
  }
  result.truncated = truncated || search.truncated();
  return result;
}

}  // namespace causal_cgs
