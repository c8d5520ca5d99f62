#pragma once

// Seeded random causal models for property checks.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "causal_cgs/model.hpp"

namespace causal_cgs {

struct RandomModelOptions {
  int min_exogenous = 1, max_exogenous = 2;
  int min_endogenous = 2, max_endogenous = 5;
  int min_agents = 1, max_agents = 3;
  int max_depth = 3;
};

// Binary variables throughout. Equations are random expression trees over
// the exogenous variables and the endogenous variables declared earlier, so
// the result is acyclic by construction.
CausalModel random_model(std::mt19937_64& rng, const RandomModelOptions& options = {});

// Every context of the model, in lexicographic order of exogenous values.
std::vector<Context> all_contexts(const CausalModel& model);

// The model written in the text format read by dsl::load_model.
std::string to_source(const CausalModel& model, const Context* context = nullptr);

}  // namespace causal_cgs
