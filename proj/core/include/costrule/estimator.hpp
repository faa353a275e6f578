#pragma once

#include "costrule/knapsack.hpp"
#include "costrule/nuisance.hpp"
#include "costrule/reference.hpp"
#include "costrule/tmle.hpp"
#include "costrule/types.hpp"
#include "costrule/validation.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace costrule {

struct ReferenceResult {
  ReferenceFit fit;
  TargetedOutcome outcome;
  AteEstimate ate;
  // Absolute fluctuation score residuals |sum H (obs - fitted)|.
  double muY_score = 0.0;
  double muC_score = 0.0;
};

struct EstimationResult {
  ValidationReport validation;
  KnapsackFit knapsack;
  std::vector<ReferenceResult> references;
  // One-step cost of the estimated rule minus kappa; ~0 when saturated.
  double budget_residual = 0.0;
  std::vector<std::string> warnings;
};

// Full procedure: nuisance fits (with out-of-fold xi when cfg.folds > 1,
// split seeded by fold_seed), feasibility validation, rule construction,
// then per-reference targeting and inference.
EstimationResult run_estimation(const Dataset& ds, const ProblemConfig& cfg,
                                const NuisanceSpecs& specs, std::uint64_t fold_seed);

} // namespace costrule
