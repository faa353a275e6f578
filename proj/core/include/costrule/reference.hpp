#pragma once

#include "costrule/knapsack.hpp"
#include "costrule/nuisance.hpp"
#include "costrule/types.hpp"

#include <optional>
#include <vector>

namespace costrule {

// Cost regression after the one-parameter fluctuation along the clever
// covariate 1/(t + muT(w) - 1). Values are per observation.
struct TargetedCost {
  double epsilon = 0.0;
  bool logistic = false;
  std::vector<double> muC1, muC0, muCt;
  std::vector<double> DeltaC;
  double mean_DeltaC = 0.0;
};

TargetedCost target_cost_regression(const Dataset& ds, const NuisanceValues& nv,
                                    const ProblemConfig& cfg);

struct ReferenceFit {
  ReferenceSpec spec;
  TreatmentRule rule;
  // Present only for the random-at-budget reference.
  std::optional<TargetedCost> targeted_muC;
  std::optional<double> rd_value;
};

ReferenceFit fit_reference(const ReferenceSpec& spec, const Dataset& ds,
                           const NuisanceValues& nv, double phi_n,
                           const ProblemConfig& cfg);

} // namespace costrule
