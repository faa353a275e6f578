#pragma once

#include "costrule/nuisance.hpp"
#include "costrule/types.hpp"

#include <cstddef>

namespace costrule {

struct ValidationReport {
  std::size_t n = 0;
  std::size_t muT_truncated = 0;
  std::size_t DeltaC_floored = 0;
  std::size_t deltaC_floored = 0;
  double muT_truncated_frac = 0.0;
  double DeltaC_floored_frac = 0.0;
  double deltaC_floored_frac = 0.0;
  double phi_n = 0.0;
  double alpha_phi = 0.0;
  double kappa = 0.0;
  bool feasible = true;
};

// Reports how often the positivity truncation and cost-margin floors fired,
// and checks that the fixed cost alpha*phi_n leaves room under kappa.
// Throws InfeasibleBudgetError when it does not.
ValidationReport validate_conditions(const Dataset& ds, const ProblemConfig& cfg,
                                     const NuisanceBundle& nb);
ValidationReport validate_conditions(const Dataset& ds, const ProblemConfig& cfg,
                                     const NuisanceValues& nv, double phi_n);

} // namespace costrule
