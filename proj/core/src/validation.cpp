#include "costrule/validation.hpp"

#include "costrule/knapsack.hpp"

#include <string>

namespace costrule {

ValidationReport validate_conditions(const Dataset& ds, const ProblemConfig& cfg,
                                     const NuisanceValues& nv, double phi_n) {
  ValidationReport rep;
  rep.n = ds.n();
  rep.muT_truncated = nv.muT_truncated;
  rep.DeltaC_floored = nv.DeltaC_floored;
  rep.deltaC_floored = nv.deltaC_floored;
  const double n = static_cast<double>(rep.n);
  rep.muT_truncated_frac = rep.muT_truncated / n;
  rep.DeltaC_floored_frac = rep.DeltaC_floored / n;
  rep.deltaC_floored_frac = rep.deltaC_floored / n;
  rep.phi_n = phi_n;
  rep.alpha_phi = cfg.alpha * phi_n;
  rep.kappa = cfg.kappa;
  rep.feasible = rep.alpha_phi < cfg.kappa;
  if (!rep.feasible)
    throw InfeasibleBudgetError("infeasible budget: alpha*phi_n = " +
                                std::to_string(rep.alpha_phi) +
                                " is not below kappa = " + std::to_string(cfg.kappa));
  return rep;
}

ValidationReport validate_conditions(const Dataset& ds, const ProblemConfig& cfg,
                                     const NuisanceBundle& nb) {
  const NuisanceValues nv = evaluate_nuisances(nb, ds, cfg);
  return validate_conditions(ds, cfg, nv, phi_one_step(ds, nv));
}

} // namespace costrule
