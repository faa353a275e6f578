#pragma once

#include "costrule/knapsack.hpp"
#include "costrule/nuisance.hpp"
#include "costrule/reference.hpp"
#include "costrule/types.hpp"

#include <span>
#include <vector>

namespace costrule {

// Outcome regression after the one-parameter fluctuation along
// (rho - rho_ref)/(t + muT - 1). Values are per observation.
struct TargetedOutcome {
  double epsilon = 0.0;
  bool logistic = false;
  std::vector<double> muY1, muY0, muYt;
  std::vector<double> DeltaY;
};

TargetedOutcome target_outcome_regression(const Dataset& ds, const NuisanceValues& nv,
                                          const TreatmentRule& rho,
                                          const TreatmentRule& ref_rule,
                                          const ProblemConfig& cfg);

struct AteEstimate {
  ReferenceKind reference = ReferenceKind::FR;
  double psi_n = 0.0;
  double sigma_n = 0.0;
  std::size_t n = 0;
  Interval ci_95{0.0, 0.0};
  double lower_975 = 0.0;
  std::vector<double> if_values;
};

// Everything the pointwise influence-function formulas read, bound to one
// estimation run and one reference rule.
struct GradientContext {
  const Dataset* ds = nullptr;
  const NuisanceValues* nv = nullptr;
  const TargetedOutcome* outcome = nullptr;
  const TreatmentRule* rho = nullptr;
  const ReferenceFit* ref = nullptr;
  double tau = 0.0;
  double phi_n = 0.0;
  double kappa = 0.0;
  double alpha = 1.0;
  double Psi_rho = 0.0;
  double Psi_ref = 0.0;
  double mean_muC0 = 0.0;
};

GradientContext make_gradient_context(const Dataset& ds, const NuisanceValues& nv,
                                      const TargetedOutcome& outcome,
                                      const KnapsackFit& knapsack,
                                      const ReferenceFit& ref,
                                      const ProblemConfig& cfg);

// Pointwise inputs for one observation.
struct ObsInputs {
  int t = 0;
  double y = 0.0, c = 0.0;
  double rho = 0.0;
  double muY_t = 0.0;
  double DeltaY = 0.0;
  double muT = 0.5;
  double muC_t = 0.0, muC0 = 0.0, DeltaC = 0.0;
};

// Gradient of the budget-penalized rule value at the plug-in.
double eval_D(const ObsInputs& o, double Psi_rho, double tau, double alpha,
              double kappa);
// Gradient of the never-treat cost phi.
double eval_D1(int t, double c, double muC0, double muT, double mean_muC0);
// Gradient of the mean cost contrast.
double eval_D2(int t, double c, double muC_t, double muT, double DeltaC,
               double mean_DeltaC);
// Difference D_R = G - G_R for the configured reference.
double eval_D_reference(ReferenceKind kind, std::size_t i, const GradientContext& ctx);

// Plug-in ATE of the estimated rule against the reference.
double estimate_ate(const GradientContext& ctx);

// Wald inference from the influence-function values; sigma is the sample
// standard deviation with divisor n-1.
AteEstimate infer(std::vector<double> if_values, double psi_n, ReferenceKind kind);

} // namespace costrule
