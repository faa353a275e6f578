#pragma once

#include "costrule/nuisance.hpp"
#include "costrule/types.hpp"

#include <span>
#include <string>
#include <vector>

namespace costrule {

// A treatment rule materialized over the sample. Threshold rules treat above
// eta, randomize on exact ties, never treat below; constant and propensity
// rules carry their per-observation probabilities directly.
struct TreatmentRule {
  enum class Kind { threshold, constant, propensity };
  Kind kind = Kind::threshold;
  std::vector<double> xi;
  double eta = 0.0;
  double boundary_prob = 0.0;
  double p = 0.0;
  std::vector<double> values;
  bool boundary_clamped = false;

  double at(std::size_t i) const { return values[i]; }
};

// One-step estimate of the mean cost under never-treat.
double phi_one_step(const Dataset& ds, const NuisanceValues& nv);

struct GammaPair {
  double Gamma = 0.0;
  double gamma = 0.0;
};

// Mean floored cost contrast over strict exceedances of tau (Gamma) and over
// exact ties (gamma). Ties arise structurally: thresholds are observed xi.
GammaPair empirical_gamma(std::span<const double> xi, std::span<const double> DeltaC,
                          double tau);

struct BudgetRule {
  double eta = 0.0;
  double tau = 0.0;
  double boundary_prob = 0.0;
  std::vector<double> d;
};

// Spends budget k - alpha*phi greedily down the sorted xi levels; eta is the
// level where it runs out (-inf when it never does) and d randomizes ties at
// eta to saturate exactly. Thresholds at eta, not tau.
BudgetRule solve_rule_at_budget(std::span<const double> xi,
                                std::span<const double> DeltaC, double k,
                                double alpha, double phi_n);

struct BudgetCalibration {
  double k_n = 0.0;
  bool saturated = false;
};

// Solves for the budget level k at which the one-step estimate of the rule's
// cost equals kappa. The estimating equation is affine in k between the
// cumulative-cost breakpoints, so each segment yields a closed-form
// candidate; the root closest to kappa wins. Falls back to kappa itself when
// the threshold at kappa is not positive or no root exists.
BudgetCalibration calibrate_budget(const Dataset& ds, const NuisanceValues& nv,
                                   const ProblemConfig& cfg, double phi_n);

// Threshold rule at tau = max(eta(k_n), 0) with the tie probability that
// spends the remaining budget; out-of-range tie probabilities are clamped
// into [0,1] with a warning.
TreatmentRule build_rho(std::span<const double> xi, std::span<const double> DeltaC,
                        double k_n, double alpha, double phi_n,
                        std::vector<std::string>* warnings = nullptr);

struct KnapsackFit {
  double phi_n = 0.0;
  double eta_kappa = 0.0;
  double tau_kappa = 0.0;
  double k_n = 0.0;
  bool saturated = false;
  TreatmentRule rule;
};

KnapsackFit fit_knapsack(const Dataset& ds, const NuisanceValues& nv,
                         const ProblemConfig& cfg,
                         std::vector<std::string>* warnings = nullptr);

} // namespace costrule
