#pragma once

#include "costrule/dgp.hpp"
#include "costrule/estimator.hpp"
#include "costrule/nuisance.hpp"
#include "costrule/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace costrule {

struct DgpSpec {
  DgpId id = DgpId::parametric;
  // Replaces fitted nuisances with the generating truth.
  bool oracle_nuisances = false;
};

// Learners the study designs call for: logistic main effects for the
// parametric design, oracle closures in oracle mode, and interaction-basis
// logistic fits otherwise.
NuisanceSpecs default_nuisance_specs(const DgpSpec& dgp);

// Population quantities under a design, computed on a mega-sample with the
// analytic nuisance closures. psi0_self is the optimal rule against itself.
struct TruthResult {
  double phi0 = 0.0;
  double eta0 = 0.0;
  double tau0 = 0.0;
  double boundary0 = 0.0;
  double rd0 = 1.0;
  double value_opt = 0.0;
  double mean_DeltaY = 0.0;
  double mean_muT_DeltaY = 0.0;
  double mean_DeltaC = 0.0;
  double psi0_self = 0.0;
  std::size_t samples = 0;

  double psi0(const ReferenceSpec& spec) const;
};

TruthResult truth_psi0(const DgpSpec& dgp, const ProblemConfig& cfg,
                       std::size_t samples, std::uint64_t seed);

struct ReferenceMetrics {
  ReferenceSpec spec;
  double psi0 = 0.0;
  double coverage_95 = 0.0;
  double coverage_lower_975 = 0.0;
  double bias = 0.0;
  double rmse = 0.0;
  double se_sd_ratio = 0.0;
  double mean_se = 0.0;
  double sd_psi = 0.0;
  std::vector<double> psi_values;
  std::vector<double> sigma_values;
  std::vector<double> scaled_ci_widths;
};

struct SimulationReport {
  DgpId dgp = DgpId::parametric;
  bool oracle_nuisances = false;
  std::size_t n = 0;
  int reps_requested = 0;
  int reps_completed = 0;
  int reps_failed = 0;
  std::uint64_t master_seed = 0;
  std::vector<ReferenceMetrics> references;
  std::vector<std::string> failure_messages;
};

// Runs the full estimation pipeline on `reps` independent datasets of size n,
// scoring each reference against the supplied truth. Child seeds derive from
// (master_seed, replication index), so results do not depend on thread count
// or execution order. Failed replications are excluded and counted.
SimulationReport monte_carlo(const DgpSpec& dgp, const ProblemConfig& cfg,
                             const NuisanceSpecs& specs, std::size_t n, int reps,
                             std::uint64_t master_seed, int threads,
                             const TruthResult& truth);

} // namespace costrule
