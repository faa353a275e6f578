#include "costrule/sim.hpp"

#include "costrule/knapsack.hpp"
#include "costrule/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace costrule {

NuisanceSpecs default_nuisance_specs(const DgpSpec& dgp) {
  NuisanceSpecs specs;
  if (dgp.oracle_nuisances) {
    for (auto* s : {&specs.muY, &specs.muC, &specs.muT}) {
      s->kind = LearnerKind::oracle;
      s->oracle_dgp = dgp.id;
    }
    specs.delta.kind = LearnerKind::linear;
    return specs;
  }
  for (auto* s : {&specs.muY, &specs.muC, &specs.muT}) s->kind = LearnerKind::logistic;
  specs.delta.kind = LearnerKind::linear;
  specs.pairwise_interactions = dgp.id == DgpId::main_study;
  return specs;
}

double TruthResult::psi0(const ReferenceSpec& spec) const {
  switch (spec.kind) {
    case ReferenceKind::FR: return value_opt - spec.fr_p * mean_DeltaY;
    case ReferenceKind::RD: return value_opt - rd0 * mean_DeltaY;
    case ReferenceKind::TP: return value_opt - mean_muT_DeltaY;
  }
  throw std::logic_error("unreachable reference kind");
}

TruthResult truth_psi0(const DgpSpec& dgp, const ProblemConfig& cfg,
                       std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("truth_psi0: samples must be positive");
  const std::size_t dim = dgp.id == DgpId::main_study ? 3 : 1;
  std::vector<double> xi(samples), DeltaC(samples), DeltaY(samples), muT(samples);
  TruthResult out;
  out.samples = samples;
  Rng rng(seed);
  std::vector<double> w(dim);
  for (std::size_t i = 0; i < samples; ++i) {
    if (dgp.id == DgpId::main_study) {
      w[0] = rng.uniform(-1.0, 1.0);
      w[1] = rng.bernoulli(0.8) ? 1.0 : 0.0;
      w[2] = rng.normal();
    } else {
      w[0] = rng.uniform(-1.0, 1.0);
    }
    muT[i] = dgp_truth(dgp.id, NuisanceTarget::muT, 0, w);
    DeltaY[i] = dgp_truth(dgp.id, NuisanceTarget::muY, 1, w) -
                dgp_truth(dgp.id, NuisanceTarget::muY, 0, w);
    DeltaC[i] = dgp_truth(dgp.id, NuisanceTarget::muC, 1, w) -
                dgp_truth(dgp.id, NuisanceTarget::muC, 0, w);
    xi[i] = DeltaY[i] / DeltaC[i];
    out.phi0 += dgp_truth(dgp.id, NuisanceTarget::muC, 0, w);
    out.mean_DeltaY += DeltaY[i];
    out.mean_muT_DeltaY += muT[i] * DeltaY[i];
    out.mean_DeltaC += DeltaC[i];
  }
  const double m = static_cast<double>(samples);
  out.phi0 /= m;
  out.mean_DeltaY /= m;
  out.mean_muT_DeltaY /= m;
  out.mean_DeltaC /= m;

  const BudgetRule at_kappa = solve_rule_at_budget(xi, DeltaC, cfg.kappa, cfg.alpha, out.phi0);
  out.eta0 = at_kappa.eta;
  out.tau0 = at_kappa.tau;
  const TreatmentRule rho0 = build_rho(xi, DeltaC, cfg.kappa, cfg.alpha, out.phi0);
  out.boundary0 = rho0.boundary_prob;
  double value = 0.0;
  for (std::size_t i = 0; i < samples; ++i) value += rho0.at(i) * DeltaY[i];
  out.value_opt = value / m;

  if (std::isinf(cfg.kappa)) {
    out.rd0 = 1.0;
  } else {
    out.rd0 = std::min(1.0, (cfg.kappa - cfg.alpha * out.phi0) / out.mean_DeltaC);
  }
  double self_contrast = 0.0;
  for (std::size_t i = 0; i < samples; ++i)
    self_contrast += (rho0.at(i) - rho0.at(i)) * DeltaY[i];
  out.psi0_self = self_contrast / m;
  return out;
}

namespace {

struct RepOutcome {
  bool ok = false;
  std::string error;
  std::vector<double> psi, sigma, lo, hi, lower;
};

RepOutcome run_replication(const DgpSpec& dgp, const ProblemConfig& cfg,
                           const NuisanceSpecs& specs, std::size_t n,
                           std::uint64_t child_seed) {
  RepOutcome rec;
  try {
    Rng rng(child_seed);
    const Dataset ds = dgp_generate(dgp.id, n, rng);
    const EstimationResult res =
        run_estimation(ds, cfg, specs, mix_seed(child_seed, 1));
    for (const ReferenceResult& rr : res.references) {
      rec.psi.push_back(rr.ate.psi_n);
      rec.sigma.push_back(rr.ate.sigma_n);
      rec.lo.push_back(rr.ate.ci_95.first);
      rec.hi.push_back(rr.ate.ci_95.second);
      rec.lower.push_back(rr.ate.lower_975);
    }
    rec.ok = true;
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

} // namespace

SimulationReport monte_carlo(const DgpSpec& dgp, const ProblemConfig& cfg,
                             const NuisanceSpecs& specs, std::size_t n, int reps,
                             std::uint64_t master_seed, int threads,
                             const TruthResult& truth) {
  if (reps < 1) throw std::invalid_argument("monte_carlo: reps must be >= 1");
  cfg.validate();
  SimulationReport rep;
  rep.dgp = dgp.id;
  rep.oracle_nuisances = dgp.oracle_nuisances;
  rep.n = n;
  rep.reps_requested = reps;
  rep.master_seed = master_seed;

  std::vector<RepOutcome> records(static_cast<std::size_t>(reps));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= reps) return;
      records[static_cast<std::size_t>(r)] = run_replication(
          dgp, cfg, specs, n, mix_seed(master_seed, static_cast<std::uint64_t>(r)));
    }
  };
  const int pool = std::max(1, threads);
  if (pool == 1) {
    worker();
  } else {
    std::vector<std::thread> workers;
    for (int i = 1; i < pool; ++i) workers.emplace_back(worker);
    worker();
    for (auto& t : workers) t.join();
  }

  const std::size_t n_ref = cfg.references.size();
  rep.references.resize(n_ref);
  for (std::size_t j = 0; j < n_ref; ++j) {
    rep.references[j].spec = cfg.references[j];
    rep.references[j].psi0 = truth.psi0(cfg.references[j]);
  }
  for (const RepOutcome& rec : records) {
    if (!rec.ok) {
      ++rep.reps_failed;
      if (rep.failure_messages.size() < 10) rep.failure_messages.push_back(rec.error);
      continue;
    }
    ++rep.reps_completed;
    for (std::size_t j = 0; j < n_ref; ++j) {
      ReferenceMetrics& mref = rep.references[j];
      const double psi0 = mref.psi0;
      mref.psi_values.push_back(rec.psi[j]);
      mref.sigma_values.push_back(rec.sigma[j]);
      mref.scaled_ci_widths.push_back(std::sqrt(static_cast<double>(n)) *
                                      (rec.hi[j] - rec.lo[j]));
      mref.coverage_95 += (psi0 >= rec.lo[j] && psi0 <= rec.hi[j]) ? 1.0 : 0.0;
      mref.coverage_lower_975 += (rec.lower[j] <= psi0) ? 1.0 : 0.0;
      mref.bias += rec.psi[j] - psi0;
      mref.rmse += (rec.psi[j] - psi0) * (rec.psi[j] - psi0);
      mref.mean_se += rec.sigma[j] / std::sqrt(static_cast<double>(n));
    }
  }
  const double done = static_cast<double>(rep.reps_completed);
  for (ReferenceMetrics& mref : rep.references) {
    if (rep.reps_completed == 0) {
      mref.se_sd_ratio = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    mref.coverage_95 /= done;
    mref.coverage_lower_975 /= done;
    mref.bias /= done;
    mref.rmse = std::sqrt(mref.rmse / done);
    mref.mean_se /= done;
    double mean_psi = 0.0;
    for (double v : mref.psi_values) mean_psi += v;
    mean_psi /= done;
    double ss = 0.0;
    for (double v : mref.psi_values) ss += (v - mean_psi) * (v - mean_psi);
    mref.sd_psi = rep.reps_completed > 1 ? std::sqrt(ss / (done - 1.0))
                                         : std::numeric_limits<double>::quiet_NaN();
    mref.se_sd_ratio = mref.sd_psi > 0.0
                           ? mref.mean_se / mref.sd_psi
                           : std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

} // namespace costrule
