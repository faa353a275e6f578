#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "costrule/dgp.hpp"
#include "costrule/sim.hpp"
#include "costrule/types.hpp"

#include <cmath>
#include <vector>

using namespace costrule;

namespace {

// Midpoint quadrature over the uniform covariate of the one-dimensional
// design; an independent check on the mega-sample averages.
double quadrature_mean(double (*f)(double)) {
  const int m = 10000;
  double s = 0.0;
  for (int i = 0; i < m; ++i) {
    const double w = -1.0 + 2.0 * (i + 0.5) / m;
    s += f(w);
  }
  return s / m;
}

double delta_y(double w) {
  return expit(1.4 - 0.7 - 0.3 * w) - expit(-0.7 - 0.3 * w);
}

double delta_c(double w) { return expit(1.0 + w) - expit(-1.0 + w); }

double mu_c0(double w) { return expit(-1.0 + w); }

double mu_t_delta_y(double w) { return expit(w) * delta_y(w); }

}  // namespace

TEST_CASE("population summaries match quadrature on the one-dimensional design") {
  const DgpSpec dgp{DgpId::parametric, true};
  const ProblemConfig cfg = dgp_default_config(DgpId::parametric);
  const TruthResult truth = truth_psi0(dgp, cfg, 2000000, 12345);

  const double phi_quad = quadrature_mean(mu_c0);
  const double phi_closed = 0.5 * (std::log(2.0) - std::log(1.0 + std::exp(-2.0)));
  CHECK(phi_quad == doctest::Approx(phi_closed).epsilon(1e-6));
  CHECK(truth.phi0 == doctest::Approx(phi_closed).epsilon(0.002));

  CHECK(truth.mean_DeltaY == doctest::Approx(quadrature_mean(delta_y)).epsilon(0.002));
  CHECK(truth.mean_DeltaC == doctest::Approx(quadrature_mean(delta_c)).epsilon(0.002));
  CHECK(truth.mean_DeltaC == doctest::Approx(0.433781).epsilon(0.002));
  CHECK(truth.mean_muT_DeltaY ==
        doctest::Approx(quadrature_mean(mu_t_delta_y)).epsilon(0.002));

  const double rd_expect = (cfg.kappa - phi_closed) / quadrature_mean(delta_c);
  CHECK(truth.rd0 == doctest::Approx(rd_expect).epsilon(0.01));
  CHECK(truth.rd0 == doctest::Approx(0.1542).epsilon(0.01));

  CHECK(truth.eta0 > 0.7);
  CHECK(truth.eta0 < 0.87);
  CHECK(truth.tau0 == truth.eta0);
  CHECK(truth.boundary0 >= 0.0);
  CHECK(truth.boundary0 <= 1.0);
  CHECK(truth.psi0_self == 0.0);

  CHECK(truth.psi0({ReferenceKind::FR, 0.0}) == doctest::Approx(truth.value_opt));
  CHECK(truth.psi0({ReferenceKind::RD, 0.0}) ==
        doctest::Approx(truth.value_opt - truth.rd0 * truth.mean_DeltaY));
  CHECK(truth.psi0({ReferenceKind::TP, 0.0}) ==
        doctest::Approx(truth.value_opt - truth.mean_muT_DeltaY));
}

TEST_CASE("an unlimited budget treats everyone with a positive effect") {
  const DgpSpec dgp{DgpId::parametric, true};
  ProblemConfig cfg = dgp_default_config(DgpId::parametric);
  cfg.kappa = kInfiniteBudget;
  const TruthResult truth = truth_psi0(dgp, cfg, 500000, 7);
  CHECK(truth.value_opt == doctest::Approx(truth.mean_DeltaY).epsilon(1e-12));
  CHECK(truth.rd0 == 1.0);
  CHECK(truth.tau0 == 0.0);

  CHECK_THROWS(truth_psi0(dgp, cfg, 0, 7));
}

TEST_CASE("study learner defaults follow the design") {
  const NuisanceSpecs oracle = default_nuisance_specs({DgpId::main_study, true});
  CHECK(oracle.muY.kind == LearnerKind::oracle);
  CHECK(oracle.muC.kind == LearnerKind::oracle);
  CHECK(oracle.muT.kind == LearnerKind::oracle);
  CHECK(oracle.muY.oracle_dgp == DgpId::main_study);
  CHECK_FALSE(oracle.pairwise_interactions);

  const NuisanceSpecs par = default_nuisance_specs({DgpId::parametric, false});
  CHECK(par.muY.kind == LearnerKind::logistic);
  CHECK_FALSE(par.pairwise_interactions);

  const NuisanceSpecs main_fit = default_nuisance_specs({DgpId::main_study, false});
  CHECK(main_fit.muY.kind == LearnerKind::logistic);
  CHECK(main_fit.pairwise_interactions);
}

TEST_CASE("replication studies are deterministic and thread-invariant") {
  const DgpSpec dgp{DgpId::parametric, true};
  const ProblemConfig cfg = dgp_default_config(DgpId::parametric);
  const NuisanceSpecs specs = default_nuisance_specs(dgp);
  const TruthResult truth = truth_psi0(dgp, cfg, 200000, 99);

  const SimulationReport a = monte_carlo(dgp, cfg, specs, 400, 8, 4242, 2, truth);
  const SimulationReport b = monte_carlo(dgp, cfg, specs, 400, 8, 4242, 1, truth);
  const SimulationReport c = monte_carlo(dgp, cfg, specs, 400, 8, 4242, 3, truth);
  const SimulationReport d = monte_carlo(dgp, cfg, specs, 400, 8, 4243, 2, truth);

  REQUIRE(a.references.size() == 3);
  CHECK(a.reps_completed == 8);
  CHECK(a.reps_failed == 0);
  for (std::size_t j = 0; j < 3; ++j) {
    REQUIRE(a.references[j].psi_values.size() == 8);
    CHECK(a.references[j].psi_values == b.references[j].psi_values);
    CHECK(a.references[j].psi_values == c.references[j].psi_values);
    CHECK(a.references[j].sigma_values == b.references[j].sigma_values);
    CHECK(a.references[j].psi_values != d.references[j].psi_values);
    CHECK(a.references[j].coverage_95 >= 0.0);
    CHECK(a.references[j].coverage_95 <= 1.0);
    CHECK(std::isfinite(a.references[j].bias));
    CHECK(std::isfinite(a.references[j].rmse));
    CHECK(a.references[j].rmse >= std::abs(a.references[j].bias));
    CHECK(a.references[j].mean_se > 0.0);
    CHECK(a.references[j].se_sd_ratio > 0.0);
  }
}

TEST_CASE("metrics arithmetic matches a direct recount") {
  const DgpSpec dgp{DgpId::parametric, true};
  const ProblemConfig cfg = dgp_default_config(DgpId::parametric);
  const NuisanceSpecs specs = default_nuisance_specs(dgp);
  const TruthResult truth = truth_psi0(dgp, cfg, 200000, 99);
  const SimulationReport rep = monte_carlo(dgp, cfg, specs, 300, 6, 7, 2, truth);

  for (const ReferenceMetrics& m : rep.references) {
    double bias = 0.0, mse = 0.0;
    for (double psi : m.psi_values) {
      bias += psi - m.psi0;
      mse += (psi - m.psi0) * (psi - m.psi0);
    }
    bias /= static_cast<double>(m.psi_values.size());
    mse /= static_cast<double>(m.psi_values.size());
    CHECK(m.bias == doctest::Approx(bias).epsilon(1e-12));
    CHECK(m.rmse == doctest::Approx(std::sqrt(mse)).epsilon(1e-12));
    double mean_se = 0.0;
    for (double s : m.sigma_values) mean_se += s / std::sqrt(300.0);
    mean_se /= static_cast<double>(m.sigma_values.size());
    CHECK(m.mean_se == doctest::Approx(mean_se).epsilon(1e-12));
    CHECK(m.se_sd_ratio == doctest::Approx(m.mean_se / m.sd_psi).epsilon(1e-12));
  }
}

TEST_CASE("a single replication leaves the spread undefined") {
  const DgpSpec dgp{DgpId::parametric, true};
  const ProblemConfig cfg = dgp_default_config(DgpId::parametric);
  const NuisanceSpecs specs = default_nuisance_specs(dgp);
  const TruthResult truth = truth_psi0(dgp, cfg, 100000, 99);
  const SimulationReport rep = monte_carlo(dgp, cfg, specs, 300, 1, 5, 1, truth);
  CHECK(rep.reps_completed == 1);
  for (const ReferenceMetrics& m : rep.references) {
    CHECK(std::isnan(m.sd_psi));
    CHECK(std::isnan(m.se_sd_ratio));
    CHECK((m.coverage_95 == 0.0 || m.coverage_95 == 1.0));
  }

  CHECK_THROWS(monte_carlo(dgp, cfg, specs, 300, 0, 5, 1, truth));
}

TEST_CASE("oracle replication studies on the three-covariate design stay stable") {
  const DgpSpec dgp{DgpId::main_study, true};
  const ProblemConfig cfg = dgp_default_config(DgpId::main_study);
  const NuisanceSpecs specs = default_nuisance_specs(dgp);
  const TruthResult truth = truth_psi0(dgp, cfg, 300000, 99);
  CHECK(truth.phi0 > 0.0);
  CHECK(truth.phi0 < cfg.kappa);

  const SimulationReport rep = monte_carlo(dgp, cfg, specs, 250, 4, 11, 2, truth);
  CHECK(rep.reps_completed == 4);
  for (const ReferenceMetrics& m : rep.references) {
    for (double psi : m.psi_values) CHECK(std::isfinite(psi));
    for (double s : m.sigma_values) CHECK(s > 0.0);
  }
}
