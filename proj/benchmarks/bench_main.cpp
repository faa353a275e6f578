#include "costrule/dgp.hpp"
#include "costrule/estimator.hpp"
#include "costrule/knapsack.hpp"
#include "costrule/learners.hpp"
#include "costrule/nuisance.hpp"
#include "costrule/rng.hpp"
#include "costrule/sim.hpp"

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

namespace {

using namespace costrule;

Dataset make_data(DgpId id, std::size_t n) {
  Rng rng(404);
  return dgp_generate(id, n, rng);
}

void BM_logistic_fit(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const Dataset ds = make_data(DgpId::parametric, n);
  Eigen::MatrixXd x(n, 2);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x(static_cast<Eigen::Index>(i), 0) = ds[i].t;
    x(static_cast<Eigen::Index>(i), 1) = ds[i].w[0];
    y(static_cast<Eigen::Index>(i)) = ds[i].y;
  }
  LearnerSpec spec;
  spec.kind = LearnerKind::logistic;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit(spec, x, y));
  }
}
BENCHMARK(BM_logistic_fit)->Arg(1000)->Arg(4000);

void BM_knapsack_fit(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const Dataset ds = make_data(DgpId::parametric, n);
  const ProblemConfig cfg = dgp_default_config(DgpId::parametric);
  const NuisanceSpecs specs = default_nuisance_specs({DgpId::parametric, true});
  const NuisanceValues nv = evaluate_nuisances(fit_bundle(ds, specs, cfg), ds, cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_knapsack(ds, nv, cfg));
  }
}
BENCHMARK(BM_knapsack_fit)->Arg(1000)->Arg(4000);

void BM_full_estimation(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const Dataset ds = make_data(DgpId::parametric, n);
  const ProblemConfig cfg = dgp_default_config(DgpId::parametric);
  const NuisanceSpecs specs = default_nuisance_specs({DgpId::parametric, false});
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_estimation(ds, cfg, specs, 7));
  }
}
BENCHMARK(BM_full_estimation)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
