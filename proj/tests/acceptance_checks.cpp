// Acceptance gates for the estimator. Prints one PASS/FAIL line per
// criterion and exits nonzero if any fails.
#include "costrule/dgp.hpp"
#include "costrule/estimator.hpp"
#include "costrule/knapsack.hpp"
#include "costrule/rng.hpp"
#include "costrule/sim.hpp"
#include "costrule/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace costrule;

namespace {

int g_failures = 0;

void verdict(bool ok, const std::string& name, const std::string& detail) {
  if (!ok) ++g_failures;
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
}

void note(const std::string& msg) {
  std::fprintf(stderr, "... %s\n", msg.c_str());
}

int hw_threads() {
  const int t = static_cast<int>(std::thread::hardware_concurrency());
  return t < 1 ? 1 : t;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

SimulationReport run_suite(DgpId id, bool oracle, std::size_t n, int reps,
                           std::uint64_t seed) {
  const DgpSpec dgp{id, oracle};
  const ProblemConfig cfg = dgp_default_config(id);
  const NuisanceSpecs specs = default_nuisance_specs(dgp);
  const TruthResult truth =
      truth_psi0(dgp, cfg, 2000000, mix_seed(seed, ~std::uint64_t{0}));
  return monte_carlo(dgp, cfg, specs, n, reps, seed, hw_threads(), truth);
}

// Coverage / bias / RMSE of a three-reference suite against target values.
void gate_suite(const std::string& name, const SimulationReport& rep,
                const double cover_target[3], double cover_tol,
                const double* bias_target, double bias_tol,
                const double* rmse_target, double rmse_rel,
                const double* se_sd_band) {
  bool ok = rep.reps_failed == 0 && rep.references.size() == 3;
  std::ostringstream detail;
  detail << "completed " << rep.reps_completed << "/" << rep.reps_requested;
  for (std::size_t j = 0; j < rep.references.size(); ++j) {
    const ReferenceMetrics& m = rep.references[j];
    detail << "; " << to_string(m.spec.kind) << " cover=" << fmt(m.coverage_95)
           << " (want " << fmt(cover_target[j]) << "+-" << fmt(cover_tol) << ")";
    ok = ok && std::abs(m.coverage_95 - cover_target[j]) <= cover_tol;
    if (bias_target) {
      detail << " bias=" << fmt(m.bias) << " (want " << fmt(bias_target[j])
             << "+-" << fmt(bias_tol) << ")";
      ok = ok && std::abs(m.bias - bias_target[j]) <= bias_tol;
    } else {
      detail << " |bias|=" << fmt(std::abs(m.bias)) << " (<=" << fmt(bias_tol) << ")";
      ok = ok && std::abs(m.bias) <= bias_tol;
    }
    if (rmse_target) {
      detail << " rmse=" << fmt(m.rmse) << " (want " << fmt(rmse_target[j])
             << "+-" << fmt(100 * rmse_rel) << "%)";
      ok = ok && std::abs(m.rmse - rmse_target[j]) <= rmse_rel * rmse_target[j];
    }
    if (se_sd_band) {
      detail << " se/sd=" << fmt(m.se_sd_ratio);
      ok = ok && m.se_sd_ratio >= se_sd_band[0] && m.se_sd_ratio <= se_sd_band[1];
    }
  }
  verdict(ok, name, detail.str());
}

void gate_lower_bound(const SimulationReport& a, const SimulationReport& b) {
  bool ok = true;
  std::ostringstream detail;
  detail << "97.5% lower bound covers psi0 at rate >= 0.94:";
  for (const SimulationReport* rep : {&a, &b}) {
    detail << " [" << to_string(rep->dgp) << (rep->oracle_nuisances ? "/oracle" : "");
    for (const ReferenceMetrics& m : rep->references) {
      detail << " " << fmt(m.coverage_lower_975);
      ok = ok && m.coverage_lower_975 >= 0.94;
    }
    detail << "]";
  }
  verdict(ok, "lower-bound-coverage", detail.str());
}

// Exact fractional-knapsack LP optimum by enumeration: some subset at 1 plus
// at most one fractional item is optimal for every small instance.
double lp_optimum(const std::vector<double>& xi, const std::vector<double>& dc,
                  double budget) {
  const std::size_t n = xi.size();
  double best = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double cost = 0.0, value = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) {
        cost += dc[i];
        value += xi[i] * dc[i];
      }
    if (cost > budget + 1e-12) continue;
    best = std::max(best, value);
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) continue;
      const double frac = std::min(1.0, (budget - cost) / dc[i]);
      if (frac > 0.0) best = std::max(best, value + frac * xi[i] * dc[i]);
    }
  }
  return best;
}

void gate_knapsack() {
  Rng rng(99);
  int bad_value = 0, bad_spend = 0;
  double worst_gap = 0.0;
  const int instances = 1000;
  for (int it = 0; it < instances; ++it) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 12);
    std::vector<double> xi(n), dc(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      xi[i] = (i > 0 && rng.uniform() < 0.3) ? xi[i - 1] : rng.uniform(-1.0, 2.0);
      dc[i] = rng.uniform(0.1, 1.0);
      total += dc[i];
    }
    const double b = rng.uniform() * 1.1 * total / static_cast<double>(n);
    const TreatmentRule rule = build_rho(xi, dc, b, 0.0, 0.0);
    double spend = 0.0, value = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      spend += rule.values[i] * dc[i];
      value += rule.values[i] * xi[i] * dc[i];
    }
    spend /= static_cast<double>(n);
    value /= static_cast<double>(n);
    const double lp = lp_optimum(xi, dc, b * static_cast<double>(n)) /
                      static_cast<double>(n);
    const double gap = std::abs(value - lp);
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-12 * std::max(1.0, std::abs(lp))) ++bad_value;
    if (spend > b + 1e-12) ++bad_spend;
  }
  std::ostringstream detail;
  detail << instances << " random instances; worst |value - LP optimum| = "
         << fmt(worst_gap) << "; objective mismatches " << bad_value
         << "; budget violations " << bad_spend;
  verdict(bad_value == 0 && bad_spend == 0, "knapsack-lp-equivalence", detail.str());
}

void gate_score_equations() {
  double worst_score = 0.0, worst_residual = 0.0;
  int violations = 0, runs = 0, saturated_runs = 0;
  std::string first_error;
  const std::size_t n = 800;
  struct Suite {
    DgpId id;
    bool oracle;
    int reps;
  };
  for (const Suite& s : {Suite{DgpId::parametric, false, 30},
                         Suite{DgpId::main_study, true, 20}}) {
    const ProblemConfig cfg = dgp_default_config(s.id);
    const NuisanceSpecs specs = default_nuisance_specs({s.id, s.oracle});
    for (int r = 0; r < s.reps; ++r) {
      Rng rng(mix_seed(7000, static_cast<std::uint64_t>(runs)));
      const Dataset ds = dgp_generate(s.id, n, rng);
      ++runs;
      try {
        const EstimationResult res = run_estimation(ds, cfg, specs, 7);
        for (const ReferenceResult& rr : res.references) {
          worst_score = std::max({worst_score, rr.muY_score, rr.muC_score});
          if (rr.muY_score > 1e-8 * n || rr.muC_score > 1e-8 * n) ++violations;
        }
        if (res.knapsack.saturated) {
          ++saturated_runs;
          worst_residual = std::max(worst_residual, std::abs(res.budget_residual));
          if (std::abs(res.budget_residual) > 1e-8) ++violations;
        }
      } catch (const std::exception& e) {
        ++violations;
        if (first_error.empty()) first_error = e.what();
      }
    }
  }
  std::ostringstream detail;
  detail << runs << " estimation runs; worst fluctuation score " << fmt(worst_score)
         << " (limit " << fmt(1e-8 * n) << "); " << saturated_runs
         << " saturated with worst |budget residual| " << fmt(worst_residual)
         << " (limit 1e-08)";
  if (!first_error.empty()) detail << "; first error: " << first_error;
  verdict(violations == 0, "score-equations", detail.str());
}

void gate_width_scaling(const SimulationReport& at_1000,
                        const SimulationReport& at_4000) {
  bool ok = true;
  std::ostringstream detail;
  detail << "median sqrt(n)*width at n=1000 vs n=4000:";
  for (std::size_t j = 0; j < at_1000.references.size(); ++j) {
    const double m1 = median(at_1000.references[j].scaled_ci_widths);
    const double m4 = median(at_4000.references[j].scaled_ci_widths);
    const double rel = std::abs(m1 - m4) / m4;
    detail << " " << to_string(at_1000.references[j].spec.kind) << " "
           << fmt(m1) << "/" << fmt(m4) << " (drift " << fmt(100 * rel) << "%)";
    ok = ok && rel <= 0.20;
  }
  verdict(ok, "ci-width-scaling", detail.str());
}

}  // namespace

int main() {
  note("replication suite: parametric design, n=4000, logistic learners");
  const SimulationReport parametric = run_suite(DgpId::parametric, false, 4000, 1000, 1729);
  const double cover_p[3] = {0.94, 0.88, 0.93};
  const double bias_p[3] = {-0.0037, -0.0036, -0.0035};
  const double rmse_p[3] = {0.012, 0.009, 0.013};
  gate_suite("parametric-simulation", parametric, cover_p, 0.03, bias_p, 0.003,
             rmse_p, 0.30, nullptr);

  note("replication suite: three-covariate design, n=1000, oracle nuisances");
  const SimulationReport oracle = run_suite(DgpId::main_study, true, 1000, 1000, 271828);
  const double cover_o[3] = {0.94, 0.94, 0.93};
  const double se_sd_band[2] = {0.85, 1.15};
  gate_suite("oracle-simulation", oracle, cover_o, 0.03, nullptr, 0.005, nullptr,
             0.0, se_sd_band);

  gate_lower_bound(parametric, oracle);

  note("knapsack LP equivalence on random instances");
  gate_knapsack();

  note("fluctuation score equations across estimation runs");
  gate_score_equations();

  note("replication suite: three-covariate design, n=4000, oracle nuisances");
  const SimulationReport oracle_4000 =
      run_suite(DgpId::main_study, true, 4000, 300, 314159);
  gate_width_scaling(oracle, oracle_4000);

  std::printf("%d of 6 criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
