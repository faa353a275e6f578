#include "costrule/estimator.hpp"

#include <cmath>

namespace costrule {

namespace {

double score_residual(std::span<const double> h, std::span<const double> obs,
                      std::span<const double> fitted) {
  double s = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) s += h[i] * (obs[i] - fitted[i]);
  return std::abs(s);
}

} // namespace

EstimationResult run_estimation(const Dataset& ds, const ProblemConfig& cfg,
                                const NuisanceSpecs& specs, std::uint64_t fold_seed) {
  cfg.validate();
  EstimationResult out;
  const NuisanceBundle nb = fit_bundle(ds, specs, cfg);
  NuisanceValues nv = evaluate_nuisances(nb, ds, cfg);
  if (cfg.folds > 1) {
    const CrossFitPlan plan = make_cross_fit_plan(ds.n(), cfg.folds, fold_seed);
    nv.xi = cross_fit_xi(ds, specs, cfg, plan);
  }
  const double phi_n = phi_one_step(ds, nv);
  out.validation = validate_conditions(ds, cfg, nv, phi_n);
  out.knapsack = fit_knapsack(ds, nv, cfg, &out.warnings);

  if (!std::isinf(cfg.kappa)) {
    double cost = 0.0;
    for (std::size_t i = 0; i < ds.n(); ++i) {
      const Observation& o = ds[i];
      cost += out.knapsack.rule.at(i) *
              (nv.DeltaC[i] + (o.c - nv.muCt[i]) / nv.denom(o.t, i));
      cost += cfg.alpha * (nv.muC0[i] + (1 - o.t) * (o.c - nv.muC0[i]) / (1.0 - nv.muT[i]));
    }
    out.budget_residual = cost / static_cast<double>(ds.n()) - cfg.kappa;
  }

  out.references.reserve(cfg.references.size());
  for (const ReferenceSpec& spec : cfg.references) {
    ReferenceResult rr;
    rr.fit = fit_reference(spec, ds, nv, phi_n, cfg);
    rr.outcome = target_outcome_regression(ds, nv, out.knapsack.rule, rr.fit.rule, cfg);
    {
      std::vector<double> h(ds.n()), y(ds.n());
      for (std::size_t i = 0; i < ds.n(); ++i) {
        h[i] = (out.knapsack.rule.at(i) - rr.fit.rule.at(i)) / nv.denom(ds[i].t, i);
        y[i] = ds[i].y;
      }
      rr.muY_score = score_residual(h, y, rr.outcome.muYt);
    }
    if (rr.fit.targeted_muC) {
      std::vector<double> h(ds.n()), c(ds.n());
      for (std::size_t i = 0; i < ds.n(); ++i) {
        h[i] = 1.0 / nv.denom(ds[i].t, i);
        c[i] = ds[i].c;
      }
      rr.muC_score = score_residual(h, c, rr.fit.targeted_muC->muCt);
    }
    const GradientContext ctx =
        make_gradient_context(ds, nv, rr.outcome, out.knapsack, rr.fit, cfg);
    std::vector<double> if_values(ds.n());
    for (std::size_t i = 0; i < ds.n(); ++i)
      if_values[i] = eval_D_reference(spec.kind, i, ctx);
    rr.ate = infer(std::move(if_values), estimate_ate(ctx), spec.kind);
    out.references.push_back(std::move(rr));
  }
  return out;
}

} // namespace costrule
