#include "costrule/tmle.hpp"

#include "fluctuation.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace costrule {

namespace {

constexpr double kZ975 = 1.959963984540054;

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double mean_product(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s / static_cast<double>(a.size());
}

} // namespace

TargetedOutcome target_outcome_regression(const Dataset& ds, const NuisanceValues& nv,
                                          const TreatmentRule& rho,
                                          const TreatmentRule& ref_rule,
                                          const ProblemConfig& cfg) {
  const std::size_t n = ds.n();
  std::vector<double> h(n), obs(n);
  for (std::size_t i = 0; i < n; ++i) {
    h[i] = (rho.at(i) - ref_rule.at(i)) / nv.denom(ds[i].t, i);
    obs[i] = ds[i].y;
  }
  TargetedOutcome out;
  out.logistic = cfg.y_bounds.has_value();
  out.epsilon = out.logistic
                    ? detail::logistic_epsilon(h, obs, nv.muYt, *cfg.y_bounds)
                    : detail::ols_epsilon(h, obs, nv.muYt);
  out.muY1.resize(n);
  out.muY0.resize(n);
  out.muYt.resize(n);
  out.DeltaY.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double num = rho.at(i) - ref_rule.at(i);
    const double h1 = num / nv.muT[i];
    const double h0 = -num / (1.0 - nv.muT[i]);
    out.muY1[i] = detail::fluctuate(nv.muY1[i], h1, out.epsilon, out.logistic, cfg.y_bounds);
    out.muY0[i] = detail::fluctuate(nv.muY0[i], h0, out.epsilon, out.logistic, cfg.y_bounds);
    out.muYt[i] = ds[i].t == 1 ? out.muY1[i] : out.muY0[i];
    out.DeltaY[i] = out.muY1[i] - out.muY0[i];
  }
  return out;
}

GradientContext make_gradient_context(const Dataset& ds, const NuisanceValues& nv,
                                      const TargetedOutcome& outcome,
                                      const KnapsackFit& knapsack,
                                      const ReferenceFit& ref,
                                      const ProblemConfig& cfg) {
  GradientContext ctx;
  ctx.ds = &ds;
  ctx.nv = &nv;
  ctx.outcome = &outcome;
  ctx.rho = &knapsack.rule;
  ctx.ref = &ref;
  ctx.tau = knapsack.rule.eta;
  ctx.phi_n = knapsack.phi_n;
  ctx.kappa = cfg.kappa;
  ctx.alpha = cfg.alpha;
  ctx.Psi_rho = mean_product(knapsack.rule.values, outcome.DeltaY);
  ctx.Psi_ref = mean_product(ref.rule.values, outcome.DeltaY);
  ctx.mean_muC0 = mean_of(nv.muC0);
  return ctx;
}

double eval_D(const ObsInputs& o, double Psi_rho, double tau, double alpha,
              double kappa) {
  const double denom = o.t + o.muT - 1.0;
  double out = o.rho * ((o.y - o.muY_t) / denom + o.DeltaY) - Psi_rho;
  if (tau != 0.0) {
    const double rule_cost = o.rho * ((o.c - o.muC_t) / denom + o.DeltaC);
    const double base_cost =
        alpha * ((1 - o.t) * (o.c - o.muC0) / (1.0 - o.muT) + o.muC0);
    out -= tau * (rule_cost + base_cost - kappa);
  }
  return out;
}

double eval_D1(int t, double c, double muC0, double muT, double mean_muC0) {
  return (1 - t) * (c - muC0) / (1.0 - muT) + muC0 - mean_muC0;
}

double eval_D2(int t, double c, double muC_t, double muT, double DeltaC,
               double mean_DeltaC) {
  return (c - muC_t) / (t + muT - 1.0) + DeltaC - mean_DeltaC;
}

namespace {

ObsInputs gather(std::size_t i, const GradientContext& ctx, double rho_value) {
  const Observation& o = (*ctx.ds)[i];
  ObsInputs in;
  in.t = o.t;
  in.y = o.y;
  in.c = o.c;
  in.rho = rho_value;
  in.muY_t = ctx.outcome->muYt[i];
  in.DeltaY = ctx.outcome->DeltaY[i];
  in.muT = ctx.nv->muT[i];
  in.muC_t = ctx.nv->muCt[i];
  in.muC0 = ctx.nv->muC0[i];
  in.DeltaC = ctx.nv->DeltaC[i];
  return in;
}

double eval_G(std::size_t i, const GradientContext& ctx) {
  return eval_D(gather(i, ctx, ctx.rho->at(i)), ctx.Psi_rho, ctx.tau, ctx.alpha,
                ctx.kappa);
}

} // namespace

double eval_D_reference(ReferenceKind kind, std::size_t i, const GradientContext& ctx) {
  const double g = eval_G(i, ctx);
  const Observation& o = (*ctx.ds)[i];
  switch (kind) {
    case ReferenceKind::FR: {
      const double g_ref =
          eval_D(gather(i, ctx, ctx.ref->rule.at(i)), ctx.Psi_ref, 0.0, ctx.alpha,
                 ctx.kappa);
      return g - g_ref;
    }
    case ReferenceKind::RD: {
      if (std::isinf(ctx.kappa))
        throw std::invalid_argument(
            "random-at-budget influence function needs a finite kappa");
      const TargetedCost& tc = *ctx.ref->targeted_muC;
      double g_ref = eval_D(gather(i, ctx, ctx.ref->rule.at(i)), ctx.Psi_ref, 0.0,
                            ctx.alpha, ctx.kappa);
      const double d1 =
          eval_D1(o.t, o.c, ctx.nv->muC0[i], ctx.nv->muT[i], ctx.mean_muC0);
      const double d2 = eval_D2(o.t, o.c, tc.muCt[i], ctx.nv->muT[i], tc.DeltaC[i],
                                tc.mean_DeltaC);
      g_ref -= ctx.alpha * ctx.Psi_ref * d1 / (ctx.kappa - ctx.alpha * ctx.phi_n);
      g_ref -= ctx.Psi_ref * d2 / tc.mean_DeltaC;
      return g - g_ref;
    }
    case ReferenceKind::TP: {
      const double muT = ctx.nv->muT[i];
      const double g_ref = muT / (o.t + muT - 1.0) * (o.y - ctx.outcome->muYt[i]) +
                           o.t * ctx.outcome->DeltaY[i] - ctx.Psi_ref;
      return g - g_ref;
    }
  }
  throw std::logic_error("unreachable reference kind");
}

double estimate_ate(const GradientContext& ctx) { return ctx.Psi_rho - ctx.Psi_ref; }

AteEstimate infer(std::vector<double> if_values, double psi_n, ReferenceKind kind) {
  const std::size_t n = if_values.size();
  if (n < 2) throw std::invalid_argument("inference needs at least 2 observations");
  const double mean = mean_of(if_values);
  double ss = 0.0;
  for (double v : if_values) ss += (v - mean) * (v - mean);
  AteEstimate est;
  est.reference = kind;
  est.psi_n = psi_n;
  est.sigma_n = std::sqrt(ss / static_cast<double>(n - 1));
  est.n = n;
  const double half = kZ975 * est.sigma_n / std::sqrt(static_cast<double>(n));
  est.ci_95 = {psi_n - half, psi_n + half};
  est.lower_975 = psi_n - half;
  est.if_values = std::move(if_values);
  return est;
}

} // namespace costrule
