#include "costrule/reference.hpp"

#include "fluctuation.hpp"

#include <cmath>
#include <limits>

namespace costrule {

TargetedCost target_cost_regression(const Dataset& ds, const NuisanceValues& nv,
                                    const ProblemConfig& cfg) {
  const std::size_t n = ds.n();
  std::vector<double> h(n), obs(n);
  for (std::size_t i = 0; i < n; ++i) {
    h[i] = 1.0 / nv.denom(ds[i].t, i);
    obs[i] = ds[i].c;
  }
  TargetedCost out;
  out.logistic = cfg.c_bounds.has_value();
  out.epsilon = out.logistic
                    ? detail::logistic_epsilon(h, obs, nv.muCt, *cfg.c_bounds)
                    : detail::ols_epsilon(h, obs, nv.muCt);
  out.muC1.resize(n);
  out.muC0.resize(n);
  out.muCt.resize(n);
  out.DeltaC.resize(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double h1 = 1.0 / nv.muT[i];
    const double h0 = -1.0 / (1.0 - nv.muT[i]);
    out.muC1[i] = detail::fluctuate(nv.muC1[i], h1, out.epsilon, out.logistic, cfg.c_bounds);
    out.muC0[i] = detail::fluctuate(nv.muC0[i], h0, out.epsilon, out.logistic, cfg.c_bounds);
    out.muCt[i] = ds[i].t == 1 ? out.muC1[i] : out.muC0[i];
    out.DeltaC[i] = out.muC1[i] - out.muC0[i];
    sum += out.DeltaC[i];
  }
  out.mean_DeltaC = sum / static_cast<double>(n);
  return out;
}

namespace {

TreatmentRule constant_rule(double p, std::size_t n) {
  TreatmentRule rule;
  rule.kind = TreatmentRule::Kind::constant;
  rule.p = p;
  rule.values.assign(n, p);
  return rule;
}

} // namespace

ReferenceFit fit_reference(const ReferenceSpec& spec, const Dataset& ds,
                           const NuisanceValues& nv, double phi_n,
                           const ProblemConfig& cfg) {
  ReferenceFit out;
  out.spec = spec;
  switch (spec.kind) {
    case ReferenceKind::FR:
      out.rule = constant_rule(spec.fr_p, ds.n());
      return out;
    case ReferenceKind::TP: {
      out.rule.kind = TreatmentRule::Kind::propensity;
      out.rule.values = nv.muT;
      return out;
    }
    case ReferenceKind::RD: {
      out.targeted_muC = target_cost_regression(ds, nv, cfg);
      if (std::isinf(cfg.kappa)) {
        out.rd_value = 1.0;
        out.rule = constant_rule(1.0, ds.n());
        return out;
      }
      const double slack = cfg.kappa - cfg.alpha * phi_n;
      if (slack < 0.0)
        throw InfeasibleBudgetError(
            "infeasible budget: kappa - alpha*phi_n = " + std::to_string(slack));
      if (out.targeted_muC->mean_DeltaC <= 0.0)
        throw FitError("random-at-budget rule undefined: mean targeted cost contrast " +
                       std::to_string(out.targeted_muC->mean_DeltaC) +
                       " is not positive");
      out.rd_value = std::min(1.0, slack / out.targeted_muC->mean_DeltaC);
      out.rule = constant_rule(*out.rd_value, ds.n());
      return out;
    }
  }
  throw std::logic_error("unreachable reference kind");
}

} // namespace costrule
