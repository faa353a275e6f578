#include "costrule/knapsack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace costrule {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Unique xi values in descending order with per-level tie mass g and the
// cumulative mass cum strictly above each level; cum[j] is Gamma at u[j].
struct Levels {
  std::vector<double> u;
  std::vector<double> g;
  std::vector<double> cum;
  double total = 0.0;
};

Levels build_levels(std::span<const double> xi, std::span<const double> DeltaC) {
  const std::size_t n = xi.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return xi[a] > xi[b]; });
  Levels lv;
  double above = 0.0;
  std::size_t i = 0;
  while (i < n) {
    const double level = xi[order[i]];
    double mass = 0.0;
    while (i < n && xi[order[i]] == level) {
      mass += DeltaC[order[i]] / static_cast<double>(n);
      ++i;
    }
    lv.u.push_back(level);
    lv.g.push_back(mass);
    lv.cum.push_back(above);
    above += mass;
  }
  lv.total = above;
  return lv;
}

// Index of the level where budget b runs out, or -1 when b covers everything.
int exhaustion_level(const Levels& lv, double b) {
  if (b >= lv.total) return -1;
  for (std::size_t j = 0; j < lv.u.size(); ++j)
    if (b < lv.cum[j] + lv.g[j]) return static_cast<int>(j);
  return -1;
}

} // namespace

double phi_one_step(const Dataset& ds, const NuisanceValues& nv) {
  const std::size_t n = ds.n();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Observation& o = ds[i];
    sum += nv.muC0[i] + (1 - o.t) * (o.c - nv.muC0[i]) / (1.0 - nv.muT[i]);
  }
  return sum / static_cast<double>(n);
}

GammaPair empirical_gamma(std::span<const double> xi, std::span<const double> DeltaC,
                          double tau) {
  if (xi.size() != DeltaC.size())
    throw std::invalid_argument("empirical_gamma: xi and DeltaC lengths differ");
  GammaPair out;
  const double n = static_cast<double>(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) {
    if (xi[i] > tau) out.Gamma += DeltaC[i] / n;
    else if (xi[i] == tau) out.gamma += DeltaC[i] / n;
  }
  return out;
}

BudgetRule solve_rule_at_budget(std::span<const double> xi,
                                std::span<const double> DeltaC, double k,
                                double alpha, double phi_n) {
  if (xi.size() != DeltaC.size())
    throw std::invalid_argument("solve_rule_at_budget: xi and DeltaC lengths differ");
  const double b = std::isinf(k) ? kInf : k - alpha * phi_n;
  if (b < 0.0)
    throw InfeasibleBudgetError("infeasible budget: k = " + std::to_string(k) +
                                " is below the fixed cost " +
                                std::to_string(alpha * phi_n));
  const Levels lv = build_levels(xi, DeltaC);
  BudgetRule out;
  const int j = exhaustion_level(lv, b);
  if (j < 0) {
    out.eta = -kInf;
    out.tau = 0.0;
    out.boundary_prob = 0.0;
    out.d.assign(xi.size(), 1.0);
    return out;
  }
  out.eta = lv.u[j];
  out.tau = std::max(out.eta, 0.0);
  out.boundary_prob = lv.g[j] > 0.0 ? (b - lv.cum[j]) / lv.g[j] : 0.0;
  out.d.resize(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) {
    if (xi[i] > out.eta) out.d[i] = 1.0;
    else if (xi[i] == out.eta) out.d[i] = out.boundary_prob;
    else out.d[i] = 0.0;
  }
  return out;
}

BudgetCalibration calibrate_budget(const Dataset& ds, const NuisanceValues& nv,
                                   const ProblemConfig& cfg, double phi_n) {
  const double kappa = cfg.kappa;
  if (std::isinf(kappa)) return {kappa, false};
  const double af = cfg.alpha * phi_n;
  if (kappa - af < 0.0)
    throw InfeasibleBudgetError("infeasible budget: kappa = " + std::to_string(kappa) +
                                " is below the fixed cost " + std::to_string(af));
  const Levels lv = build_levels(nv.xi, nv.DeltaC);
  const int j_kappa = exhaustion_level(lv, kappa - af);
  const double tau_kappa = j_kappa < 0 ? 0.0 : std::max(lv.u[j_kappa], 0.0);
  if (tau_kappa <= 0.0) return {kappa, false};

  // One-step cost of d_{n,k}: per level, the mean of the cost contrast plus
  // its inverse-probability residual; prefix sums make the estimating
  // equation affine in k on each inter-breakpoint segment.
  const std::size_t n = ds.n();
  const std::size_t m = lv.u.size();
  std::vector<double> level_adj(m, 0.0);
  {
    std::vector<double> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Observation& o = ds[i];
      adj[i] = nv.DeltaC[i] + (o.c - nv.muCt[i]) / nv.denom(o.t, i);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return nv.xi[a] > nv.xi[b]; });
    std::size_t pos = 0;
    for (std::size_t j = 0; j < m; ++j) {
      while (pos < n && nv.xi[order[pos]] == lv.u[j]) {
        level_adj[j] += adj[order[pos]] / static_cast<double>(n);
        ++pos;
      }
    }
  }

  const double scale = std::max({1.0, std::abs(kappa), af + lv.total});
  const double tol = 1e-12 * scale;
  double best_k = 0.0;
  double best_gap = kInf;
  bool found = false;
  auto consider = [&](double k) {
    const double gap = std::abs(k - kappa);
    if (k >= -tol && gap < best_gap) {
      best_k = std::max(k, 0.0);
      best_gap = gap;
      found = true;
    }
  };
  double prefix_adj = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double lo = af + lv.cum[j];
    const double hi = lo + lv.g[j];
    // LHS(k) = af + prefix_adj + (k - lo)/g * level_adj on [lo, hi].
    if (lv.g[j] > 0.0 && level_adj[j] != 0.0) {
      const double k_star = lo + lv.g[j] * (kappa - af - prefix_adj) / level_adj[j];
      if (k_star >= lo - tol && k_star <= hi + tol)
        consider(std::clamp(k_star, lo, hi));
    } else if (std::abs(af + prefix_adj - kappa) <= tol) {
      consider(std::clamp(kappa, lo, hi));
    }
    prefix_adj += level_adj[j];
  }
  // Treat-everyone endpoint: LHS is the constant af + prefix_adj there.
  if (std::abs(af + prefix_adj - kappa) <= tol) consider(af + lv.total);
  if (!found) return {kappa, false};
  // The constraint binds only while the threshold stays positive; a root past
  // the last beneficial level leaves the truncated rule with slack budget.
  const int j_n = exhaustion_level(lv, best_k - af);
  return {best_k, j_n >= 0 && lv.u[j_n] > 0.0};
}

TreatmentRule build_rho(std::span<const double> xi, std::span<const double> DeltaC,
                        double k_n, double alpha, double phi_n,
                        std::vector<std::string>* warnings) {
  TreatmentRule rule;
  rule.kind = TreatmentRule::Kind::threshold;
  rule.xi.assign(xi.begin(), xi.end());
  const BudgetRule at_k = solve_rule_at_budget(xi, DeltaC, k_n, alpha, phi_n);
  rule.eta = at_k.tau;
  if (std::isinf(k_n)) {
    rule.boundary_prob = 0.0;
  } else {
    const GammaPair at_tau = empirical_gamma(xi, DeltaC, at_k.tau);
    double p = 0.0;
    if (at_tau.gamma > 0.0) {
      p = (k_n - alpha * phi_n - at_tau.Gamma) / at_tau.gamma;
      if (p < 0.0 || p > 1.0) {
        rule.boundary_clamped = true;
        if (warnings)
          warnings->push_back("boundary probability " + std::to_string(p) +
                              " clamped into [0,1]");
        p = std::clamp(p, 0.0, 1.0);
      }
    }
    rule.boundary_prob = p;
  }
  rule.values.resize(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) {
    if (xi[i] > rule.eta) rule.values[i] = 1.0;
    else if (xi[i] == rule.eta) rule.values[i] = rule.boundary_prob;
    else rule.values[i] = 0.0;
  }
  return rule;
}

KnapsackFit fit_knapsack(const Dataset& ds, const NuisanceValues& nv,
                         const ProblemConfig& cfg,
                         std::vector<std::string>* warnings) {
  KnapsackFit out;
  out.phi_n = phi_one_step(ds, nv);
  const BudgetRule at_kappa =
      solve_rule_at_budget(nv.xi, nv.DeltaC, cfg.kappa, cfg.alpha, out.phi_n);
  out.eta_kappa = at_kappa.eta;
  out.tau_kappa = at_kappa.tau;
  const BudgetCalibration cal = calibrate_budget(ds, nv, cfg, out.phi_n);
  out.k_n = cal.k_n;
  out.saturated = cal.saturated;
  out.rule = build_rho(nv.xi, nv.DeltaC, out.k_n, cfg.alpha, out.phi_n, warnings);
  return out;
}

} // namespace costrule
