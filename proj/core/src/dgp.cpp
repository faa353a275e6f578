#include "costrule/dgp.hpp"

#include <stdexcept>

namespace costrule {

DgpId dgp_from_string(const std::string& s) {
  if (s == "main_study") return DgpId::main_study;
  if (s == "parametric") return DgpId::parametric;
  throw std::invalid_argument("unknown dgp '" + s + "' (expected main_study or parametric)");
}

std::string to_string(DgpId id) {
  return id == DgpId::main_study ? "main_study" : "parametric";
}

namespace {

void require_dim(DgpId id, std::span<const double> w) {
  const std::size_t want = id == DgpId::main_study ? 3 : 1;
  if (w.size() != want)
    throw std::invalid_argument("dgp " + to_string(id) + " expects " +
                                std::to_string(want) + " covariates, got " +
                                std::to_string(w.size()));
}

// Cost-model index with the unobserved U entering additively.
double main_cost_index(int t, std::span<const double> w) {
  return 2.0 * t - 1.0 - w[0] + 0.2 * w[1] + 0.7 * w[2] + 2.0 * w[0] * w[1];
}

double main_outcome_base(std::span<const double> w) {
  return -w[0] + 0.2 * w[1] - 0.9 * w[2];
}

} // namespace

double dgp_truth(DgpId id, NuisanceTarget target, int t, std::span<const double> w) {
  require_dim(id, w);
  if (id == DgpId::parametric) {
    switch (target) {
      case NuisanceTarget::muT: return expit(w[0]);
      case NuisanceTarget::muC: return expit(2.0 * t - 1.0 + w[0]);
      case NuisanceTarget::muY: return expit(1.4 * t - 0.7 - 0.3 * w[0]);
    }
  }
  switch (target) {
    case NuisanceTarget::muT:
      return expit(2.5 * w[0] + 0.5 * w[1] * w[2]);
    case NuisanceTarget::muC: {
      const double z = main_cost_index(t, w);
      return 0.5 * (expit(z) + expit(z + 0.5));
    }
    case NuisanceTarget::muY: {
      // Marginalize over U~Bern(1/2) and C|T,W,U.
      const double z = main_cost_index(t, w);
      const double base = main_outcome_base(w);
      double mean = 0.0;
      for (int u = 0; u < 2; ++u) {
        const double pc = expit(z + 0.5 * u);
        mean += 0.5 * ((1.0 - pc) * expit(base) +
                       pc * expit(base - 0.3 + w[1] + 0.3 * u));
      }
      return mean;
    }
  }
  throw std::logic_error("unreachable nuisance target");
}

Dataset dgp_generate(DgpId id, std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("dgp_generate: n must be positive");
  std::vector<Observation> rows;
  rows.reserve(n);
  if (id == DgpId::parametric) {
    for (std::size_t i = 0; i < n; ++i) {
      const double w = rng.uniform(-1.0, 1.0);
      const int t = rng.bernoulli(expit(w)) ? 1 : 0;
      const double c = rng.bernoulli(expit(2.0 * t - 1.0 + w)) ? 1.0 : 0.0;
      const double y = rng.bernoulli(expit(1.4 * t - 0.7 - 0.3 * w)) ? 1.0 : 0.0;
      rows.push_back({{w}, t, c, y});
    }
    return Dataset(std::move(rows), {0});
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double w1 = rng.uniform(-1.0, 1.0);
    const double w2 = rng.bernoulli(0.8) ? 1.0 : 0.0;
    const double w3 = rng.normal();
    const double u = rng.bernoulli(0.5) ? 1.0 : 0.0;
    const std::vector<double> w{w1, w2, w3};
    const int t = rng.bernoulli(dgp_truth(id, NuisanceTarget::muT, 0, w)) ? 1 : 0;
    const double c = rng.bernoulli(expit(main_cost_index(t, w) + 0.5 * u)) ? 1.0 : 0.0;
    const double y =
        rng.bernoulli(expit(main_outcome_base(w) + c * (-0.3 + w2 + 0.3 * u))) ? 1.0 : 0.0;
    rows.push_back({w, t, c, y});
  }
  return Dataset(std::move(rows), {0, 1, 2});
}

ProblemConfig dgp_default_config(DgpId id) {
  ProblemConfig cfg;
  cfg.kappa = id == DgpId::main_study ? 0.68 : 0.35;
  cfg.alpha = 1.0;
  cfg.y_bounds = Interval{0.0, 1.0};
  cfg.c_bounds = Interval{0.0, 1.0};
  return cfg;
}

} // namespace costrule
