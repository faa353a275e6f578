#include "fluctuation.hpp"

#include "costrule/dgp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace costrule::detail {

namespace {

constexpr double kProbClamp = 1e-12;

double rescale(double value, const Interval& b) {
  const double unit = (value - b.first) / (b.second - b.first);
  return std::clamp(unit, kProbClamp, 1.0 - kProbClamp);
}

} // namespace

double ols_epsilon(std::span<const double> h, std::span<const double> obs,
                   std::span<const double> offset) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    num += h[i] * (obs[i] - offset[i]);
    den += h[i] * h[i];
  }
  return den > 0.0 ? num / den : 0.0;
}

double logistic_epsilon(std::span<const double> h, std::span<const double> obs,
                        std::span<const double> offset, Interval bounds) {
  const std::size_t n = h.size();
  std::vector<double> theta(n), target(n);
  bool any_h = false;
  for (std::size_t i = 0; i < n; ++i) {
    theta[i] = logit(rescale(offset[i], bounds));
    target[i] = (obs[i] - bounds.first) / (bounds.second - bounds.first);
    if (h[i] != 0.0) any_h = true;
  }
  if (!any_h) return 0.0;
  auto score = [&](double eps, double* slope) {
    double s = 0.0, d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = expit(theta[i] + eps * h[i]);
      s += h[i] * (target[i] - p);
      d -= h[i] * h[i] * p * (1.0 - p);
    }
    if (slope) *slope = d;
    return s;
  };
  const double tol = 1e-12 * std::max<std::size_t>(n, 1);
  double eps = 0.0;
  for (int it = 0; it < 100; ++it) {
    double slope = 0.0;
    const double s = score(eps, &slope);
    if (std::abs(s) <= tol) return eps;
    if (slope >= -1e-300) break;
    const double step = s / slope;
    if (!std::isfinite(step) || std::abs(step) > 10.0) break;
    eps -= step;
    if (std::abs(eps) > 60.0) break;
  }
  // Bracket the monotone score and bisect.
  double lo = -1.0, hi = 1.0;
  while (score(lo, nullptr) < 0.0 && lo > -1e6) lo *= 2.0;
  while (score(hi, nullptr) > 0.0 && hi < 1e6) hi *= 2.0;
  double s_lo = score(lo, nullptr);
  if (s_lo < 0.0) return lo;
  if (score(hi, nullptr) > 0.0) return hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double s = score(mid, nullptr);
    if (std::abs(s) <= tol) return mid;
    if (s > 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double fluctuate(double offset, double h, double eps, bool logistic,
                 const std::optional<Interval>& bounds) {
  if (!logistic) return offset + eps * h;
  if (!bounds) throw std::logic_error("logistic fluctuation requires bounds");
  const double span = bounds->second - bounds->first;
  return bounds->first + span * expit(logit(rescale(offset, *bounds)) + eps * h);
}

} // namespace costrule::detail
