#pragma once

// One-parameter no-intercept fluctuations shared by the cost and outcome
// targeting steps. Internal to the library.

#include "costrule/types.hpp"

#include <optional>
#include <span>

namespace costrule::detail {

// Least-squares coefficient of (obs - offset) on h; 0 when h is all zero.
double ols_epsilon(std::span<const double> h, std::span<const double> obs,
                   std::span<const double> offset);

// Solves sum_i h_i * (obs_i - mu_i(eps)) = 0 for the logistic fluctuation
// mu_i(eps) = lo + span*expit(logit((offset_i-lo)/span) + eps*h_i), where obs
// and offset live in [lo, lo+span]. Monotone in eps, so Newton with a
// bisection fallback always lands.
double logistic_epsilon(std::span<const double> h, std::span<const double> obs,
                        std::span<const double> offset, Interval bounds);

// Fluctuated prediction at covariate value h for a fitted epsilon.
double fluctuate(double offset, double h, double eps, bool logistic,
                 const std::optional<Interval>& bounds);

} // namespace costrule::detail
