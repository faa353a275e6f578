#pragma once

#include "costrule/rng.hpp"
#include "costrule/types.hpp"

#include <cmath>
#include <span>
#include <string>

namespace costrule {

inline double expit(double x) { return 1.0 / (1.0 + std::exp(-x)); }
inline double logit(double p) { return std::log(p / (1.0 - p)); }

// Two synthetic studies: a three-covariate design where treatment acts as an
// instrument for a binary cost, and a one-covariate fully parametric design.
enum class DgpId { main_study, parametric };

enum class NuisanceTarget { muY, muC, muT };

DgpId dgp_from_string(const std::string& s);
std::string to_string(DgpId id);

// Analytic conditional means of the observables. t is ignored for muT.
double dgp_truth(DgpId id, NuisanceTarget target, int t, std::span<const double> w);

// Draws n observations; V(W)=W. Draw order per row is fixed, so equal seeds
// give bit-identical datasets.
Dataset dgp_generate(DgpId id, std::size_t n, Rng& rng);

// Budget and constraint mix used by each study, plus [0,1] targeting bounds
// for the binary cost and outcome.
ProblemConfig dgp_default_config(DgpId id);

} // namespace costrule
