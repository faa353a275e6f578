#pragma once

#include "costrule/learners.hpp"
#include "costrule/types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace costrule {

struct NuisanceSpecs {
  LearnerSpec muY;
  LearnerSpec muC;
  LearnerSpec muT;
  // Learner for the decision-covariate contrast regressions, used only when
  // V is a strict subset of W.
  LearnerSpec delta;
  // Expands the regression basis with pairwise products of the predictors.
  bool pairwise_interactions = false;
};

// Fitted conditional means. muY/muC take (t, w), muT takes w, deltaY/deltaC
// take v. Raw values; truncation and flooring happen at evaluation.
class NuisanceBundle {
 public:
  double muY(int t, std::span<const double> w) const;
  double muC(int t, std::span<const double> w) const;
  double muT(std::span<const double> w) const;
  double DeltaY(std::span<const double> w) const { return muY(1, w) - muY(0, w); }
  double DeltaC(std::span<const double> w) const { return muC(1, w) - muC(0, w); }
  double deltaY(std::span<const double> v, std::span<const double> w) const;
  double deltaC(std::span<const double> v, std::span<const double> w) const;

  bool v_is_full_w() const { return v_full_; }
  const FittedRegression& muY_fit() const { return muY_fit_; }
  const FittedRegression& muC_fit() const { return muC_fit_; }
  const FittedRegression& muT_fit() const { return muT_fit_; }

 private:
  friend NuisanceBundle fit_bundle(const Dataset&, const NuisanceSpecs&,
                                   const ProblemConfig&);
  FittedRegression muY_fit_, muC_fit_, muT_fit_;
  std::optional<FittedRegression> deltaY_fit_, deltaC_fit_;
  bool v_full_ = true;
  bool interactions_ = false;
};

NuisanceBundle fit_bundle(const Dataset& ds, const NuisanceSpecs& specs,
                          const ProblemConfig& cfg);

// Per-observation nuisance evaluations with the propensity truncated to
// [eps_t, 1-eps_t] and the cost contrasts floored at eps_c.
struct NuisanceValues {
  std::vector<double> muY1, muY0, muYt;
  std::vector<double> muC1, muC0, muCt;
  std::vector<double> muT;
  std::vector<double> DeltaY;
  std::vector<double> DeltaC;
  std::vector<double> deltaY;
  std::vector<double> deltaC;
  std::vector<double> xi;
  std::size_t muT_truncated = 0;
  std::size_t DeltaC_floored = 0;
  std::size_t deltaC_floored = 0;

  std::size_t n() const { return muT.size(); }
  // IPW denominator t + muT(w) - 1; nonzero after truncation.
  double denom(int t, std::size_t i) const { return t + muT[i] - 1.0; }
};

NuisanceValues evaluate_nuisances(const NuisanceBundle& nb, const Dataset& ds,
                                  const ProblemConfig& cfg);

struct CrossFitPlan {
  std::vector<int> fold_of;
  int num_folds = 0;
};

// Seeded permutation split into near-equal folds (sizes differ by at most 1).
CrossFitPlan make_cross_fit_plan(std::size_t n, int folds, std::uint64_t seed);

// Out-of-fold benefit-to-cost ratios: for each observation, the contrast
// regressions are refit on the complement of its fold and evaluated at its
// decision covariates. The full-sample fits are untouched.
std::vector<double> cross_fit_xi(const Dataset& ds, const NuisanceSpecs& specs,
                                 const ProblemConfig& cfg, const CrossFitPlan& plan);

} // namespace costrule
