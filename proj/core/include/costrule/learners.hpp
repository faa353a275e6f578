#pragma once

#include "costrule/dgp.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace costrule {

enum class LearnerKind { linear, logistic, oracle };

LearnerKind learner_from_string(const std::string& s);
std::string to_string(LearnerKind kind);

struct LearnerSpec {
  LearnerKind kind = LearnerKind::linear;
  int max_iter = 100;
  double tol = 1e-10;
  // Oracle learners ignore the data and evaluate the generating truth.
  DgpId oracle_dgp = DgpId::parametric;
  NuisanceTarget oracle_target = NuisanceTarget::muY;
};

// A fitted conditional-mean regression. Linear and logistic fits carry an
// intercept as coefficient 0; oracle fits delegate to dgp_truth, reading the
// treatment from x[0] for muY/muC and taking x as the covariates for muT.
class FittedRegression {
 public:
  double predict(std::span<const double> x) const;

  LearnerKind kind() const { return kind_; }
  const Eigen::VectorXd& coefficients() const { return coef_; }
  bool coefficients_capped() const { return capped_; }

 private:
  friend FittedRegression fit(const LearnerSpec&, const Eigen::MatrixXd&,
                              const Eigen::VectorXd&);
  LearnerKind kind_ = LearnerKind::linear;
  Eigen::VectorXd coef_;
  bool capped_ = false;
  DgpId oracle_dgp_ = DgpId::parametric;
  NuisanceTarget oracle_target_ = NuisanceTarget::muY;
};

// Fits y on the rows of x (no intercept column; one is added internally).
// Linear fits solve the normal equations, falling back to a small ridge when
// the Gram matrix is singular. Logistic fits run iteratively reweighted least
// squares and cap runaway coefficients at +-30 instead of diverging.
FittedRegression fit(const LearnerSpec& spec, const Eigen::MatrixXd& x,
                     const Eigen::VectorXd& y);

double oracle_predict(DgpId id, NuisanceTarget target, int t, std::span<const double> w);

} // namespace costrule
