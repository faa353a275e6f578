#include "costrule/learners.hpp"

#include "costrule/types.hpp"

#include <cmath>
#include <stdexcept>

namespace costrule {

LearnerKind learner_from_string(const std::string& s) {
  if (s == "linear") return LearnerKind::linear;
  if (s == "logistic") return LearnerKind::logistic;
  if (s == "oracle") return LearnerKind::oracle;
  throw std::invalid_argument("unknown learner '" + s +
                              "' (expected linear, logistic, or oracle)");
}

std::string to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::linear: return "linear";
    case LearnerKind::logistic: return "logistic";
    case LearnerKind::oracle: return "oracle";
  }
  throw std::logic_error("unreachable learner kind");
}

double oracle_predict(DgpId id, NuisanceTarget target, int t, std::span<const double> w) {
  return dgp_truth(id, target, t, w);
}

double FittedRegression::predict(std::span<const double> x) const {
  if (kind_ == LearnerKind::oracle) {
    if (oracle_target_ == NuisanceTarget::muT)
      return oracle_predict(oracle_dgp_, oracle_target_, 0, x);
    if (x.empty()) throw std::invalid_argument("oracle predict: empty predictor row");
    return oracle_predict(oracle_dgp_, oracle_target_,
                          x[0] > 0.5 ? 1 : 0, x.subspan(1));
  }
  if (static_cast<Eigen::Index>(x.size()) + 1 != coef_.size())
    throw std::invalid_argument("predict: expected " + std::to_string(coef_.size() - 1) +
                                " predictors, got " + std::to_string(x.size()));
  double eta = coef_[0];
  for (std::size_t j = 0; j < x.size(); ++j) eta += coef_[j + 1] * x[j];
  return kind_ == LearnerKind::logistic ? expit(eta) : eta;
}

namespace {

constexpr double kCoefCap = 30.0;

Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd z(x.rows(), x.cols() + 1);
  z.col(0).setOnes();
  z.rightCols(x.cols()) = x;
  return z;
}

// Solves g * beta = b, adding a small ridge when the system is singular.
Eigen::VectorXd solve_gram(Eigen::MatrixXd g, const Eigen::VectorXd& b) {
  Eigen::VectorXd beta = g.ldlt().solve(b);
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (!beta.allFinite() || (g * beta - b).cwiseAbs().maxCoeff() > 1e-8 * scale) {
    g.diagonal().array() += 1e-10;
    beta = g.ldlt().solve(b);
    if (!beta.allFinite()) throw FitError("linear system is singular beyond ridge repair");
  }
  return beta;
}

Eigen::VectorXd fit_linear(const Eigen::MatrixXd& z, const Eigen::VectorXd& y) {
  return solve_gram(z.transpose() * z, z.transpose() * y);
}

Eigen::VectorXd fit_logistic(const Eigen::MatrixXd& z, const Eigen::VectorXd& y,
                             int max_iter, double tol, bool& capped) {
  if (y.minCoeff() < 0.0 || y.maxCoeff() > 1.0)
    throw FitError("logistic fit requires outcomes in [0, 1]");
  const Eigen::Index p = z.cols();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd eta = z * beta;
    const Eigen::VectorXd mu = eta.unaryExpr([](double v) { return expit(v); });
    const Eigen::VectorXd wgt = mu.array() * (1.0 - mu.array());
    Eigen::MatrixXd hess = z.transpose() * wgt.asDiagonal() * z;
    const Eigen::VectorXd grad = z.transpose() * (y - mu);
    const Eigen::VectorXd step = solve_gram(std::move(hess), grad);
    beta += step;
    if (beta.cwiseAbs().maxCoeff() > kCoefCap) {
      beta = beta.cwiseMax(-kCoefCap).cwiseMin(kCoefCap);
      capped = true;
      return beta;
    }
    if (step.cwiseAbs().maxCoeff() < tol) return beta;
  }
  return beta;
}

} // namespace

FittedRegression fit(const LearnerSpec& spec, const Eigen::MatrixXd& x,
                     const Eigen::VectorXd& y) {
  FittedRegression out;
  out.kind_ = spec.kind;
  if (spec.kind == LearnerKind::oracle) {
    out.oracle_dgp_ = spec.oracle_dgp;
    out.oracle_target_ = spec.oracle_target;
    return out;
  }
  if (x.rows() != y.size())
    throw std::invalid_argument("fit: " + std::to_string(x.rows()) + " predictor rows vs " +
                                std::to_string(y.size()) + " outcomes");
  if (x.rows() < x.cols() + 1)
    throw FitError("fit: " + std::to_string(x.rows()) + " rows cannot identify " +
                   std::to_string(x.cols() + 1) + " coefficients");
  const Eigen::MatrixXd z = with_intercept(x);
  if (spec.kind == LearnerKind::linear) {
    out.coef_ = fit_linear(z, y);
  } else {
    out.coef_ = fit_logistic(z, y, spec.max_iter, spec.tol, out.capped_);
  }
  return out;
}

} // namespace costrule
