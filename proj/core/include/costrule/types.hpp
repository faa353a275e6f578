#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace costrule {

// Errors that should surface as distinct CLI exit codes.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfeasibleBudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One data unit: baseline covariates, binary treatment, nonnegative cost,
// real-valued outcome.
struct Observation {
  std::vector<double> w;
  int t = 0;
  double c = 0.0;
  double y = 0.0;
};

// Immutable after construction; share freely across workers.
class Dataset {
 public:
  Dataset(std::vector<Observation> obs, std::vector<std::size_t> v_index);

  std::size_t n() const { return obs_.size(); }
  std::size_t dim_w() const { return obs_.empty() ? 0 : obs_[0].w.size(); }
  const Observation& operator[](std::size_t i) const { return obs_[i]; }
  const std::vector<Observation>& observations() const { return obs_; }
  const std::vector<std::size_t>& v_index() const { return v_index_; }
  bool v_is_full_w() const { return v_index_.size() == dim_w(); }

  // decision covariate V(W) for observation i
  std::vector<double> v_of(std::size_t i) const;

 private:
  std::vector<Observation> obs_;
  std::vector<std::size_t> v_index_;
};

enum class ReferenceKind { FR, RD, TP };

std::string to_string(ReferenceKind k);

struct ReferenceSpec {
  ReferenceKind kind = ReferenceKind::FR;
  double fr_p = 0.0; // constant prescription probability for FR
};

using Interval = std::pair<double, double>;

constexpr double kInfiniteBudget = std::numeric_limits<double>::infinity();

struct ProblemConfig {
  double kappa = kInfiniteBudget; // budget, may be infinite
  double alpha = 1.0;             // constraint mix in [0,1]
  std::vector<ReferenceSpec> references = {
    {ReferenceKind::FR, 0.0}, {ReferenceKind::RD, 0.0}, {ReferenceKind::TP, 0.0}};
  double eps_t = 0.01;  // propensity truncation margin
  double eps_c = 1e-3;  // cost-contrast floor
  std::optional<Interval> y_bounds; // when set, outcome targeting is logistic
  std::optional<Interval> c_bounds; // when set, cost targeting is logistic
  int folds = 10;       // cross-fit folds; 1 = no cross-fitting

  void validate() const;
};

} // namespace costrule
