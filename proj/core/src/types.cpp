#include "costrule/types.hpp"

#include <cmath>
#include <unordered_set>

namespace costrule {

Dataset::Dataset(std::vector<Observation> obs, std::vector<std::size_t> v_index)
  : obs_(std::move(obs)), v_index_(std::move(v_index)) {
  if (obs_.empty()) throw ParseError("dataset must contain at least one observation");
  const std::size_t p = obs_[0].w.size();
  std::unordered_set<std::size_t> seen;
  for (std::size_t j : v_index_) {
    if (j >= p) throw ParseError("v_index position out of range");
    if (!seen.insert(j).second) throw ParseError("v_index positions must be distinct");
  }
  if (v_index_.empty()) throw ParseError("v_index must name at least one covariate");
  for (std::size_t i = 0; i < obs_.size(); ++i) {
    const Observation& o = obs_[i];
    if (o.w.size() != p)
      throw ParseError("covariate dimension mismatch at row " + std::to_string(i));
    if (o.t != 0 && o.t != 1)
      throw ParseError("treatment not in {0,1} at row " + std::to_string(i));
    if (o.c < 0.0)
      throw ParseError("negative cost at row " + std::to_string(i));
    bool finite = std::isfinite(o.c) && std::isfinite(o.y);
    for (double x : o.w) finite = finite && std::isfinite(x);
    if (!finite)
      throw ParseError("non-finite value at row " + std::to_string(i));
  }
}

std::vector<double> Dataset::v_of(std::size_t i) const {
  std::vector<double> v;
  v.reserve(v_index_.size());
  for (std::size_t j : v_index_) v.push_back(obs_[i].w[j]);
  return v;
}

std::string to_string(ReferenceKind k) {
  switch (k) {
    case ReferenceKind::FR: return "FR";
    case ReferenceKind::RD: return "RD";
    case ReferenceKind::TP: return "TP";
  }
  return "?";
}

void ProblemConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParseError("alpha must lie in [0,1]");
  if (!(kappa > 0.0)) throw ParseError("kappa must be positive");
  if (!(eps_t > 0.0 && eps_t < 0.5)) throw ParseError("eps_t must lie in (0,0.5)");
  if (!(eps_c > 0.0)) throw ParseError("eps_c must be positive");
  if (folds < 1) throw ParseError("folds must be >= 1");
  for (const ReferenceSpec& r : references)
    if (r.kind == ReferenceKind::FR && !(r.fr_p >= 0.0 && r.fr_p <= 1.0))
      throw ParseError("FR constant must lie in [0,1]");
  if (y_bounds && !(y_bounds->first < y_bounds->second))
    throw ParseError("y_bounds must be a nonempty interval");
  if (c_bounds && !(c_bounds->first < c_bounds->second))
    throw ParseError("c_bounds must be a nonempty interval");
}

} // namespace costrule
