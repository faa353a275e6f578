#include "costrule/nuisance.hpp"

#include "costrule/rng.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace costrule {

namespace {

void append_pairwise(std::vector<double>& row, std::size_t base) {
  for (std::size_t i = 0; i < base; ++i)
    for (std::size_t j = i + 1; j < base; ++j)
      row.push_back(row[i] * row[j]);
}

std::vector<double> tw_row(int t, std::span<const double> w, bool interactions) {
  std::vector<double> row;
  row.reserve(1 + w.size());
  row.push_back(static_cast<double>(t));
  row.insert(row.end(), w.begin(), w.end());
  if (interactions) append_pairwise(row, 1 + w.size());
  return row;
}

std::vector<double> w_row(std::span<const double> w, bool interactions) {
  std::vector<double> row(w.begin(), w.end());
  if (interactions) append_pairwise(row, w.size());
  return row;
}

Eigen::MatrixXd rows_to_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return Eigen::MatrixXd(0, 0);
  Eigen::MatrixXd x(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) x(i, j) = rows[i][j];
  return x;
}

// Oracle fits consume the raw (t, w) row; parametric fits the expanded basis.
double eval_tw(const FittedRegression& f, bool interactions, int t,
               std::span<const double> w) {
  if (f.kind() == LearnerKind::oracle) {
    std::vector<double> raw = tw_row(t, w, false);
    return f.predict(raw);
  }
  std::vector<double> row = tw_row(t, w, interactions);
  return f.predict(row);
}

double eval_w(const FittedRegression& f, bool interactions, std::span<const double> w) {
  if (f.kind() == LearnerKind::oracle) return f.predict(w);
  std::vector<double> row = w_row(w, interactions);
  return f.predict(row);
}

struct DesignBlocks {
  Eigen::MatrixXd x_tw;
  Eigen::MatrixXd x_w;
  Eigen::VectorXd y, c, t;
};

DesignBlocks build_design(const Dataset& ds, const std::vector<std::size_t>& idx,
                          bool interactions) {
  DesignBlocks b;
  std::vector<std::vector<double>> tw, wonly;
  tw.reserve(idx.size());
  wonly.reserve(idx.size());
  b.y.resize(idx.size());
  b.c.resize(idx.size());
  b.t.resize(idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const Observation& o = ds[idx[r]];
    tw.push_back(tw_row(o.t, o.w, interactions));
    wonly.push_back(w_row(o.w, interactions));
    b.y[r] = o.y;
    b.c[r] = o.c;
    b.t[r] = o.t;
  }
  b.x_tw = rows_to_matrix(tw);
  b.x_w = rows_to_matrix(wonly);
  return b;
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  return idx;
}

LearnerSpec with_target(LearnerSpec spec, NuisanceTarget target) {
  spec.oracle_target = target;
  return spec;
}

struct ContrastFits {
  FittedRegression deltaY, deltaC;
};

// Regresses the fitted contrasts onto the decision covariates (main effects).
ContrastFits fit_contrasts(const Dataset& ds, const std::vector<std::size_t>& idx,
                           const FittedRegression& muY, const FittedRegression& muC,
                           bool interactions, const LearnerSpec& delta_spec) {
  Eigen::MatrixXd xv(idx.size(), ds.v_index().size());
  Eigen::VectorXd py(idx.size()), pc(idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const Observation& o = ds[idx[r]];
    const std::vector<double> v = ds.v_of(idx[r]);
    for (std::size_t j = 0; j < v.size(); ++j) xv(r, j) = v[j];
    py[r] = eval_tw(muY, interactions, 1, o.w) - eval_tw(muY, interactions, 0, o.w);
    pc[r] = eval_tw(muC, interactions, 1, o.w) - eval_tw(muC, interactions, 0, o.w);
  }
  return {fit(delta_spec, xv, py), fit(delta_spec, xv, pc)};
}

} // namespace

double NuisanceBundle::muY(int t, std::span<const double> w) const {
  return eval_tw(muY_fit_, interactions_, t, w);
}

double NuisanceBundle::muC(int t, std::span<const double> w) const {
  return eval_tw(muC_fit_, interactions_, t, w);
}

double NuisanceBundle::muT(std::span<const double> w) const {
  return eval_w(muT_fit_, interactions_, w);
}

double NuisanceBundle::deltaY(std::span<const double> v, std::span<const double> w) const {
  if (v_full_) return DeltaY(w);
  std::vector<double> row(v.begin(), v.end());
  return deltaY_fit_->predict(row);
}

double NuisanceBundle::deltaC(std::span<const double> v, std::span<const double> w) const {
  if (v_full_) return DeltaC(w);
  std::vector<double> row(v.begin(), v.end());
  return deltaC_fit_->predict(row);
}

NuisanceBundle fit_bundle(const Dataset& ds, const NuisanceSpecs& specs,
                          const ProblemConfig& cfg) {
  cfg.validate();
  NuisanceBundle nb;
  nb.interactions_ = specs.pairwise_interactions;
  nb.v_full_ = ds.v_is_full_w();
  const DesignBlocks b = build_design(ds, all_indices(ds.n()), specs.pairwise_interactions);
  nb.muY_fit_ = fit(with_target(specs.muY, NuisanceTarget::muY), b.x_tw, b.y);
  nb.muC_fit_ = fit(with_target(specs.muC, NuisanceTarget::muC), b.x_tw, b.c);
  nb.muT_fit_ = fit(with_target(specs.muT, NuisanceTarget::muT), b.x_w, b.t);
  if (!nb.v_full_) {
    ContrastFits cf = fit_contrasts(ds, all_indices(ds.n()), nb.muY_fit_, nb.muC_fit_,
                                    nb.interactions_, specs.delta);
    nb.deltaY_fit_ = std::move(cf.deltaY);
    nb.deltaC_fit_ = std::move(cf.deltaC);
  }
  return nb;
}

NuisanceValues evaluate_nuisances(const NuisanceBundle& nb, const Dataset& ds,
                                  const ProblemConfig& cfg) {
  const std::size_t n = ds.n();
  NuisanceValues out;
  for (auto* v : {&out.muY1, &out.muY0, &out.muYt, &out.muC1, &out.muC0, &out.muCt,
                  &out.muT, &out.DeltaY, &out.DeltaC, &out.deltaY, &out.deltaC, &out.xi})
    v->resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Observation& o = ds[i];
    out.muY1[i] = nb.muY(1, o.w);
    out.muY0[i] = nb.muY(0, o.w);
    out.muYt[i] = o.t == 1 ? out.muY1[i] : out.muY0[i];
    out.muC1[i] = nb.muC(1, o.w);
    out.muC0[i] = nb.muC(0, o.w);
    out.muCt[i] = o.t == 1 ? out.muC1[i] : out.muC0[i];
    const double pt = nb.muT(o.w);
    const double clamped = std::clamp(pt, cfg.eps_t, 1.0 - cfg.eps_t);
    if (clamped != pt) ++out.muT_truncated;
    out.muT[i] = clamped;
    out.DeltaY[i] = out.muY1[i] - out.muY0[i];
    const double dc = out.muC1[i] - out.muC0[i];
    if (dc < cfg.eps_c) ++out.DeltaC_floored;
    out.DeltaC[i] = std::max(dc, cfg.eps_c);
    const std::vector<double> v = ds.v_of(i);
    out.deltaY[i] = nb.deltaY(v, o.w);
    const double sc = nb.deltaC(v, o.w);
    if (sc < cfg.eps_c) ++out.deltaC_floored;
    out.deltaC[i] = std::max(sc, cfg.eps_c);
    out.xi[i] = out.deltaY[i] / out.deltaC[i];
  }
  return out;
}

namespace {

std::uint64_t bounded_u64(Rng& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng.next_u64();
    if (r >= threshold) return r % bound;
  }
}

} // namespace

CrossFitPlan make_cross_fit_plan(std::size_t n, int folds, std::uint64_t seed) {
  if (folds < 1) throw std::invalid_argument("cross-fit plan needs at least 1 fold");
  if (static_cast<std::size_t>(folds) > n)
    throw std::invalid_argument("cross-fit plan: " + std::to_string(folds) +
                                " folds exceed " + std::to_string(n) + " observations");
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i)
    std::swap(perm[i], perm[bounded_u64(rng, i + 1)]);
  CrossFitPlan plan;
  plan.num_folds = folds;
  plan.fold_of.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    plan.fold_of[perm[i]] = static_cast<int>(i % static_cast<std::size_t>(folds));
  return plan;
}

std::vector<double> cross_fit_xi(const Dataset& ds, const NuisanceSpecs& specs,
                                 const ProblemConfig& cfg, const CrossFitPlan& plan) {
  if (plan.num_folds < 2)
    throw std::invalid_argument("cross_fit_xi needs at least 2 folds");
  if (plan.fold_of.size() != ds.n())
    throw std::invalid_argument("cross-fit plan does not match dataset size");
  const std::size_t n = ds.n();
  std::vector<double> xi(n);
  for (int f = 0; f < plan.num_folds; ++f) {
    std::vector<std::size_t> train, held;
    for (std::size_t i = 0; i < n; ++i)
      (plan.fold_of[i] == f ? held : train).push_back(i);
    if (held.empty()) continue;
    try {
      const DesignBlocks b = build_design(ds, train, specs.pairwise_interactions);
      const FittedRegression muY_f =
          fit(with_target(specs.muY, NuisanceTarget::muY), b.x_tw, b.y);
      const FittedRegression muC_f =
          fit(with_target(specs.muC, NuisanceTarget::muC), b.x_tw, b.c);
      if (ds.v_is_full_w()) {
        for (std::size_t i : held) {
          const Observation& o = ds[i];
          const double dy = eval_tw(muY_f, specs.pairwise_interactions, 1, o.w) -
                            eval_tw(muY_f, specs.pairwise_interactions, 0, o.w);
          const double dc = eval_tw(muC_f, specs.pairwise_interactions, 1, o.w) -
                            eval_tw(muC_f, specs.pairwise_interactions, 0, o.w);
          xi[i] = dy / std::max(dc, cfg.eps_c);
        }
      } else {
        const ContrastFits cf = fit_contrasts(ds, train, muY_f, muC_f,
                                              specs.pairwise_interactions, specs.delta);
        for (std::size_t i : held) {
          const std::vector<double> v = ds.v_of(i);
          const double dy = cf.deltaY.predict(v);
          const double dc = cf.deltaC.predict(v);
          xi[i] = dy / std::max(dc, cfg.eps_c);
        }
      }
    } catch (const FitError& e) {
      throw FitError("fold " + std::to_string(f) + ": " + e.what());
    }
  }
  return xi;
}

} // namespace costrule
