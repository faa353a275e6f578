#include "costrule/json_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace costrule {

namespace {

using nlohmann::json;

json manifest_json(const RunManifest& mf) {
  json j;
  j["command"] = mf.command;
  j["config_digest"] = mf.config_digest;
  j["input_digests"] = mf.input_digests;
  j["master_seed"] = mf.master_seed;
  j["tool_version"] = mf.tool_version;
  return j;
}

json number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
  return v;
}

json ate_json(const AteEstimate& est) {
  json j;
  j["reference"] = to_string(est.reference);
  j["psi"] = est.psi_n;
  j["sigma"] = est.sigma_n;
  j["n"] = est.n;
  j["ci95"] = {est.ci_95.first, est.ci_95.second};
  j["lower975"] = est.lower_975;
  return j;
}

json validation_json(const ValidationReport& rep) {
  json j;
  j["n"] = rep.n;
  j["mu_t_truncated"] = rep.muT_truncated;
  j["mu_t_truncated_frac"] = rep.muT_truncated_frac;
  j["Delta_c_floored"] = rep.DeltaC_floored;
  j["Delta_c_floored_frac"] = rep.DeltaC_floored_frac;
  j["delta_c_floored"] = rep.deltaC_floored;
  j["delta_c_floored_frac"] = rep.deltaC_floored_frac;
  j["phi_n"] = rep.phi_n;
  j["alpha_phi"] = rep.alpha_phi;
  j["kappa"] = number_or_null(rep.kappa);
  j["feasible"] = rep.feasible;
  return j;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

json reference_spec_json(const ReferenceSpec& spec) {
  json j;
  j["kind"] = to_string(spec.kind);
  if (spec.kind == ReferenceKind::FR) j["p"] = spec.fr_p;
  return j;
}

} // namespace

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fnv1a_file_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open for digest");
  std::ostringstream buf;
  buf << in.rdbuf();
  return fnv1a_hex(buf.str());
}

std::string render_estimation_json(const EstimationResult& res, const RunManifest& mf) {
  json j;
  j["manifest"] = manifest_json(mf);
  j["validation"] = validation_json(res.validation);
  json rule;
  rule["phi_n"] = res.knapsack.phi_n;
  rule["eta_kappa"] = number_or_null(res.knapsack.eta_kappa);
  rule["tau_kappa"] = res.knapsack.tau_kappa;
  rule["k_n"] = number_or_null(res.knapsack.k_n);
  rule["saturated"] = res.knapsack.saturated;
  rule["eta"] = res.knapsack.rule.eta;
  rule["boundary_prob"] = res.knapsack.rule.boundary_prob;
  rule["xi"] = res.knapsack.rule.xi;
  rule["rho"] = res.knapsack.rule.values;
  j["rule"] = rule;
  j["budget_residual"] = res.budget_residual;
  json estimates = json::array();
  json scores = json::array();
  for (const ReferenceResult& rr : res.references) {
    estimates.push_back(ate_json(rr.ate));
    json s;
    s["reference"] = to_string(rr.ate.reference);
    s["muY_score"] = rr.muY_score;
    s["muC_score"] = rr.muC_score;
    if (rr.fit.rd_value) s["rd_value"] = *rr.fit.rd_value;
    scores.push_back(s);
  }
  j["estimates"] = estimates;
  j["scores"] = scores;
  j["warnings"] = res.warnings;
  return j.dump(2) + "\n";
}

std::string render_simulation_json(const SimulationReport& rep, const TruthResult& truth,
                                   const RunManifest& mf) {
  json j;
  j["manifest"] = manifest_json(mf);
  j["dgp"] = to_string(rep.dgp);
  j["oracle_nuisances"] = rep.oracle_nuisances;
  j["n"] = rep.n;
  j["reps"] = {{"requested", rep.reps_requested},
               {"completed", rep.reps_completed},
               {"failed", rep.reps_failed}};
  j["master_seed"] = rep.master_seed;
  json t;
  t["phi0"] = truth.phi0;
  t["eta0"] = number_or_null(truth.eta0);
  t["tau0"] = truth.tau0;
  t["rd0"] = truth.rd0;
  t["value_opt"] = truth.value_opt;
  t["mean_DeltaY"] = truth.mean_DeltaY;
  t["mean_DeltaC"] = truth.mean_DeltaC;
  t["psi0_self"] = truth.psi0_self;
  t["samples"] = truth.samples;
  j["truth"] = t;
  json refs = json::array();
  for (const ReferenceMetrics& m : rep.references) {
    json r;
    r["reference"] = reference_spec_json(m.spec);
    r["psi0"] = m.psi0;
    r["coverage_95"] = number_or_null(m.coverage_95);
    r["coverage_lower_975"] = number_or_null(m.coverage_lower_975);
    r["bias"] = number_or_null(m.bias);
    r["rmse"] = number_or_null(m.rmse);
    r["se_sd_ratio"] = number_or_null(m.se_sd_ratio);
    r["mean_se"] = number_or_null(m.mean_se);
    r["sd_psi"] = number_or_null(m.sd_psi);
    r["scaled_ci_width_median"] = number_or_null(median_of(m.scaled_ci_widths));
    r["scaled_ci_widths"] = m.scaled_ci_widths;
    refs.push_back(r);
  }
  j["references"] = refs;
  j["failures"] = rep.failure_messages;
  return j.dump(2) + "\n";
}

std::string render_truth_json(const TruthResult& truth, const ProblemConfig& cfg,
                              const RunManifest& mf) {
  json j;
  j["manifest"] = manifest_json(mf);
  j["samples"] = truth.samples;
  j["kappa"] = number_or_null(cfg.kappa);
  j["alpha"] = cfg.alpha;
  j["phi0"] = truth.phi0;
  j["eta0"] = number_or_null(truth.eta0);
  j["tau0"] = truth.tau0;
  j["boundary0"] = truth.boundary0;
  j["rd0"] = truth.rd0;
  j["value_opt"] = truth.value_opt;
  j["mean_DeltaY"] = truth.mean_DeltaY;
  j["mean_DeltaC"] = truth.mean_DeltaC;
  j["psi0_self"] = truth.psi0_self;
  json refs = json::array();
  for (const ReferenceSpec& spec : cfg.references) {
    json r;
    r["reference"] = reference_spec_json(spec);
    r["psi0"] = truth.psi0(spec);
    refs.push_back(r);
  }
  j["references"] = refs;
  return j.dump(2) + "\n";
}

std::string format_simulation_table(const SimulationReport& rep) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %5s %10s %9s %9s %10s %10s %8s %10s\n",
                "reference", "n", "psi0", "cover95", "coverLB", "bias", "rmse",
                "se/sd", "med(w*√n)");
  out << line;
  for (const ReferenceMetrics& m : rep.references) {
    std::string name = to_string(m.spec.kind);
    if (m.spec.kind == ReferenceKind::FR) {
      char tag[32];
      std::snprintf(tag, sizeof tag, "FR(p=%g)", m.spec.fr_p);
      name = tag;
    }
    std::snprintf(line, sizeof line,
                  "%-10s %5zu %10.4f %9.3f %9.3f %10.4f %10.4f %8.3f %10.4f\n",
                  name.c_str(), rep.n, m.psi0, m.coverage_95, m.coverage_lower_975,
                  m.bias, m.rmse, m.se_sd_ratio,
                  median_of(m.scaled_ci_widths));
    out << line;
  }
  if (rep.reps_failed > 0)
    out << "failed replications: " << rep.reps_failed << " of " << rep.reps_requested
        << "\n";
  return out.str();
}

} // namespace costrule
