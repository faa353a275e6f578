#include "costrule/config.hpp"
#include "costrule/dataset_io.hpp"
#include "costrule/dgp.hpp"
#include "costrule/estimator.hpp"
#include "costrule/json_io.hpp"
#include "costrule/rng.hpp"
#include "costrule/sim.hpp"
#include "costrule/types.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <thread>

namespace {

using namespace costrule;

constexpr std::uint64_t kDefaultSeed = 1729;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot open for writing");
  out << content;
  if (!out) throw ParseError(path + ": write failed");
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  long long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

RunConfig study_defaults(DgpId id, bool oracle) {
  RunConfig base;
  base.problem = dgp_default_config(id);
  base.specs = default_nuisance_specs({id, oracle});
  return base;
}

int run_estimate(const std::string& data_path, const std::string& config_path,
                 const std::string& out_path, std::uint64_t seed) {
  Stopwatch clock;
  const RunConfig cfg = load_config(config_path);
  if (!cfg.schema)
    throw ParseError(config_path + ": estimate requires a 'schema' section");
  const Dataset ds = load_dataset(data_path, *cfg.schema);
  const EstimationResult res = run_estimation(ds, cfg.problem, cfg.specs, seed);
  RunManifest mf;
  mf.command = "estimate";
  mf.config_digest = fnv1a_file_hex(config_path);
  mf.input_digests["data"] = fnv1a_file_hex(data_path);
  mf.master_seed = seed;
  write_file(out_path, render_estimation_json(res, mf));
  for (const ReferenceResult& rr : res.references) {
    std::cout << to_string(rr.ate.reference) << ": psi=" << rr.ate.psi_n
              << " ci95=[" << rr.ate.ci_95.first << ", " << rr.ate.ci_95.second
              << "] sigma=" << rr.ate.sigma_n << "\n";
  }
  std::cout << "wrote " << out_path << " (elapsed_ms=" << clock.ms() << ")\n";
  return 0;
}

int run_simulate(const std::string& dgp_name, std::size_t n, int reps,
                 std::uint64_t seed, const std::string& config_path,
                 const std::string& out_path, int threads, bool oracle,
                 std::size_t truth_samples, const std::string& replications_path) {
  Stopwatch clock;
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const DgpId id = dgp_from_string(dgp_name);
  RunConfig cfg = study_defaults(id, oracle);
  if (!config_path.empty()) cfg = load_config(config_path, std::move(cfg));
  const DgpSpec dgp{id, oracle};
  const TruthResult truth = truth_psi0(dgp, cfg.problem, truth_samples,
                                       mix_seed(seed, ~std::uint64_t{0}));
  const SimulationReport report =
      monte_carlo(dgp, cfg.problem, cfg.specs, n, reps, seed, threads, truth);
  RunManifest mf;
  mf.command = "simulate";
  if (!config_path.empty()) mf.config_digest = fnv1a_file_hex(config_path);
  mf.master_seed = seed;
  write_file(out_path, render_simulation_json(report, truth, mf));
  if (!replications_path.empty()) {
    std::string flat = "reference\tpsi\tsigma\tscaled_width\n";
    char line[160];
    for (const ReferenceMetrics& m : report.references) {
      for (std::size_t r = 0; r < m.psi_values.size(); ++r) {
        std::snprintf(line, sizeof line, "%s\t%.17g\t%.17g\t%.17g\n",
                      to_string(m.spec.kind).c_str(), m.psi_values[r],
                      m.sigma_values[r], m.scaled_ci_widths[r]);
        flat += line;
      }
    }
    write_file(replications_path, flat);
  }
  std::cout << format_simulation_table(report);
  std::cout << "wrote " << out_path << " (elapsed_ms=" << clock.ms() << ")\n";
  return 0;
}

int run_truth(const std::string& dgp_name, const std::string& config_path,
              std::size_t samples, std::uint64_t seed, const std::string& out_path) {
  Stopwatch clock;
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  const DgpId id = dgp_from_string(dgp_name);
  RunConfig cfg = study_defaults(id, true);
  if (!config_path.empty()) cfg = load_config(config_path, std::move(cfg));
  if (samples < 1000000)
    std::cout << "warning: " << samples
              << " samples is below the recommended 1e6; truth values will be noisy\n";
  const TruthResult truth = truth_psi0({id, true}, cfg.problem, samples, seed);
  RunManifest mf;
  mf.command = "truth";
  if (!config_path.empty()) mf.config_digest = fnv1a_file_hex(config_path);
  mf.master_seed = seed;
  write_file(out_path, render_truth_json(truth, cfg.problem, mf));
  for (const ReferenceSpec& spec : cfg.problem.references)
    std::cout << to_string(spec.kind) << ": psi0=" << truth.psi0(spec) << "\n";
  std::cout << "wrote " << out_path << " (elapsed_ms=" << clock.ms() << ")\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budget-constrained optimal treatment rules with efficient ATE inference"};
  app.require_subcommand(1);

  std::string data_path, config_path, out_path, dgp_name, replications_path;
  std::uint64_t seed = kDefaultSeed;
  std::size_t n = 1000;
  int reps = 1000;
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  bool oracle = false;
  std::size_t samples = 2000000;

  CLI::App* est = app.add_subcommand("estimate", "Estimate rules and ATEs from a data file");
  est->add_option("--data", data_path, "Delimited data file (TSV or CSV)")->required();
  est->add_option("--config", config_path, "JSON config with schema/problem/learners")
      ->required();
  est->add_option("--out", out_path, "Output JSON path")->required();
  est->add_option("--seed", seed, "Seed for the cross-fit split (default 1729)");

  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo study of the estimator");
  sim->add_option("--dgp", dgp_name, "main_study or parametric")->required();
  sim->add_option("--n", n, "Sample size per replication")->required();
  sim->add_option("--reps", reps, "Number of replications")->required();
  sim->add_option("--seed", seed, "Master seed (default 1729)");
  sim->add_option("--config", config_path, "JSON config overriding study defaults");
  sim->add_option("--out", out_path, "Output JSON path")->required();
  sim->add_option("--threads", threads, "Worker threads (default: hardware)");
  sim->add_flag("--oracle", oracle, "Use analytic nuisance truths as learners");
  sim->add_option("--truth-samples", samples, "Mega-sample size for psi0 (default 2e6)");
  sim->add_option("--replications", replications_path,
                  "Optional TSV of per-replication (psi, sigma, scaled width)");

  CLI::App* tru = app.add_subcommand("truth", "Population quantities under a design");
  tru->add_option("--dgp", dgp_name, "main_study or parametric")->required();
  tru->add_option("--config", config_path, "JSON config overriding study defaults");
  tru->add_option("--samples", samples, "Mega-sample size (default 2e6)");
  tru->add_option("--seed", seed, "Seed (default 1729)");
  tru->add_option("--out", out_path, "Output JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (est->parsed()) return run_estimate(data_path, config_path, out_path, seed);
    if (sim->parsed())
      return run_simulate(dgp_name, n, reps, seed, config_path, out_path, threads,
                          oracle, samples, replications_path);
    if (tru->parsed()) return run_truth(dgp_name, config_path, samples, seed, out_path);
  } catch (const InfeasibleBudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
