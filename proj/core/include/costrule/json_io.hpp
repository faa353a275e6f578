#pragma once

#include "costrule/estimator.hpp"
#include "costrule/sim.hpp"
#include "costrule/types.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace costrule {

inline constexpr const char* kToolVersion = "0.1.0";

// Provenance block embedded in every output file. Equal digests and seed
// imply byte-identical outputs.
struct RunManifest {
  std::string command;
  std::string config_digest = "-";
  std::map<std::string, std::string> input_digests;
  std::uint64_t master_seed = 0;
  std::string tool_version = kToolVersion;
};

// FNV-1a 64-bit content digests, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);
std::string fnv1a_file_hex(const std::string& path);

std::string render_estimation_json(const EstimationResult& res, const RunManifest& mf);
std::string render_simulation_json(const SimulationReport& rep, const TruthResult& truth,
                                   const RunManifest& mf);
std::string render_truth_json(const TruthResult& truth, const ProblemConfig& cfg,
                              const RunManifest& mf);

// Fixed-width per-reference summary block matching the report layout.
std::string format_simulation_table(const SimulationReport& rep);

} // namespace costrule
