#pragma once

#include "costrule/dataset_io.hpp"
#include "costrule/nuisance.hpp"
#include "costrule/types.hpp"

#include <optional>
#include <string>

namespace costrule {

// Run configuration parsed from JSON. Sections "schema", "problem" and
// "learners" are each optional; omitted fields keep their defaults. Unknown
// keys are rejected.
struct RunConfig {
  std::optional<Schema> schema;
  ProblemConfig problem;
  NuisanceSpecs specs;
};

// Parses on top of `base`, so callers can preload study defaults and let the
// file override only what it mentions.
RunConfig parse_config_text(const std::string& text, const std::string& origin,
                            RunConfig base = RunConfig{});
RunConfig load_config(const std::string& path, RunConfig base = RunConfig{});

} // namespace costrule
