#pragma once
// Experiment configuration files: INI-style sections of `key = value` lines.
//
//   # Simulation 1
//   [ar1_table]
//   family      = ar1
//   lambda_grid = -0.9, -0.5, 0, 0.5, 0.9
//   n           = 200
//   T           = 50
//   replicates  = 300
//   seed        = 7
//   sigma2      = 1          (optional, default 1)
//   mu          = 0          (optional, default 0)
//   estimators  = mle, pl, ht, hw   (optional, default all four)
//   bootstrap   = 200        (optional, HW bootstrap size)
//
// Errors carry the source line and field, e.g. "table.ini:4: n: expected an integer".

#include <filesystem>
#include <istream>
#include <string_view>
#include <vector>

#include "tscore/experiment.hpp"

namespace tscore {

/// Throws ConfigError on syntax errors, unknown keys, missing required keys
/// (family, lambda_grid, n, T, replicates, seed) or invalid values.
std::vector<ExperimentConfig> parse_config(std::istream& in, std::string_view source = "<config>");
std::vector<ExperimentConfig> load_config(const std::filesystem::path& path);

}  // namespace tscore
