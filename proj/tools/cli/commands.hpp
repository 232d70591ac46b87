#pragma once

#include <string>
#include <vector>

#include "cli/config.hpp"

namespace profex::cli {

struct CommandResult {
  json report;
  std::vector<std::string> outputs;  ///< file names inside the output directory
};

/// Draws X, Zstar, Z, U, T or S from a law spec and writes them as CSV.
CommandResult run_simulate(const RunConfig& config);
/// Diagonal peaks-over-threshold Hüsler-Reiss fit of a CSV data file.
CommandResult run_fit(const RunConfig& config);
/// Eigen-decomposition and rank truncation of a profile covariance or sample.
CommandResult run_pca(const RunConfig& config);
/// Transform a tabulated max(T) or max(U) distribution function.
CommandResult run_link(const RunConfig& config);

CommandResult run_command(const RunConfig& config);

}  // namespace profex::cli
