#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nhgwp/oracles.hpp"
#include "nhgwp/scenario.hpp"

namespace nhgwp {

struct RunReport {
  RunMode mode = RunMode::Gwd;
  /// (name, value) pairs in the order they are written to report.csv.
  /// Deviation metrics are non-negative.
  std::vector<std::pair<std::string, double>> metrics;
  std::size_t gwd_steps = 0;
  std::size_t grid_steps = 0;
  double wall_seconds = 0.0;
  /// Conditions that did not stop the run but limit what it shows.
  std::vector<std::string> flags;
  std::vector<std::filesystem::path> files;

  std::optional<double> metric(std::string_view name) const;
};

/// Closed-form reference for the scenario, if one exists: 1D, constant b,
/// V = c0 + c1 x (ramp) or c0 + c2 x^2 (harmonic, c2 > 0) or constant (free),
/// and a real Gaussian start with purely imaginary alpha0.
std::optional<oracle::OracleParams> infer_oracle(const Scenario& scenario);

/// Runs `mode` (which overrides scenario.mode) and writes the selected
/// artifacts to `outdir`, creating it if needed. Output files are a pure
/// function of the scenario; wall time is only reported in the returned value.
RunReport run(RunMode mode, const Scenario& scenario, const std::filesystem::path& outdir);

/// Fixed 17-significant-digit rendering used by every CSV file.
std::string format_csv_number(double value);

}  // namespace nhgwp
