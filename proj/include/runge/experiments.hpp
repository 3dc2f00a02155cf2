#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "runge/grid.hpp"
#include "runge/report.hpp"

namespace runge {

// Declarative experiment description; `raw` carries the merged JSON config
// (defaults <- file <- command-line overrides).
struct ExperimentConfig {
  std::string experiment;
  int grid_n = 32;
  std::uint64_t seed = 7;
  int threads = 1;
  std::string out_dir = "out";
  nlohmann::json raw;

  static ExperimentConfig defaults(const std::string& experiment);
  static ExperimentConfig load(const std::string& path);
  void applyOverrides(std::optional<int> grid, std::optional<std::uint64_t> seed,
                      std::optional<int> threads,
                      const std::optional<std::string>& out);

  Layout layout() const;
  BoundarySide gammaSide() const;
  double gammaFraction() const;
  // Hash over everything that determines report content (threads and output
  // location excluded so runs differing only in those stay byte-identical).
  std::uint64_t hash() const;
};

// Runs the experiment and writes CSV/JSON into cfg.out_dir.
ExperimentReport run(const ExperimentConfig& cfg);

// Full command-line entry point; returns the process exit code
// (0 pass, 1 assertion failure, 2 configuration error, 3 numerical failure).
int run_cli(int argc, char** argv);

}  // namespace runge
