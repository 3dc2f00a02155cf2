#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "runge/fit.hpp"

namespace runge {

// Shortest round-trip decimal representation, fixed across platforms.
std::string format_double(double v);

std::uint64_t fnv1a(const std::string& data);

// A (parameter, measured values) table; `provenance` names the module
// operation that produced the rows.  `labels`, when present, becomes a
// leading string column in the CSV.
struct Series {
  std::string name;
  std::string provenance;
  std::vector<std::string> columns;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
};

struct FitEntry {
  std::string name;
  std::string model;
  FitResult fit;
};

struct ExperimentReport {
  std::string experiment;
  std::uint64_t config_hash = 0;
  int grid_n = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<Series> series;
  std::vector<FitEntry> fits;
  std::vector<std::pair<std::string, bool>> checks;

  bool passed() const;
  // One CSV per series: <dir>/<experiment>_<series name>.csv.
  void writeCsv(const std::string& dir) const;
  void writeJson(const std::string& path) const;
};

}  // namespace runge
