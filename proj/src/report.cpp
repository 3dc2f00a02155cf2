#include "runge/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace runge {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char ch : data) {
    hash ^= ch;
    hash *= 1099511628211ull;
  }
  return hash;
}

bool ExperimentReport::passed() const {
  for (const auto& [name, ok] : checks)
    if (!ok) return false;
  return true;
}

namespace {

std::string hashHex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

void ExperimentReport::writeCsv(const std::string& dir) const {
  std::filesystem::create_directories(dir);
  for (const auto& s : series) {
    std::ofstream out(std::filesystem::path(dir) /
                      (experiment + "_" + s.name + ".csv"));
    bool labelled = !s.labels.empty();
    if (labelled) out << s.name << ",";
    for (size_t c = 0; c < s.columns.size(); ++c)
      out << s.columns[c] << (c + 1 < s.columns.size() ? "," : "");
    out << "\n";
    for (size_t r = 0; r < s.rows.size(); ++r) {
      if (labelled) out << s.labels[r] << ",";
      for (size_t c = 0; c < s.rows[r].size(); ++c)
        out << format_double(s.rows[r][c])
            << (c + 1 < s.rows[r].size() ? "," : "");
      out << "\n";
    }
  }
}

void ExperimentReport::writeJson(const std::string& path) const {
  nlohmann::ordered_json j;
  j["experiment"] = experiment;
  j["config_hash"] = hashHex(config_hash);
  j["grid_n"] = grid_n;
  j["seed"] = seed;
  for (const auto& [k, v] : metadata) j["metadata"][k] = v;
  j["series"] = nlohmann::ordered_json::array();
  for (const auto& s : series) {
    nlohmann::ordered_json js;
    js["name"] = s.name;
    js["provenance"] = s.provenance;
    js["columns"] = s.columns;
    if (!s.labels.empty()) js["labels"] = s.labels;
    js["rows"] = s.rows;
    j["series"].push_back(js);
  }
  j["fits"] = nlohmann::ordered_json::array();
  for (const auto& f : fits) {
    nlohmann::ordered_json jf;
    jf["name"] = f.name;
    jf["model"] = f.model;
    jf["amplitude"] = f.fit.amplitude;
    jf["exponent"] = f.fit.exponent;
    jf["rms"] = f.fit.rms;
    jf["points"] = f.fit.points;
    jf["ok"] = f.fit.ok;
    if (!f.fit.note.empty()) jf["note"] = f.fit.note;
    j["fits"].push_back(jf);
  }
  j["checks"] = nlohmann::ordered_json::object();
  for (const auto& [name, ok] : checks) j["checks"][name] = ok;
  j["passed"] = passed();

  std::filesystem::create_directories(
      std::filesystem::path(path).parent_path().string().empty()
          ? "."
          : std::filesystem::path(path).parent_path().string());
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

}  // namespace runge
