#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "biasaudit/audit.hpp"
#include "biasaudit/distort.hpp"
#include "biasaudit/embedspace.hpp"

namespace biasaudit {

inline constexpr const char* kToolName = "biasaudit";
inline constexpr const char* kToolVersion = "0.1.0";

struct ModelSpec {
  std::string id;
  bool supervised = false;
  std::map<std::string, std::filesystem::path> features;  // split name -> feature file
  std::optional<std::filesystem::path> predictions;
  std::map<std::string, std::filesystem::path> distorted_predictions;  // kind -> CSV
  std::optional<std::filesystem::path> probe;
};

/// Everything a command needs. Relative paths in the JSON file are resolved
/// against the file's directory.
struct AuditConfig {
  std::map<std::string, std::filesystem::path> datasets;
  std::vector<ModelSpec> models;
  std::map<std::string, std::filesystem::path> manifests;

  KnnConfig knn;
  std::string knn_reference = "train";
  std::string query_split = "test";

  ProbeConfig probe;
  bool probe_normalize = true;
  int num_classes = kNumClasses;

  std::vector<std::string> distortion_kinds;
  std::string distortion_input;  // dataset key to distort, empty to skip writing datasets
  DistortParams distortion;

  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "out";

  nlohmann::json effective;  // config after overrides; digested into every report
};

struct ConfigOverrides {
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> k;
};

/// Throws Error{Config} on schema problems or missing referenced paths.
AuditConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir,
                         const ConfigOverrides& overrides = {});
AuditConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {});

/// 64-bit FNV-1a of the canonical JSON dump, as 16 hex digits.
std::string config_digest(const AuditConfig& cfg);

nlohmann::json probe_to_json(const ProbeModel& model);
ProbeModel probe_from_json(const nlohmann::json& j);

/// Fixed-width text table, columns padded to their widest cell.
std::string format_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows);

// Commands. Each writes <out>/<name>.json and <out>/<name>.txt (plus the
// artifacts noted) and returns the in-memory result.

/// Also writes <out>/gap_manifest.txt.
GapSet cmd_gap(const AuditConfig& cfg);
std::vector<ColorBiasReport> cmd_colorbias(const AuditConfig& cfg);
std::vector<ShapeBiasReport> cmd_shapebias(const AuditConfig& cfg);
/// Also writes distorted datasets (<split>-<kind>.bin + .json sidecar) when
/// `distortion_input` is set.
std::vector<DistortionReport> cmd_distort(const AuditConfig& cfg);

struct KnnAccuracy {
  std::string model_id;
  double accuracy = 0;
  std::size_t n = 0;
};
std::vector<KnnAccuracy> cmd_knn(const AuditConfig& cfg);

struct ProbeAccuracy {
  std::string model_id;
  double train_accuracy = 0;
  double test_accuracy = 0;
};
/// Also writes probe_<id>.json and predictions_<id>.csv.
std::vector<ProbeAccuracy> cmd_probe(const AuditConfig& cfg);

}  // namespace biasaudit
