#pragma once

// Experiment harness: a declarative config (JSON file or flags), the per-d
// workflow dispatch, and machine-readable emission of the resulting witness
// reports as CSV rows or a JSON manifest.

#include "qsteer/lhs.hpp"
#include "qsteer/noise.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qsteer {

inline constexpr std::string_view kArtifactVersion = "0.1.0";

enum class OutputFormat { Csv, Json };

struct OutputSpec {
  std::string path;  // empty -> stdout
  OutputFormat format = OutputFormat::Csv;

  bool operator==(const OutputSpec&) const = default;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Epr;
  std::vector<int> dims;
  double visibility = 1.0;
  ChannelSpec channel;
  int prep_dim = 0;  // 0 -> unrestricted; ss only
  std::optional<std::int64_t> shots;  // nullopt -> exact evaluation
  std::uint64_t seed = 0;
  double z_threshold = 3.0;
  double angle_jitter_deg = 0.0;
  int restarts = 32;  // lhs-search only
  OutputSpec output;

  bool exact() const { return !shots.has_value(); }
  bool operator==(const ExperimentConfig&) const = default;
};

struct RunManifest {
  ExperimentConfig config;
  std::string version;
  std::string rng;
  double wall_time_s = 0.0;
  std::vector<WitnessReport> reports;

  bool operator==(const RunManifest&) const = default;
};

// Invalid configuration; maps to exit status 2 at the CLI.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string kind_name(ExperimentKind kind);
ExperimentKind kind_from_name(const std::string& name);
std::string format_name(OutputFormat format);
OutputFormat format_from_name(const std::string& name);

ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);
void validate_config(const ExperimentConfig& config);

/// Executes the configured workflow for every requested dimension and
/// assembles the manifest (reports sorted by dimension).
RunManifest run_experiment(const ExperimentConfig& config);

/// Fixed-point serialization carrying at least 12 significant digits;
/// exact zero prints as "0".
std::string format_number(double value);

std::string to_csv(const RunManifest& manifest);

void to_json(nlohmann::json& doc, const ChannelSpec& spec);
void from_json(const nlohmann::json& doc, ChannelSpec& spec);
void to_json(nlohmann::json& doc, const WitnessReport& report);
void from_json(const nlohmann::json& doc, WitnessReport& report);
void to_json(nlohmann::json& doc, const ExperimentConfig& config);
void from_json(const nlohmann::json& doc, ExperimentConfig& config);
void to_json(nlohmann::json& doc, const RunManifest& manifest);
void from_json(const nlohmann::json& doc, RunManifest& manifest);

/// Writes the manifest to `path` (empty -> stdout). A failed write removes
/// the partial file before throwing.
void emit(const RunManifest& manifest, OutputFormat format, const std::string& path);

}  // namespace qsteer
