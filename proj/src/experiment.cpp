#include "qsteer/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace qsteer {

namespace {

constexpr std::uint64_t kDimensionTag = 0x64696d00ULL;  // "dim"

bool power_of_two(int value) { return value >= 1 && (value & (value - 1)) == 0; }

int qubit_count(int d) {
  int n = 0;
  while ((1 << n) < d) ++n;
  return n;
}

}  // namespace

std::string kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Epr: return "epr";
    case ExperimentKind::Ss: return "ss";
    case ExperimentKind::LhsBound: return "lhs-bound";
    case ExperimentKind::LhsSearch: return "lhs-search";
  }
  throw std::invalid_argument("kind_name: unknown experiment kind");
}

ExperimentKind kind_from_name(const std::string& name) {
  if (name == "epr") return ExperimentKind::Epr;
  if (name == "ss") return ExperimentKind::Ss;
  if (name == "lhs-bound") return ExperimentKind::LhsBound;
  if (name == "lhs-search") return ExperimentKind::LhsSearch;
  throw ConfigError("unknown experiment kind '" + name +
                    "' (expected epr, ss, lhs-bound or lhs-search)");
}

std::string format_name(OutputFormat format) {
  return format == OutputFormat::Csv ? "csv" : "json";
}

OutputFormat format_from_name(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw ConfigError("unknown output format '" + name + "' (expected csv or json)");
}

namespace {

const std::set<std::string> kKnownKeys = {
    "kind",       "d",    "visibility", "channel",          "prep_dim", "shots",
    "z_threshold", "seed", "restarts",   "angle_jitter_deg", "output"};

std::vector<int> dims_from_json(const nlohmann::json& value) {
  if (value.is_number_integer()) return {value.get<int>()};
  if (value.is_array()) {
    std::vector<int> dims;
    for (const auto& entry : value) {
      if (!entry.is_number_integer()) throw ConfigError("config key 'd' must hold integers");
      dims.push_back(entry.get<int>());
    }
    return dims;
  }
  throw ConfigError("config key 'd' must be an integer or an array of integers");
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
  for (const auto& [key, value] : doc.items())
    if (!kKnownKeys.contains(key)) throw ConfigError("unknown config key '" + key + "'");

  ExperimentConfig config;
  if (doc.contains("kind")) config.kind = kind_from_name(doc.at("kind").get<std::string>());
  if (doc.contains("d")) config.dims = dims_from_json(doc.at("d"));
  if (doc.contains("visibility")) config.visibility = doc.at("visibility").get<double>();
  if (doc.contains("channel")) config.channel = doc.at("channel").get<ChannelSpec>();
  if (doc.contains("prep_dim")) config.prep_dim = doc.at("prep_dim").get<int>();
  if (doc.contains("shots")) {
    const auto& shots = doc.at("shots");
    if (shots.is_string() && shots.get<std::string>() == "exact") {
      config.shots.reset();
    } else if (shots.is_number_integer()) {
      config.shots = shots.get<std::int64_t>();
    } else {
      throw ConfigError("config key 'shots' must be a positive integer or \"exact\"");
    }
  }
  if (doc.contains("seed")) config.seed = doc.at("seed").get<std::uint64_t>();
  if (doc.contains("z_threshold")) config.z_threshold = doc.at("z_threshold").get<double>();
  if (doc.contains("angle_jitter_deg"))
    config.angle_jitter_deg = doc.at("angle_jitter_deg").get<double>();
  if (doc.contains("restarts")) config.restarts = doc.at("restarts").get<int>();
  if (doc.contains("output")) {
    const auto& output = doc.at("output");
    if (!output.is_object()) throw ConfigError("config key 'output' must be an object");
    if (output.contains("path")) config.output.path = output.at("path").get<std::string>();
    if (output.contains("format"))
      config.output.format = format_from_name(output.at("format").get<std::string>());
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream stream(path);
  if (!stream) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(stream);
  } catch (const nlohmann::json::exception& error) {
    throw ConfigError("malformed config file '" + path + "': " + error.what());
  }
  try {
    return config_from_json(doc);
  } catch (const nlohmann::json::exception& error) {
    throw ConfigError("malformed config file '" + path + "': " + error.what());
  }
}

void validate_config(const ExperimentConfig& config) {
  std::set<int> seen;
  for (const int d : config.dims) {
    if (!seen.insert(d).second)
      throw ConfigError("invalid dimension list: d=" + std::to_string(d) + " appears twice");
    switch (config.kind) {
      case ExperimentKind::Epr:
      case ExperimentKind::Ss:
        if (d < 2 || d > 256 || !power_of_two(d))
          throw ConfigError("invalid dimension d=" + std::to_string(d) +
                            ": epr/ss require a power of 2 in [2, 256]");
        break;
      case ExperimentKind::LhsBound:
        if (d < 2 || d > 256)
          throw ConfigError("invalid dimension d=" + std::to_string(d) +
                            ": lhs-bound requires 2 <= d <= 256");
        break;
      case ExperimentKind::LhsSearch:
        if (d != 2 && d != 4 && d != 8 && d != 16)
          throw ConfigError("invalid dimension d=" + std::to_string(d) +
                            ": lhs-search supports d in {2, 4, 8, 16}");
        break;
    }
  }
  if (config.visibility < 0.0 || config.visibility > 1.0)
    throw ConfigError("visibility must lie in [0, 1]");
  if (config.channel.kind == ChannelSpec::Kind::Depolarizing &&
      (config.channel.p < 0.0 || config.channel.p > 1.0))
    throw ConfigError("depolarizing probability must lie in [0, 1]");
  if (config.prep_dim != 0) {
    if (config.kind != ExperimentKind::Ss)
      throw ConfigError("prep_dim applies to ss runs only");
    if (!power_of_two(config.prep_dim))
      throw ConfigError("prep_dim must be a power of 2");
    for (const int d : config.dims)
      if (config.prep_dim > d)
        throw ConfigError("prep_dim must not exceed any requested dimension");
  }
  if (config.shots && *config.shots < 1) throw ConfigError("shots must be >= 1");
  if (config.z_threshold <= 0.0) throw ConfigError("z_threshold must be positive");
  if (config.angle_jitter_deg < 0.0) throw ConfigError("angle_jitter_deg must be >= 0");
  if (config.angle_jitter_deg > 0.0) {
    if (config.kind != ExperimentKind::Epr && config.kind != ExperimentKind::Ss)
      throw ConfigError("angle jitter applies to epr/ss runs only");
    if (config.exact())
      throw ConfigError("angle jitter requires finite shots; exact mode never draws randomness");
  }
  if (config.restarts < 1) throw ConfigError("restarts must be >= 1");
}

namespace {

WitnessReport sampled_or_exact(const ExperimentConfig& config, ExperimentKind kind, int d,
                               const JointProbabilityTable& table1,
                               const JointProbabilityTable& table2, std::uint64_t dim_seed) {
  if (config.exact()) {
    const double kernel =
        kind == ExperimentKind::Epr ? kernel_epr(table1, table2) : kernel_ss(table1, table2);
    return report(kind, kernel, 0.0, d, config.z_threshold);
  }
  const CountRecord record1 = sample_counts(table1, *config.shots, dim_seed);
  const CountRecord record2 = sample_counts(table2, *config.shots, dim_seed);
  const KernelEstimate estimate = estimate_kernel(record1, record2, kind);
  return report(kind, estimate.kernel, estimate.std_error, d, config.z_threshold);
}

WitnessReport run_dimension(const ExperimentConfig& config, int d) {
  const std::uint64_t dim_seed = derive_stream(config.seed, kDimensionTag + static_cast<std::uint64_t>(d));
  switch (config.kind) {
    case ExperimentKind::Epr: {
      const QuditIndexCodec codec(qubit_count(d));
      const NoiseSpec noise{config.visibility, deg_to_rad(config.angle_jitter_deg),
                            config.channel};
      const auto table1 = epr_table_with_noise(codec, 1, noise, dim_seed);
      const auto table2 = epr_table_with_noise(codec, 2, noise, dim_seed);
      return sampled_or_exact(config, ExperimentKind::Epr, d, table1, table2, dim_seed);
    }
    case ExperimentKind::Ss: {
      const QuditIndexCodec codec(qubit_count(d));
      const NoiseSpec noise{1.0, deg_to_rad(config.angle_jitter_deg), config.channel};
      const auto table1 = ss_table_with_noise(codec, 1, noise, config.prep_dim, dim_seed);
      const auto table2 = ss_table_with_noise(codec, 2, noise, config.prep_dim, dim_seed);
      return sampled_or_exact(config, ExperimentKind::Ss, d, table1, table2, dim_seed);
    }
    case ExperimentKind::LhsBound:
      return report(ExperimentKind::LhsBound, lhs_bound_exact(d), 0.0, d, config.z_threshold);
    case ExperimentKind::LhsSearch: {
      const auto result = lhs_search(d, config.restarts, dim_seed);
      return report(ExperimentKind::LhsSearch, result.value, 0.0, d, config.z_threshold);
    }
  }
  throw std::invalid_argument("run_experiment: unknown experiment kind");
}

}  // namespace

RunManifest run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  const auto start = std::chrono::steady_clock::now();

  RunManifest manifest;
  manifest.config = config;
  manifest.version = std::string(kArtifactVersion);
  manifest.rng = std::string(kRngId);
  std::vector<int> dims = config.dims;
  std::sort(dims.begin(), dims.end());
  for (const int d : dims) manifest.reports.push_back(run_dimension(config, d));

  manifest.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return manifest;
}

std::string format_number(double value) {
  if (value == 0.0) return "0";
  int decimals = 12;
  const double magnitude = std::abs(value);
  if (magnitude < 1.0)
    decimals = std::max(12, 11 - static_cast<int>(std::floor(std::log10(magnitude))));
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
  return buffer;
}

std::string to_csv(const RunManifest& manifest) {
  std::ostringstream out;
  out << "kind,d,kernel,stderr,bound,ratio,steerable,seed\n";
  for (const auto& row : manifest.reports) {
    out << kind_name(row.kind) << ',' << row.d << ',' << format_number(row.kernel) << ','
        << format_number(row.std_error) << ',' << format_number(row.bound) << ','
        << format_number(row.ratio) << ',' << (row.steerable ? "true" : "false") << ','
        << manifest.config.seed << '\n';
  }
  return out.str();
}

void to_json(nlohmann::json& doc, const ChannelSpec& spec) {
  doc = nlohmann::json{{"type", spec.kind == ChannelSpec::Kind::Identity ? "identity"
                                                                         : "depolarizing"}};
  if (spec.kind == ChannelSpec::Kind::Depolarizing) doc["p"] = spec.p;
}

void from_json(const nlohmann::json& doc, ChannelSpec& spec) {
  const auto type = doc.at("type").get<std::string>();
  if (type == "identity") {
    spec = ChannelSpec{};
  } else if (type == "depolarizing") {
    spec = ChannelSpec{ChannelSpec::Kind::Depolarizing, doc.at("p").get<double>()};
  } else {
    throw ConfigError("unknown channel type '" + type + "'");
  }
}

void to_json(nlohmann::json& doc, const WitnessReport& report) {
  doc = nlohmann::json{{"kind", kind_name(report.kind)}, {"d", report.d},
                       {"kernel", report.kernel},        {"stderr", report.std_error},
                       {"bound", report.bound},          {"ratio", report.ratio},
                       {"steerable", report.steerable}};
}

void from_json(const nlohmann::json& doc, WitnessReport& report) {
  report.kind = kind_from_name(doc.at("kind").get<std::string>());
  report.d = doc.at("d").get<int>();
  report.kernel = doc.at("kernel").get<double>();
  report.std_error = doc.at("stderr").get<double>();
  report.bound = doc.at("bound").get<double>();
  report.ratio = doc.at("ratio").get<double>();
  report.steerable = doc.at("steerable").get<bool>();
}

void to_json(nlohmann::json& doc, const ExperimentConfig& config) {
  doc = nlohmann::json{{"kind", kind_name(config.kind)},
                       {"d", config.dims},
                       {"visibility", config.visibility},
                       {"channel", config.channel},
                       {"prep_dim", config.prep_dim},
                       {"seed", config.seed},
                       {"z_threshold", config.z_threshold},
                       {"angle_jitter_deg", config.angle_jitter_deg},
                       {"restarts", config.restarts},
                       {"output", {{"path", config.output.path},
                                   {"format", format_name(config.output.format)}}}};
  if (config.shots)
    doc["shots"] = *config.shots;
  else
    doc["shots"] = "exact";
}

void from_json(const nlohmann::json& doc, ExperimentConfig& config) {
  config = config_from_json(doc);
}

void to_json(nlohmann::json& doc, const RunManifest& manifest) {
  doc = nlohmann::json{{"artifact_version", manifest.version},
                       {"rng", manifest.rng},
                       {"wall_time_s", manifest.wall_time_s},
                       {"config", manifest.config},
                       {"reports", manifest.reports}};
}

void from_json(const nlohmann::json& doc, RunManifest& manifest) {
  manifest.version = doc.at("artifact_version").get<std::string>();
  manifest.rng = doc.at("rng").get<std::string>();
  manifest.wall_time_s = doc.at("wall_time_s").get<double>();
  manifest.config = doc.at("config").get<ExperimentConfig>();
  manifest.reports = doc.at("reports").get<std::vector<WitnessReport>>();
}

void emit(const RunManifest& manifest, OutputFormat format, const std::string& path) {
  std::set<int> seen;
  for (const auto& row : manifest.reports)
    if (!seen.insert(row.d).second)
      throw std::invalid_argument("emit: manifest lists a dimension twice");

  std::string payload;
  if (format == OutputFormat::Csv) {
    payload = to_csv(manifest);
  } else {
    payload = nlohmann::json(manifest).dump(2);
    payload.push_back('\n');
  }

  if (path.empty() || path == "-") {
    std::cout << payload;
    return;
  }
  std::ofstream stream(path, std::ios::binary | std::ios::trunc);
  if (!stream) throw std::runtime_error("cannot open output file '" + path + "' for writing");
  stream << payload;
  stream.flush();
  if (!stream) {
    stream.close();
    std::error_code ec;
    std::filesystem::remove(path, ec);
    throw std::runtime_error("failed while writing output file '" + path +
                             "'; partial file removed");
  }
}

}  // namespace qsteer
