// Command-line harness around the steering-witness library. Subcommands:
//   run <config.json>   full workflow from a config file (flags override)
//   bound --d <list>    unsteerable bounds per dimension
//   sweep --d <list>    epr/ss sweep over dimensions
// Exit status: 0 success, 2 configuration error, 1 runtime failure.

#include "qsteer/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using qsteer::ConfigError;
using qsteer::ExperimentConfig;

struct CliOptions {
  std::string config_path;
  std::optional<std::string> kind;
  std::vector<int> dims;
  std::optional<double> visibility;
  std::optional<std::string> shots;
  std::optional<std::uint64_t> seed;
  std::optional<int> prep_dim;
  std::optional<int> restarts;
  std::optional<double> z_threshold;
  std::optional<double> angle_jitter_deg;
  std::optional<std::string> channel;
  std::optional<double> channel_p;
  std::optional<std::string> output;
  std::optional<std::string> format;
};

void add_common_options(CLI::App& cmd, CliOptions& options) {
  cmd.add_option("--d", options.dims, "Dimensions to run (comma separated)")->delimiter(',');
  cmd.add_option("--visibility", options.visibility, "Pair visibility in [0, 1]");
  cmd.add_option("--shots", options.shots, "Shots per setting, or 'exact'");
  cmd.add_option("--seed", options.seed, "64-bit seed for all randomness");
  cmd.add_option("--prep-dim", options.prep_dim,
                 "Restrict ss preparations to this dimension (power of 2)");
  cmd.add_option("--restarts", options.restarts, "Restarts for lhs-search");
  cmd.add_option("--z", options.z_threshold, "Verdict threshold in standard errors");
  cmd.add_option("--angle-jitter-deg", options.angle_jitter_deg,
                 "HWP angle jitter standard deviation, degrees");
  cmd.add_option("--channel", options.channel, "Bob-side qubit channel: identity|depolarizing");
  cmd.add_option("--channel-p", options.channel_p, "Depolarizing probability in [0, 1]");
  cmd.add_option("--output", options.output, "Output path (default: stdout)");
  cmd.add_option("--format", options.format, "Output format: csv|json");
}

std::optional<std::int64_t> parse_shots(const std::string& text) {
  if (text == "exact") return std::nullopt;
  try {
    std::size_t consumed = 0;
    const std::int64_t value = std::stoll(text, &consumed);
    if (consumed != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ConfigError("shots must be a positive integer or 'exact', got '" + text + "'");
  }
}

void apply_options(ExperimentConfig& config, const CliOptions& options) {
  if (options.kind) config.kind = qsteer::kind_from_name(*options.kind);
  if (!options.dims.empty()) config.dims = options.dims;
  if (options.visibility) config.visibility = *options.visibility;
  if (options.shots) config.shots = parse_shots(*options.shots);
  if (options.seed) config.seed = *options.seed;
  if (options.prep_dim) config.prep_dim = *options.prep_dim;
  if (options.restarts) config.restarts = *options.restarts;
  if (options.z_threshold) config.z_threshold = *options.z_threshold;
  if (options.angle_jitter_deg) config.angle_jitter_deg = *options.angle_jitter_deg;
  if (options.channel) {
    if (*options.channel == "identity") {
      config.channel = qsteer::ChannelSpec{};
    } else if (*options.channel == "depolarizing") {
      config.channel.kind = qsteer::ChannelSpec::Kind::Depolarizing;
    } else {
      throw ConfigError("unknown channel '" + *options.channel + "'");
    }
  }
  if (options.channel_p) config.channel.p = *options.channel_p;
  if (options.output) config.output.path = *options.output;
  if (options.format) config.output.format = qsteer::format_from_name(*options.format);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multidimensional quantum steering witness simulator"};
  app.require_subcommand(1);

  CliOptions run_options;
  auto* run_cmd = app.add_subcommand("run", "Run the workflow described by a config file");
  run_cmd->add_option("config", run_options.config_path, "JSON config file")->required();
  run_cmd->add_option("--kind", run_options.kind, "Workflow: epr|ss|lhs-bound|lhs-search");
  add_common_options(*run_cmd, run_options);

  CliOptions bound_options;
  auto* bound_cmd = app.add_subcommand("bound", "Unsteerable bounds for the given dimensions");
  add_common_options(*bound_cmd, bound_options);

  CliOptions sweep_options;
  auto* sweep_cmd = app.add_subcommand("sweep", "Witness sweep over dimensions");
  sweep_cmd->add_option("--kind", sweep_options.kind, "Workflow: epr|ss");
  add_common_options(*sweep_cmd, sweep_options);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& error) {
    app.exit(error);
    return 2;
  }

  try {
    ExperimentConfig config;
    if (run_cmd->parsed()) {
      config = qsteer::load_config(run_options.config_path);
      apply_options(config, run_options);
    } else if (bound_cmd->parsed()) {
      if (bound_options.dims.empty()) throw ConfigError("bound requires --d");
      config.kind = qsteer::ExperimentKind::LhsBound;
      apply_options(config, bound_options);
    } else {
      if (sweep_options.dims.empty()) throw ConfigError("sweep requires --d");
      if (sweep_options.kind && *sweep_options.kind != "epr" && *sweep_options.kind != "ss")
        throw ConfigError("sweep supports kinds epr and ss");
      apply_options(config, sweep_options);
    }
    qsteer::validate_config(config);
    const qsteer::RunManifest manifest = qsteer::run_experiment(config);
    qsteer::emit(manifest, config.output.format, config.output.path);
    return 0;
  } catch (const ConfigError& error) {
    std::cerr << "config error: " << error.what() << '\n';
    return 2;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << '\n';
    return 1;
  }
}
