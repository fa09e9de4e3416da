#include "qsteer/experiment.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qsteer;

namespace {

ExperimentConfig exact_config(ExperimentKind kind, std::vector<int> dims) {
  ExperimentConfig config;
  config.kind = kind;
  config.dims = std::move(dims);
  return config;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream stream(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("config parsing applies defaults and rejects unknown keys") {
  const auto config = config_from_json(nlohmann::json::parse(R"({"kind": "epr", "d": 4})"));
  CHECK(config.kind == ExperimentKind::Epr);
  CHECK(config.dims == std::vector<int>{4});
  CHECK(config.exact());
  CHECK(config.visibility == 1.0);
  CHECK(config.seed == 0);
  CHECK(config.z_threshold == 3.0);
  CHECK(config.output.format == OutputFormat::Csv);

  CHECK_THROWS_AS((void)config_from_json(nlohmann::json::parse(R"({"dims": [2]})")), ConfigError);
  CHECK_THROWS_AS((void)config_from_json(nlohmann::json::parse(R"({"kind": "teleport"})")),
                  ConfigError);
  CHECK_THROWS_AS((void)config_from_json(nlohmann::json::parse(R"({"shots": 1.5})")),
                  ConfigError);
  CHECK_THROWS_AS((void)config_from_json(nlohmann::json::parse("[1, 2]")), ConfigError);
}

TEST_CASE("config parsing covers the full schema") {
  const auto doc = nlohmann::json::parse(R"({
    "kind": "ss",
    "d": [2, 4],
    "visibility": 0.976,
    "channel": {"type": "depolarizing", "p": 0.25},
    "prep_dim": 2,
    "shots": 5000,
    "seed": 42,
    "z_threshold": 2.5,
    "angle_jitter_deg": 0.1,
    "restarts": 16,
    "output": {"path": "out.csv", "format": "json"}
  })");
  const auto config = config_from_json(doc);
  CHECK(config.kind == ExperimentKind::Ss);
  CHECK(config.dims == std::vector<int>{2, 4});
  CHECK(config.channel.kind == ChannelSpec::Kind::Depolarizing);
  CHECK(config.channel.p == 0.25);
  CHECK(config.prep_dim == 2);
  CHECK(config.shots == 5000);
  CHECK(config.seed == 42);
  CHECK(config.angle_jitter_deg == 0.1);
  CHECK(config.output.format == OutputFormat::Json);
  CHECK_NOTHROW(validate_config(config));
}

TEST_CASE("config validation rejects inconsistent requests") {
  CHECK_THROWS_AS(validate_config(exact_config(ExperimentKind::Epr, {3})), ConfigError);
  CHECK_THROWS_AS(validate_config(exact_config(ExperimentKind::Epr, {512})), ConfigError);
  CHECK_THROWS_AS(validate_config(exact_config(ExperimentKind::Epr, {4, 4})), ConfigError);
  CHECK_THROWS_AS(validate_config(exact_config(ExperimentKind::LhsSearch, {6})), ConfigError);
  CHECK_NOTHROW(validate_config(exact_config(ExperimentKind::LhsBound, {37})));

  auto bad_visibility = exact_config(ExperimentKind::Epr, {2});
  bad_visibility.visibility = 1.2;
  CHECK_THROWS_AS(validate_config(bad_visibility), ConfigError);

  auto epr_prep = exact_config(ExperimentKind::Epr, {2});
  epr_prep.prep_dim = 2;
  CHECK_THROWS_AS(validate_config(epr_prep), ConfigError);

  auto oversized_prep = exact_config(ExperimentKind::Ss, {2});
  oversized_prep.prep_dim = 4;
  CHECK_THROWS_AS(validate_config(oversized_prep), ConfigError);

  auto exact_jitter = exact_config(ExperimentKind::Epr, {2});
  exact_jitter.angle_jitter_deg = 0.5;
  CHECK_THROWS_AS(validate_config(exact_jitter), ConfigError);
  exact_jitter.shots = 100;
  CHECK_NOTHROW(validate_config(exact_jitter));

  auto zero_shots = exact_config(ExperimentKind::Epr, {2});
  zero_shots.shots = 0;
  CHECK_THROWS_AS(validate_config(zero_shots), ConfigError);
}

TEST_CASE("exact runs reproduce the ideal ratio table") {
  for (const auto kind : {ExperimentKind::Epr, ExperimentKind::Ss}) {
    const auto manifest = run_experiment(exact_config(kind, {2, 4, 8, 16}));
    REQUIRE(manifest.reports.size() == 4);
    const double quoted[] = {1.1712, 1.3333, 1.4776, 1.6000};
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(std::abs(manifest.reports[i].kernel - 2.0) <= 1e-9);
      CHECK(std::abs(manifest.reports[i].ratio - quoted[i]) <= 5e-4);
      CHECK(manifest.reports[i].steerable);
    }
  }
}

TEST_CASE("restricted preparations flow through the ss workflow") {
  auto config = exact_config(ExperimentKind::Ss, {4});
  config.prep_dim = 2;
  const auto manifest = run_experiment(config);
  REQUIRE(manifest.reports.size() == 1);
  CHECK(manifest.reports[0].kernel == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(!manifest.reports[0].steerable);
}

TEST_CASE("bound workflow reports the unsteerable ceiling per dimension") {
  const auto manifest = run_experiment(exact_config(ExperimentKind::LhsBound, {2, 4, 8, 16}));
  const double expected[] = {1.70710678118654752, 1.5, 1.35355339059327376, 1.25};
  REQUIRE(manifest.reports.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(manifest.reports[i].kernel - expected[i]) <= 1e-9);
    CHECK(std::abs(manifest.reports[i].bound - expected[i]) <= 1e-12);
    CHECK(!manifest.reports[i].steerable);
  }
}

TEST_CASE("search workflow stays below the bound") {
  auto config = exact_config(ExperimentKind::LhsSearch, {2});
  config.restarts = 8;
  config.seed = 3;
  const auto manifest = run_experiment(config);
  REQUIRE(manifest.reports.size() == 1);
  CHECK(manifest.reports[0].kernel <= manifest.reports[0].bound + 1e-7);
  CHECK(manifest.reports[0].kernel >= manifest.reports[0].bound - 1e-3);
}

TEST_CASE("sampled runs carry a statistical error bar") {
  auto config = exact_config(ExperimentKind::Epr, {4});
  config.visibility = 0.976;
  config.shots = 20000;
  config.seed = 11;
  const auto manifest = run_experiment(config);
  REQUIRE(manifest.reports.size() == 1);
  CHECK(manifest.reports[0].std_error > 0.0);
  CHECK(manifest.reports[0].steerable);
  CHECK(std::abs(manifest.reports[0].kernel - 2.0 * 0.988 * 0.988) <
        5.0 * manifest.reports[0].std_error);
}

TEST_CASE("exact evaluation is independent of the seed") {
  auto first = exact_config(ExperimentKind::Epr, {4});
  first.seed = 1;
  auto second = first;
  second.seed = 2;
  CHECK(run_experiment(first).reports == run_experiment(second).reports);
}

TEST_CASE("number formatting keeps at least twelve significant digits") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(2.0) == "2.000000000000");
  CHECK(format_number(1.7071067811865475) == "1.707106781187");
  CHECK(format_number(1.1715728752538099) == "1.171572875254");
  CHECK(format_number(0.004123456789012345) == "0.00412345678901");
  CHECK(format_number(-0.5) == "-0.500000000000");
}

TEST_CASE("csv output matches the documented row layout") {
  const auto manifest = run_experiment(exact_config(ExperimentKind::Epr, {2}));
  CHECK(to_csv(manifest) ==
        "kind,d,kernel,stderr,bound,ratio,steerable,seed\n"
        "epr,2,2.000000000000,0,1.707106781187,1.171572875254,true,0\n");

  const auto empty = run_experiment(exact_config(ExperimentKind::Epr, {}));
  CHECK(to_csv(empty) == "kind,d,kernel,stderr,bound,ratio,steerable,seed\n");
}

TEST_CASE("csv output is reproducible across runs") {
  auto config = exact_config(ExperimentKind::Epr, {2, 4});
  config.visibility = 0.9;
  config.shots = 4000;
  config.seed = 17;
  CHECK(to_csv(run_experiment(config)) == to_csv(run_experiment(config)));
}

TEST_CASE("json manifests round trip exactly") {
  const auto path = std::filesystem::temp_directory_path() / "qsteer_roundtrip_test.json";
  auto config = exact_config(ExperimentKind::Epr, {2, 4});
  config.shots = 100;
  config.seed = 9;
  config.output.path = path.string();
  config.output.format = OutputFormat::Json;
  const auto manifest = run_experiment(config);
  emit(manifest, OutputFormat::Json, path.string());
  const auto parsed = nlohmann::json::parse(slurp(path)).get<RunManifest>();
  CHECK(parsed == manifest);
  std::filesystem::remove(path);
}

TEST_CASE("emit writes files and cleans up on failure") {
  const auto manifest = run_experiment(exact_config(ExperimentKind::Epr, {2}));
  const auto path = std::filesystem::temp_directory_path() / "qsteer_emit_test.csv";
  emit(manifest, OutputFormat::Csv, path.string());
  CHECK(slurp(path) == to_csv(manifest));
  std::filesystem::remove(path);

  CHECK_THROWS_AS(emit(manifest, OutputFormat::Csv, "/nonexistent-dir/qsteer/out.csv"),
                  std::runtime_error);

  RunManifest duplicated = manifest;
  duplicated.reports.push_back(duplicated.reports.front());
  CHECK_THROWS_AS(emit(duplicated, OutputFormat::Csv, ""), std::invalid_argument);
}

TEST_CASE("kind and format names round trip") {
  for (const auto kind : {ExperimentKind::Epr, ExperimentKind::Ss, ExperimentKind::LhsBound,
                          ExperimentKind::LhsSearch})
    CHECK(kind_from_name(kind_name(kind)) == kind);
  CHECK(format_from_name("csv") == OutputFormat::Csv);
  CHECK(format_from_name("json") == OutputFormat::Json);
  CHECK_THROWS_AS((void)format_from_name("xml"), ConfigError);
}

}  // TEST_SUITE
