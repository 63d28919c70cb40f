// beamsense - sensing-aided mmWave beam prediction simulator and learning pipeline
// Copyright (C) 2026 beamsense contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "beamsense/cli.hpp"
#include "beamsense/config.hpp"
#include "beamsense/pipeline.hpp"

using namespace beamsense;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string &name)
      : path(fs::temp_directory_path() /
             ("beamsense_cli_" + std::to_string(::getpid()) + "_" + name)) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string read_file(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path &p, const std::string &text) {
  std::ofstream out(p);
  out << text;
}

// Short training runs keep the suite fast.
std::string small_config_json() {
  return R"({"train": {"epochs": 4}, "eval": {"curve_fractions": [0.5, 1.0]}})";
}

}  // namespace

TEST_CASE("help exits zero, bad usage exits two") {
  CHECK(run_cli({"--help"}) == 0);
  CHECK(run_cli({}) == 2);
  CHECK(run_cli({"frobnicate"}) == 2);
  CHECK(run_cli({"gen", "--mode", "single"}) == 2); // missing required flags
}

TEST_CASE("config errors exit two and name the field") {
  TempDir tmp("cfg");
  write_file(tmp.path / "bad.json", R"({"scene": {"street_distnce_m": 10}})");
  CHECK(run_cli({"--config", (tmp.path / "bad.json").string(), "gen", "--mode",
                 "single", "--n", "5", "--out", (tmp.path / "o").string()}) == 2);
  write_file(tmp.path / "bad2.json", R"({"train": {"dropout": 1.5}})");
  CHECK(run_cli({"--config", (tmp.path / "bad2.json").string(), "gen", "--mode",
                 "single", "--n", "5", "--out", (tmp.path / "o").string()}) == 2);
  write_file(tmp.path / "bad3.json", "{ not json");
  CHECK(run_cli({"--config", (tmp.path / "bad3.json").string(), "gen", "--mode",
                 "single", "--n", "5", "--out", (tmp.path / "o").string()}) == 2);
}

TEST_CASE("gen is reproducible byte for byte and manifest echoes the config") {
  TempDir tmp("gen");
  for (const char *dir : {"a", "b"})
    REQUIRE(run_cli({"gen", "--mode", "multi", "--n", "60", "--out",
                     (tmp.path / dir).string()}) == 0);
  CHECK(read_file(tmp.path / "a/dataset.jsonl") ==
        read_file(tmp.path / "b/dataset.jsonl"));
  CHECK(read_file(tmp.path / "a/manifest.json") ==
        read_file(tmp.path / "b/manifest.json"));

  const auto manifest = nlohmann::json::parse(read_file(tmp.path / "a/manifest.json"));
  CHECK(manifest.at("command") == "gen");
  CHECK(manifest.at("config").contains("scene"));
  CHECK(manifest.at("outputs") == std::vector<std::string>{"dataset.jsonl"});
  const auto echoed = parse_config(manifest.at("config"));
  CHECK(config_hash(echoed) == manifest.at("config_hash").get<std::string>());

  // a different seed changes the data
  REQUIRE(run_cli({"--seed", "123", "gen", "--mode", "multi", "--n", "60", "--out",
                   (tmp.path / "c").string()}) == 0);
  CHECK(read_file(tmp.path / "a/dataset.jsonl") !=
        read_file(tmp.path / "c/dataset.jsonl"));
}

TEST_CASE("the full single-pipeline workflow is idempotent") {
  TempDir tmp("flow");
  write_file(tmp.path / "config.json", small_config_json());
  const std::string cfg = (tmp.path / "config.json").string();

  REQUIRE(run_cli({"--config", cfg, "gen", "--mode", "single", "--n", "150", "--out",
                   (tmp.path / "ds").string()}) == 0);
  const std::string dataset = (tmp.path / "ds/dataset.jsonl").string();

  for (const char *dir : {"m1", "m2"})
    REQUIRE(run_cli({"--config", cfg, "train", "--dataset", dataset, "--pipeline",
                     "single", "--out", (tmp.path / dir).string()}) == 0);
  CHECK(read_file(tmp.path / "m1/history.csv") ==
        read_file(tmp.path / "m2/history.csv"));
  CHECK(read_file(tmp.path / "m1/model.json") ==
        read_file(tmp.path / "m2/model.json"));

  for (const char *dir : {"r1", "r2"})
    REQUIRE(run_cli({"--config", cfg, "eval", "--dataset", dataset, "--model",
                     (tmp.path / "m1/model.json").string(), "--pipeline", "single",
                     "--out", (tmp.path / dir).string()}) == 0);
  for (const char *name : {"metrics.csv", "confusion.csv", "scatter.csv",
                           "confusion.svg", "scatter.svg", "manifest.json"})
    CHECK(read_file(tmp.path / "r1" / name) == read_file(tmp.path / "r2" / name));

  // single-pipeline reports carry no identification block
  CHECK(read_file(tmp.path / "r1/metrics.csv").find("txid_accuracy") ==
        std::string::npos);
}

TEST_CASE("the multi pipeline requires a regression model") {
  TempDir tmp("multi");
  write_file(tmp.path / "config.json", small_config_json());
  const std::string cfg = (tmp.path / "config.json").string();
  REQUIRE(run_cli({"--config", cfg, "gen", "--mode", "multi", "--n", "200", "--out",
                   (tmp.path / "ds").string()}) == 0);
  const std::string dataset = (tmp.path / "ds/dataset.jsonl").string();

  CHECK(run_cli({"--config", cfg, "train", "--dataset", dataset, "--pipeline",
                 "multi", "--out", (tmp.path / "m").string()}) == 2);

  REQUIRE(run_cli({"--config", cfg, "fit", "--dataset", dataset, "--out",
                   (tmp.path / "reg").string()}) == 0);
  const std::string regression = (tmp.path / "reg/regression.json").string();
  REQUIRE(run_cli({"--config", cfg, "train", "--dataset", dataset, "--pipeline",
                   "multi", "--regression", regression, "--out",
                   (tmp.path / "m").string()}) == 0);
  REQUIRE(run_cli({"--config", cfg, "eval", "--dataset", dataset, "--model",
                   (tmp.path / "m/model.json").string(), "--pipeline", "multi",
                   "--regression", regression, "--out",
                   (tmp.path / "r").string()}) == 0);
  const std::string metrics = read_file(tmp.path / "r/metrics.csv");
  CHECK(metrics.find("txid_accuracy") != std::string::npos);
  CHECK(metrics.find("top1_given_txid") != std::string::npos);
}

TEST_CASE("curve runs produce one row per fraction") {
  TempDir tmp("curve");
  write_file(tmp.path / "config.json", small_config_json());
  const std::string cfg = (tmp.path / "config.json").string();
  REQUIRE(run_cli({"--config", cfg, "gen", "--mode", "single", "--n", "120", "--out",
                   (tmp.path / "ds").string()}) == 0);
  REQUIRE(run_cli({"--config", cfg, "curve", "--dataset",
                   (tmp.path / "ds/dataset.jsonl").string(), "--pipeline", "single",
                   "--out", (tmp.path / "c").string()}) == 0);
  const std::string csv = read_file(tmp.path / "c/curve.csv");
  CHECK(csv.find("fraction,n_train,top1,top5") == 0);
  int lines = 0;
  for (const char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == 3); // header + two fractions
}

TEST_CASE("an untrained model scores at chance level") {
  // Wide lens so the labels spread over the whole codebook; a fixed random
  // network then hits roughly 1/Q no matter where its predictions cluster.
  TempDir tmp("null");
  write_file(tmp.path / "config.json", R"({
    "scene": {"camera_fov_single_deg": 90.0, "street_distance_m": 100.0,
               "detector": {"miss_prob": 0, "false_positive_rate": 0,
                            "center_jitter_std": 0}},
    "seeds": {"master": 31}
  })");
  const std::string cfg = (tmp.path / "config.json").string();
  REQUIRE(run_cli({"--config", cfg, "gen", "--mode", "single", "--n", "3000", "--out",
                   (tmp.path / "ds").string()}) == 0);

  const ExperimentConfig config = load_config(tmp.path / "config.json");
  const auto samples = load(tmp.path / "ds/dataset.jsonl");
  const auto [train_set, val_set] = split(samples, config.split_spec());
  const auto points = evaluation_points(val_set, Pipeline::Single, nullptr);

  // One pass through the CLI to exercise the eval command itself.
  {
    TrainConfig tc = config.train_config();
    save_mlp(MlpParams::init(tc.hidden, tc.outputs, 9000), tc,
             tmp.path / "model.json");
    REQUIRE(run_cli({"--config", cfg, "eval", "--dataset",
                     (tmp.path / "ds/dataset.jsonl").string(), "--model",
                     (tmp.path / "model.json").string(), "--pipeline", "single",
                     "--out", (tmp.path / "r").string()}) == 0);
  }

  double total = 0.0;
  const int n_models = 32;
  for (int i = 0; i < n_models; ++i) {
    const MlpParams params =
        MlpParams::init(config.train.hidden, config.train.outputs,
                        9000 + static_cast<std::uint64_t>(i));
    const EvalReport report = evaluate_pipeline(params, points, Pipeline::Single,
                                                {1}, config.num_beams);
    total += report.topk.at(1);
  }
  const double mean_top1 = total / n_models;
  CHECK(std::abs(mean_top1 - 1.0 / 32.0) <= 0.02);
}
