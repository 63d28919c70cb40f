// SPDX-License-Identifier: Apache-2.0
//
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

#include "beamsense/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "beamsense/config.hpp"
#include "beamsense/pipeline.hpp"

namespace beamsense {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed_override;
};

ExperimentConfig resolve_config(const CommonOptions &common) {
  ExperimentConfig config =
      common.config_path.empty() ? default_config() : load_config(common.config_path);
  if (common.seed_override) {
    config.master_seed = *common.seed_override;
    config.validate();
  }
  return config;
}

Pipeline parse_pipeline(const std::string &name) {
  if (name == "single") return Pipeline::Single;
  if (name == "multi") return Pipeline::Multi;
  throw ConfigError("--pipeline must be 'single' or 'multi', got '" + name + "'");
}

void write_manifest(const fs::path &out_dir, const std::string &command,
                    const ExperimentConfig &config,
                    const std::map<std::string, std::string> &inputs,
                    const std::vector<std::string> &outputs) {
  json manifest;
  manifest["command"] = command;
  manifest["config"] = config_to_json(config);
  manifest["config_hash"] = config_hash(config);
  manifest["seed"] = config.master_seed;
  manifest["inputs"] = inputs;
  manifest["outputs"] = outputs;
  std::ofstream out(out_dir / "manifest.json");
  if (!out) throw IoError("cannot write manifest in " + out_dir.string());
  out << manifest.dump(2) << '\n';
}

// Loads the regression when the pipeline needs it; the missing-flag error
// is a usage error (exit 2), so it surfaces as ConfigError.
std::optional<RegressionModel> load_pipeline_regression(
    Pipeline pipeline, const std::string &regression_path) {
  if (pipeline != Pipeline::Multi) {
    if (!regression_path.empty()) return load_regression(regression_path);
    return std::nullopt;
  }
  if (regression_path.empty())
    throw ConfigError("the multi pipeline requires --regression <model.json>");
  return load_regression(regression_path);
}

int cmd_gen(const CommonOptions &common, const std::string &mode_name, int n,
            const std::string &out) {
  const ExperimentConfig config = resolve_config(common);
  const SceneMode mode = mode_name == "single" ? SceneMode::SingleCandidate
                         : mode_name == "multi"
                             ? SceneMode::MultiCandidate
                             : throw ConfigError("--mode must be 'single' or 'multi'");

  const auto samples =
      generate_dataset(config.gen_config(), mode, n, config.master_seed);

  const fs::path out_dir(out);
  fs::create_directories(out_dir);
  save(samples, out_dir / "dataset.jsonl");
  write_manifest(out_dir, "gen", config,
                 {{"mode", mode_name}, {"n", std::to_string(n)}},
                 {"dataset.jsonl"});

  std::map<int, long> histogram;
  for (const auto &s : samples) ++histogram[s.optimal_beam];
  std::printf("wrote %zu samples to %s\n", samples.size(),
              (out_dir / "dataset.jsonl").c_str());
  std::printf("label histogram:");
  for (const auto &[beam, count] : histogram) std::printf(" %d:%ld", beam, count);
  std::printf("\n");
  return 0;
}

int cmd_fit(const CommonOptions &common, const std::string &dataset_path,
            const std::string &out) {
  const ExperimentConfig config = resolve_config(common);
  const auto samples = load(dataset_path);
  const auto [train_set, val_set] = split(samples, config.split_spec());

  const auto pairs = regression_pairs(train_set);
  if (pairs.empty())
    throw ConfigError("dataset has no labeled transmitter boxes to fit on");
  const RegressionModel model = fit_regression(pairs);

  double holdout_err = 0.0;
  long holdout_n = 0;
  for (const auto &s : val_set) {
    if (!s.true_tx_row) continue;
    const Eigen::Vector2d predicted = predict_center(model, s.gps);
    holdout_err +=
        (predicted - s.boxes.rows.row(*s.true_tx_row).transpose()).norm();
    ++holdout_n;
  }

  const fs::path out_dir(out);
  fs::create_directories(out_dir);
  save_regression(model, out_dir / "regression.json");
  write_manifest(out_dir, "fit", config, {{"dataset", dataset_path}},
                 {"regression.json"});

  std::printf("fit %zu pairs; training residual %.6g\n", pairs.size(),
              model.train_residual);
  if (holdout_n > 0)
    std::printf("holdout center error (mean over %ld samples): %.6g\n", holdout_n,
                holdout_err / static_cast<double>(holdout_n));
  return 0;
}

int cmd_train(const CommonOptions &common, const std::string &dataset_path,
              const std::string &pipeline_name, const std::string &regression_path,
              const std::string &out) {
  const ExperimentConfig config = resolve_config(common);
  const Pipeline pipeline = parse_pipeline(pipeline_name);
  const auto regression = load_pipeline_regression(pipeline, regression_path);

  const auto samples = load(dataset_path);
  const auto [train_set, val_set] = split(samples, config.split_spec());
  const auto train_points = training_points(train_set, pipeline);
  const auto val_points =
      evaluation_points(val_set, pipeline, regression ? &*regression : nullptr);
  std::vector<LabeledPoint> val_labeled;
  val_labeled.reserve(val_points.size());
  for (const auto &p : val_points) val_labeled.push_back({p.x, p.label});
  if (train_points.empty() || val_labeled.empty())
    throw ConfigError("dataset yields no usable training or validation points");

  const TrainResult result = train(train_points, val_labeled, config.train_config());

  const fs::path out_dir(out);
  fs::create_directories(out_dir);
  save_mlp(result.params, config.train_config(), out_dir / "model.json");
  write_history_csv(result.history, out_dir / "history.csv");
  write_manifest(out_dir, "train", config,
                 {{"dataset", dataset_path},
                  {"pipeline", pipeline_name},
                  {"regression", regression_path}},
                 {"model.json", "history.csv"});

  double best = 0.0;
  for (const auto &row : result.history) best = std::max(best, row.val_top1);
  std::printf("trained %d epochs on %zu points; best val top-1 %.4f (epoch %d)\n",
              config.train.epochs, train_points.size(), best, result.best_epoch);
  return 0;
}

int cmd_eval(const CommonOptions &common, const std::string &dataset_path,
             const std::string &model_path, const std::string &pipeline_name,
             const std::string &regression_path, const std::string &out) {
  const ExperimentConfig config = resolve_config(common);
  const Pipeline pipeline = parse_pipeline(pipeline_name);
  const auto regression = load_pipeline_regression(pipeline, regression_path);
  const MlpParams params = load_mlp(model_path);

  const auto samples = load(dataset_path);
  const auto [train_set, val_set] = split(samples, config.split_spec());
  const auto points =
      evaluation_points(val_set, pipeline, regression ? &*regression : nullptr);

  EvalReport report = evaluate_pipeline(params, points, pipeline,
                                        config.eval.topk_list, config.num_beams);
  report.seed = config.master_seed;
  report.config_hash = config_hash(config);

  const fs::path out_dir(out);
  fs::create_directories(out_dir);
  auto outputs = emit_report(report, out_dir);
  write_manifest(out_dir, "eval", config,
                 {{"dataset", dataset_path},
                  {"model", model_path},
                  {"pipeline", pipeline_name},
                  {"regression", regression_path}},
                 outputs);

  for (const auto &[k, acc] : report.topk) std::printf("top-%d: %.4f\n", k, acc);
  if (report.r2) std::printf("r2: %.4f\n", *report.r2);
  if (report.txid)
    std::printf("txid accuracy %.4f precision %.4f recall %.4f\n",
                report.txid->accuracy, report.txid->precision, report.txid->recall);
  return 0;
}

int cmd_curve(const CommonOptions &common, const std::string &dataset_path,
              const std::string &pipeline_name, const std::string &regression_path,
              const std::string &out) {
  const ExperimentConfig config = resolve_config(common);
  const Pipeline pipeline = parse_pipeline(pipeline_name);
  const auto regression = load_pipeline_regression(pipeline, regression_path);

  const auto samples = load(dataset_path);
  const auto [train_set, val_set] = split(samples, config.split_spec());
  const auto train_points = training_points(train_set, pipeline);
  const auto val_points =
      evaluation_points(val_set, pipeline, regression ? &*regression : nullptr);
  std::vector<LabeledPoint> val_labeled;
  for (const auto &p : val_points) val_labeled.push_back({p.x, p.label});

  const auto points = learning_curve(train_points, val_labeled,
                                     config.eval.curve_fractions,
                                     config.train_config());

  const fs::path out_dir(out);
  fs::create_directories(out_dir);
  {
    std::ofstream csv(out_dir / "curve.csv");
    if (!csv) throw IoError("cannot write curve.csv in " + out_dir.string());
    csv << "fraction,n_train,top1,top5\n";
    char line[128];
    for (const auto &p : points) {
      std::snprintf(line, sizeof(line), "%.17g,%d,%.17g,%.17g\n", p.fraction,
                    p.n_used, p.top1, p.top5);
      csv << line;
    }
  }
  write_manifest(out_dir, "curve", config,
                 {{"dataset", dataset_path},
                  {"pipeline", pipeline_name},
                  {"regression", regression_path}},
                 {"curve.csv"});

  for (const auto &p : points)
    std::printf("fraction %.2f (%d samples): top-1 %.4f top-5 %.4f\n", p.fraction,
                p.n_used, p.top1, p.top5);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string> &args) {
  CLI::App app{"sensing-aided mmWave beam prediction pipeline"};
  app.require_subcommand(1);

  CommonOptions common;
  std::uint64_t seed_value = 0;
  app.add_option("--config", common.config_path, "JSON config file")
      ->check(CLI::ExistingFile);
  auto *seed_opt = app.add_option("--seed", seed_value, "master seed override");

  std::string mode = "single", pipeline = "single";
  std::string dataset, model, regression, out;
  int n_samples = 1000;

  auto *gen = app.add_subcommand("gen", "generate and persist a dataset");
  gen->add_option("--mode", mode, "single | multi")->required();
  gen->add_option("--n", n_samples, "number of samples")->required();
  gen->add_option("--out", out, "output directory")->required();

  auto *fit = app.add_subcommand("fit", "fit the GPS-to-image regression");
  fit->add_option("--dataset", dataset, "dataset.jsonl path")->required();
  fit->add_option("--out", out, "output directory")->required();

  auto *train_cmd = app.add_subcommand("train", "train the beam classifier");
  train_cmd->add_option("--dataset", dataset, "dataset.jsonl path")->required();
  train_cmd->add_option("--pipeline", pipeline, "single | multi");
  train_cmd->add_option("--regression", regression, "regression.json (multi)");
  train_cmd->add_option("--out", out, "output directory")->required();

  auto *eval_cmd = app.add_subcommand("eval", "evaluate a trained model");
  eval_cmd->add_option("--dataset", dataset, "dataset.jsonl path")->required();
  eval_cmd->add_option("--model", model, "model.json path")->required();
  eval_cmd->add_option("--pipeline", pipeline, "single | multi");
  eval_cmd->add_option("--regression", regression, "regression.json (multi)");
  eval_cmd->add_option("--out", out, "output directory")->required();

  auto *curve = app.add_subcommand("curve", "sample-efficiency learning curve");
  curve->add_option("--dataset", dataset, "dataset.jsonl path")->required();
  curve->add_option("--pipeline", pipeline, "single | multi");
  curve->add_option("--regression", regression, "regression.json (multi)");
  curve->add_option("--out", out, "output directory")->required();

  // CLI11 wants argv-style reversed input when parsing a vector.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  if (seed_opt->count() > 0) common.seed_override = seed_value;

  try {
    if (gen->parsed()) return cmd_gen(common, mode, n_samples, out);
    if (fit->parsed()) return cmd_fit(common, dataset, out);
    if (train_cmd->parsed())
      return cmd_train(common, dataset, pipeline, regression, out);
    if (eval_cmd->parsed())
      return cmd_eval(common, dataset, model, pipeline, regression, out);
    if (curve->parsed()) return cmd_curve(common, dataset, pipeline, regression, out);
  } catch (const ConfigError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace beamsense
