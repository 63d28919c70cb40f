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

#include "beamsense/config.hpp"

#include <cinttypes>
#include <set>
#include <fstream>

#include "beamsense/rng.hpp"

namespace beamsense {

using nlohmann::json;

namespace {

enum : std::uint64_t {
  kTagTrainSeed = 0x7472,
  kTagSplitSeed = 0x7370,
};

// Walks one JSON block, reporting unknown keys and type errors with the
// full field path.
class BlockReader {
 public:
  BlockReader(const json &block, std::string path)
      : block_(block), path_(std::move(path)) {
    if (!block_.is_object())
      throw ConfigError(path_ + ": expected an object");
  }

  ~BlockReader() = default;

  void finish() const {
    for (const auto &[key, value] : block_.items())
      if (!consumed_.contains(key))
        throw ConfigError(path_ + "." + key + ": unknown field");
  }

  template <typename T>
  void read(const char *key, T &out) {
    consumed_.insert(key);
    if (!block_.contains(key)) return;
    try {
      out = block_.at(key).get<T>();
    } catch (const json::exception &) {
      throw ConfigError(path_ + "." + key + ": wrong type");
    }
  }

  const json *child(const char *key) {
    consumed_.insert(key);
    if (!block_.contains(key)) return nullptr;
    return &block_.at(key);
  }

 private:
  const json &block_;
  std::string path_;
  std::set<std::string> consumed_;
};

void parse_scene(const json &doc, SceneConfig &scene) {
  BlockReader reader(doc, "scene");
  reader.read("street_distance_m", scene.street_distance_m);
  reader.read("lane_width_m", scene.lane_width_m);
  reader.read("num_lanes", scene.num_lanes);
  reader.read("vehicle_speed_mps", scene.vehicle_speed_mps);
  reader.read("bs_height_m", scene.bs_height_m);
  reader.read("tx_height_m", scene.tx_height_m);
  reader.read("bs_yaw_deg", scene.bs_yaw_deg);
  reader.read("image_width", scene.image_width);
  reader.read("image_height", scene.image_height);
  reader.read("camera_fov_single_deg", scene.camera_fov_single_deg);
  reader.read("camera_fov_multi_deg", scene.camera_fov_multi_deg);
  reader.read("fov_margin_deg", scene.fov_margin_deg);
  reader.read("gps_noise_std_m", scene.gps.noise_std_m);
  reader.read("power_noise_std", scene.power_noise_std);
  reader.read("max_distractors", scene.max_distractors);
  reader.read("min_vehicle_sep_m", scene.min_vehicle_sep_m);
  reader.read("min_center_sep_norm", scene.min_center_sep_norm);
  reader.read("wavelength_m", scene.wavelength_m);
  reader.read("tag", scene.tag);
  if (const json *detector = reader.child("detector")) {
    BlockReader det(*detector, "scene.detector");
    det.read("miss_prob", scene.detector.miss_prob);
    det.read("false_positive_rate", scene.detector.false_positive_rate);
    det.read("center_jitter_std", scene.detector.center_jitter_std);
    det.finish();
  }
  reader.finish();
}

void parse_wireless(const json &doc, ExperimentConfig &config) {
  BlockReader reader(doc, "wireless");
  reader.read("num_elements", config.array.num_elements);
  reader.read("element_spacing", config.array.element_spacing);
  reader.read("fov_gamma_deg", config.array.fov_gamma_deg);
  reader.read("num_beams", config.num_beams);
  reader.read("num_subcarriers", config.ofdm.num_subcarriers);
  reader.read("cyclic_prefix", config.ofdm.cyclic_prefix);
  reader.read("sample_time_s", config.ofdm.sample_time_s);
  reader.read("snr_db", config.ofdm.snr_db);
  reader.read("symbol_power", config.ofdm.symbol_power);
  reader.finish();
}

void parse_train(const json &doc, TrainConfig &train) {
  BlockReader reader(doc, "train");
  reader.read("batch_size", train.batch_size);
  reader.read("learning_rate", train.learning_rate);
  reader.read("lr_decay_epochs", train.lr_decay_epochs);
  reader.read("lr_decay_factor", train.lr_decay_factor);
  reader.read("dropout", train.dropout);
  reader.read("epochs", train.epochs);
  reader.read("adam_beta1", train.adam_beta1);
  reader.read("adam_beta2", train.adam_beta2);
  reader.read("adam_eps", train.adam_eps);
  reader.read("hidden", train.hidden);
  reader.finish();
}

void parse_eval(const json &doc, EvalConfig &eval) {
  BlockReader reader(doc, "eval");
  reader.read("topk", eval.topk_list);
  reader.read("curve_fractions", eval.curve_fractions);
  reader.finish();
}

}  // namespace

void EvalConfig::validate() const {
  if (topk_list.empty()) throw ConfigError("eval.topk: must not be empty");
  for (const int k : topk_list)
    if (k < 1) throw ConfigError("eval.topk: entries must be >= 1");
  if (curve_fractions.empty())
    throw ConfigError("eval.curve_fractions: must not be empty");
  for (std::size_t i = 0; i < curve_fractions.size(); ++i) {
    if (!(curve_fractions[i] > 0.0) || curve_fractions[i] > 1.0)
      throw ConfigError("eval.curve_fractions: entries must lie in (0, 1]");
    if (i > 0 && curve_fractions[i] < curve_fractions[i - 1])
      throw ConfigError("eval.curve_fractions: must be sorted ascending");
  }
}

void ExperimentConfig::validate() const {
  scene.validate();
  array.validate();
  ofdm.validate();
  train.validate();
  eval.validate();
  if (num_beams != 32)
    throw ConfigError("wireless.num_beams: the sample schema is 32-beam");
  if (train.outputs != num_beams)
    throw ConfigError("train outputs must equal wireless.num_beams");
  if (!(train_fraction > 0.0) || !(train_fraction < 1.0))
    throw ConfigError("split.train_fraction: must be in (0, 1)");
}

GenConfig ExperimentConfig::gen_config() const {
  GenConfig gen;
  gen.scene = scene;
  gen.array = array;
  gen.ofdm = ofdm;
  gen.num_beams = num_beams;
  return gen;
}

SplitSpec ExperimentConfig::split_spec() const {
  return {train_fraction, derive_seed(master_seed, kTagSplitSeed)};
}

TrainConfig ExperimentConfig::train_config() const {
  TrainConfig out = train;
  out.seed = derive_seed(master_seed, kTagTrainSeed);
  return out;
}

ExperimentConfig default_config() { return {}; }

ExperimentConfig parse_config(const json &doc) {
  if (!doc.is_object()) throw ConfigError("config root: expected an object");
  ExperimentConfig config;

  BlockReader root(doc, "config");
  if (const json *scene = root.child("scene")) parse_scene(*scene, config.scene);
  if (const json *wireless = root.child("wireless")) parse_wireless(*wireless, config);
  if (const json *train = root.child("train")) parse_train(*train, config.train);
  if (const json *eval = root.child("eval")) parse_eval(*eval, config.eval);
  if (const json *seeds = root.child("seeds")) {
    BlockReader reader(*seeds, "seeds");
    reader.read("master", config.master_seed);
    reader.finish();
  }
  if (const json *split = root.child("split")) {
    BlockReader reader(*split, "split");
    reader.read("train_fraction", config.train_fraction);
    reader.finish();
  }
  root.finish();

  config.train.outputs = config.num_beams;
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not readable: " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception &e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

json config_to_json(const ExperimentConfig &config) {
  json doc;
  doc["scene"] = {
      {"street_distance_m", config.scene.street_distance_m},
      {"lane_width_m", config.scene.lane_width_m},
      {"num_lanes", config.scene.num_lanes},
      {"vehicle_speed_mps", config.scene.vehicle_speed_mps},
      {"bs_height_m", config.scene.bs_height_m},
      {"tx_height_m", config.scene.tx_height_m},
      {"bs_yaw_deg", config.scene.bs_yaw_deg},
      {"image_width", config.scene.image_width},
      {"image_height", config.scene.image_height},
      {"camera_fov_single_deg", config.scene.camera_fov_single_deg},
      {"camera_fov_multi_deg", config.scene.camera_fov_multi_deg},
      {"fov_margin_deg", config.scene.fov_margin_deg},
      {"detector",
       {{"miss_prob", config.scene.detector.miss_prob},
        {"false_positive_rate", config.scene.detector.false_positive_rate},
        {"center_jitter_std", config.scene.detector.center_jitter_std}}},
      {"gps_noise_std_m", config.scene.gps.noise_std_m},
      {"power_noise_std", config.scene.power_noise_std},
      {"max_distractors", config.scene.max_distractors},
      {"min_vehicle_sep_m", config.scene.min_vehicle_sep_m},
      {"min_center_sep_norm", config.scene.min_center_sep_norm},
      {"wavelength_m", config.scene.wavelength_m},
      {"tag", config.scene.tag},
  };
  doc["wireless"] = {
      {"num_elements", config.array.num_elements},
      {"element_spacing", config.array.element_spacing},
      {"fov_gamma_deg", config.array.fov_gamma_deg},
      {"num_beams", config.num_beams},
      {"num_subcarriers", config.ofdm.num_subcarriers},
      {"cyclic_prefix", config.ofdm.cyclic_prefix},
      {"sample_time_s", config.ofdm.sample_time_s},
      {"snr_db", config.ofdm.snr_db},
      {"symbol_power", config.ofdm.symbol_power},
  };
  doc["train"] = {
      {"batch_size", config.train.batch_size},
      {"learning_rate", config.train.learning_rate},
      {"lr_decay_epochs", config.train.lr_decay_epochs},
      {"lr_decay_factor", config.train.lr_decay_factor},
      {"dropout", config.train.dropout},
      {"epochs", config.train.epochs},
      {"adam_beta1", config.train.adam_beta1},
      {"adam_beta2", config.train.adam_beta2},
      {"adam_eps", config.train.adam_eps},
      {"hidden", config.train.hidden},
  };
  doc["eval"] = {
      {"topk", config.eval.topk_list},
      {"curve_fractions", config.eval.curve_fractions},
  };
  doc["seeds"] = {{"master", config.master_seed}};
  doc["split"] = {{"train_fraction", config.train_fraction}};
  return doc;
}

std::string config_hash(const ExperimentConfig &config) {
  const std::string text = config_to_json(config).dump();
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, hash);
  return buf;
}

}  // namespace beamsense
