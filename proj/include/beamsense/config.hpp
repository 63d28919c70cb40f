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
//
// Experiment configuration: one JSON file with scene, wireless, train,
// eval, split, and seed blocks. Every field has a default; a config file
// overrides only what it names, and parse errors carry the field path.

#ifndef BEAMSENSE_CONFIG_HPP
#define BEAMSENSE_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "beamsense/beamnet.hpp"
#include "beamsense/dataset.hpp"
#include "beamsense/scene_gen.hpp"

namespace beamsense {

struct EvalConfig {
  std::vector<int> topk_list{1, 2, 3, 5};
  std::vector<double> curve_fractions{0.1, 0.2, 0.3, 0.5, 0.7, 1.0};

  void validate() const;
};

struct ExperimentConfig {
  SceneConfig scene{};
  ArrayConfig array{};
  OfdmConfig ofdm{64, 8, 1e-7, 20.0, 1.0}; // street-scale delay window
  int num_beams = 32;
  TrainConfig train{};
  EvalConfig eval{};
  double train_fraction = 0.70;
  std::uint64_t master_seed = 7;

  void validate() const;
  GenConfig gen_config() const;
  SplitSpec split_spec() const;
  TrainConfig train_config() const; // with the derived training seed
};

// Built-in defaults; equivalent to parsing "{}".
ExperimentConfig default_config();

// Parse a JSON document (or file). Unknown keys and ill-typed values raise
// ConfigError with a "block.field" path.
ExperimentConfig parse_config(const nlohmann::json &doc);
ExperimentConfig load_config(const std::filesystem::path &path);

// Full resolved echo of a config; parse_config(config_to_json(c)) == c.
nlohmann::json config_to_json(const ExperimentConfig &config);

// FNV-1a hash of the resolved config text, for manifests.
std::string config_hash(const ExperimentConfig &config);

}  // namespace beamsense

#endif  // BEAMSENSE_CONFIG_HPP
