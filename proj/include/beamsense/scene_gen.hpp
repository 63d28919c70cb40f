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
// Scene-level dataset construction: vehicles on a street crossing the
// base-station field of view, detector and GPS noise, and optimal-beam
// labels from a 64-beam sweep downsampled to the effective 32-beam
// codebook.

#ifndef BEAMSENSE_SCENE_GEN_HPP
#define BEAMSENSE_SCENE_GEN_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "beamsense/dataset.hpp"
#include "beamsense/scene.hpp"

namespace beamsense {

enum class SceneMode { SingleCandidate, MultiCandidate };

// Street-scene geometry and noise models. The camera field of view is
// narrower than the codebook span, so every vehicle the camera sees maps
// to a beam, while one beam covers a usefully wide slice of the image.
// Single- and multi-candidate scenarios use different lenses, mirroring
// per-scenario camera setups.
struct SceneConfig {
  double street_distance_m = 180.0;
  double lane_width_m = 3.5;
  int num_lanes = 1;
  double vehicle_speed_mps = 10.0;
  double bs_height_m = 5.0;
  double tx_height_m = 1.5;
  double bs_yaw_deg = 0.0;
  int image_width = 1280;
  int image_height = 720;
  double camera_fov_single_deg = 16.0;
  double camera_fov_multi_deg = 28.0;
  double fov_margin_deg = 1.0;
  DetectorModel detector{};
  GpsModel gps{};
  double power_noise_std = 0.0;
  int max_distractors = 4;
  double min_vehicle_sep_m = 6.0;
  double min_center_sep_norm = 0.0;
  double wavelength_m = 0.005;
  std::string tag = "default";

  void validate() const;
  CameraModel camera_for(SceneMode mode) const;
  Eigen::Vector3d bs_position() const { return {0.0, 0.0, bs_height_m}; }
};

// Everything generation needs: the scene plus the wireless configuration.
// num_beams is the effective codebook size; the sweep measures 2x beams
// and keeps the even-indexed half.
struct GenConfig {
  SceneConfig scene{};
  ArrayConfig array{};
  OfdmConfig ofdm{};
  int num_beams = 32;
};

// Generation-time ground truth, exposed for tests and diagnostics only;
// the persisted schema carries none of it.
struct SampleDebug {
  Eigen::Vector3d tx_position{0.0, 0.0, 0.0};
  double tx_azimuth_rad = 0.0;
  std::vector<FrameObject> true_objects;
  PowerVector power32_noiseless;
};

std::pair<std::vector<SceneSample>, std::vector<SampleDebug>>
generate_dataset_debug(const GenConfig &config, SceneMode mode, int n_samples,
                       std::uint64_t master_seed);

// Deterministic given (config, mode, master_seed): every sample draws from
// its own derived seed, so regeneration is byte-identical.
std::vector<SceneSample> generate_dataset(const GenConfig &config, SceneMode mode,
                                          int n_samples,
                                          std::uint64_t master_seed);

}  // namespace beamsense

#endif  // BEAMSENSE_SCENE_GEN_HPP
