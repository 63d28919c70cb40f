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

#include "beamsense/scene_gen.hpp"

#include <cmath>
#include <numbers>

#include "beamsense/rng.hpp"

namespace beamsense {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSpeedOfLight = 299792458.0;

// Sub-stream tags for per-sample seed derivation.
enum : std::uint64_t {
  kTagPlacement = 0x706c6163,
  kTagDetect = 0x64657463,
  kTagGps = 0x677073,
  kTagPower = 0x706f7772,
};

struct PlacedVehicle {
  Vehicle vehicle;
  Eigen::Vector3d position;
  Eigen::Vector2d center; // normalized image coordinates
};

double deg2rad(double d) { return d * kPi / 180.0; }

}  // namespace

void SceneConfig::validate() const {
  if (!(street_distance_m > 0.0)) throw ConfigError("street_distance_m must be > 0");
  if (num_lanes < 1) throw ConfigError("num_lanes must be >= 1");
  if (!(lane_width_m >= 0.0)) throw ConfigError("lane_width_m must be >= 0");
  if (!(vehicle_speed_mps > 0.0)) throw ConfigError("vehicle_speed_mps must be > 0");
  if (image_width <= 0 || image_height <= 0)
    throw ConfigError("image dimensions must be positive");
  for (double fov : {camera_fov_single_deg, camera_fov_multi_deg})
    if (!(fov > 0.0) || fov >= 180.0)
      throw ConfigError("camera fov must be in (0, 180) degrees");
  if (fov_margin_deg < 0.0) throw ConfigError("fov_margin_deg must be >= 0");
  const double min_fov = std::min(camera_fov_single_deg, camera_fov_multi_deg);
  if (fov_margin_deg >= 0.5 * min_fov)
    throw ConfigError("fov_margin_deg leaves an empty field of view");
  if (max_distractors < 1) throw ConfigError("max_distractors must be >= 1");
  if (min_vehicle_sep_m < 0.0) throw ConfigError("min_vehicle_sep_m must be >= 0");
  if (min_center_sep_norm < 0.0 || min_center_sep_norm >= 1.0)
    throw ConfigError("min_center_sep_norm must be in [0, 1)");
  if (power_noise_std < 0.0) throw ConfigError("power_noise_std must be >= 0");
  if (!(wavelength_m > 0.0)) throw ConfigError("wavelength_m must be > 0");
  detector.validate();
  gps.validate();
}

CameraModel SceneConfig::camera_for(SceneMode mode) const {
  const double fov_deg = mode == SceneMode::SingleCandidate
                             ? camera_fov_single_deg
                             : camera_fov_multi_deg;
  CameraModel camera;
  camera.position = bs_position();
  camera.yaw_rad = deg2rad(bs_yaw_deg);
  camera.image_width = image_width;
  camera.image_height = image_height;
  camera.focal_px =
      static_cast<double>(image_width) / (2.0 * std::tan(0.5 * deg2rad(fov_deg)));
  return camera;
}

std::pair<std::vector<SceneSample>, std::vector<SampleDebug>>
generate_dataset_debug(const GenConfig &config, SceneMode mode, int n_samples,
                       std::uint64_t master_seed) {
  if (n_samples < 1) throw ConfigError("n_samples must be >= 1");
  config.scene.validate();
  config.array.validate();
  config.ofdm.validate();
  if (config.num_beams != 32)
    throw ConfigError("the sample schema stores 32-beam power; num_beams must be 32");

  const SceneConfig &scene = config.scene;
  const CameraModel camera = scene.camera_for(mode);
  const Eigen::Vector3d bs = scene.bs_position();
  const double yaw = deg2rad(scene.bs_yaw_deg);
  const double half_fov_eff =
      std::atan(0.5 * static_cast<double>(scene.image_width) / camera.focal_px) -
      deg2rad(scene.fov_margin_deg);
  if (!(half_fov_eff > 0.0)) throw ConfigError("effective field of view is empty");

  // The whole street must stay inside the cyclic-prefix delay window.
  {
    const double far_lane =
        scene.street_distance_m +
        0.5 * (scene.num_lanes - 1) * scene.lane_width_m;
    const double max_y = far_lane * std::tan(half_fov_eff);
    const double dz = scene.bs_height_m - scene.tx_height_m;
    const double max_dist = std::sqrt(far_lane * far_lane + max_y * max_y + dz * dz);
    const double window = config.ofdm.cyclic_prefix * config.ofdm.sample_time_s;
    if (max_dist / kSpeedOfLight >= window)
      throw ConfigError("street geometry exceeds the cyclic-prefix delay window; "
                        "raise sample_time_s or move the street closer");
  }

  const BeamCodebook sweep_codebook =
      generate_codebook(config.array, 2 * config.num_beams);

  std::vector<SceneSample> samples;
  std::vector<SampleDebug> debug;
  samples.reserve(static_cast<std::size_t>(n_samples));
  debug.reserve(static_cast<std::size_t>(n_samples));

  for (int u = 0; u < n_samples; ++u) {
    Rng place_rng(derive_seed(master_seed, kTagPlacement, static_cast<std::uint64_t>(u)));

    const auto place_one = [&](int id, bool is_tx,
                               const std::vector<PlacedVehicle> &placed)
        -> std::optional<PlacedVehicle> {
      for (int attempt = 0; attempt < 200; ++attempt) {
        const int lane = place_rng.uniform_int(scene.num_lanes);
        const double lane_x =
            scene.street_distance_m +
            (lane - 0.5 * (scene.num_lanes - 1)) * scene.lane_width_m;
        const double y_limit = lane_x * std::tan(half_fov_eff);
        const double duration = 2.0 * y_limit / scene.vehicle_speed_mps;
        const double phase = place_rng.uniform01() * duration;

        PlacedVehicle pv;
        pv.vehicle.id = id;
        pv.vehicle.is_transmitter = is_tx;
        pv.vehicle.trajectory.start = {lane_x, -y_limit, scene.tx_height_m};
        pv.vehicle.trajectory.velocity = {0.0, scene.vehicle_speed_mps, 0.0};
        pv.position = pv.vehicle.trajectory.at(phase);

        const auto projected = project_to_image(pv.position, camera);
        if (!projected) continue;
        pv.center = *projected;

        bool ok = true;
        for (const auto &other : placed) {
          if (std::abs(other.position.y() - pv.position.y()) <
              scene.min_vehicle_sep_m) {
            ok = false;
            break;
          }
          if (scene.min_center_sep_norm > 0.0 &&
              (other.center - pv.center).norm() < scene.min_center_sep_norm) {
            ok = false;
            break;
          }
        }
        if (ok) return pv;
      }
      return std::nullopt;
    };

    std::vector<PlacedVehicle> placed;
    const auto tx = place_one(0, true, placed);
    if (!tx) throw ConfigError("could not place a transmitter inside the FoV");
    placed.push_back(*tx);

    if (mode == SceneMode::MultiCandidate) {
      const int n_distractors = 1 + place_rng.uniform_int(scene.max_distractors);
      for (int d = 0; d < n_distractors; ++d) {
        // A crowded street may reject a distractor; the frame just gets
        // one fewer candidate.
        if (auto pv = place_one(d + 1, false, placed)) placed.push_back(*pv);
      }
    }

    // Detector input order carries no placement information.
    std::vector<FrameObject> frame_objects;
    const auto order = place_rng.shuffled_indices(placed.size());
    for (const std::size_t idx : order) {
      const auto &pv = placed[idx];
      frame_objects.push_back(
          {pv.vehicle.id, pv.center.x(), pv.center.y(), pv.vehicle.is_transmitter});
    }

    const DetectionResult detection =
        detect(frame_objects, scene.detector,
               derive_seed(master_seed, kTagDetect, static_cast<std::uint64_t>(u)));

    Rng gps_rng(derive_seed(master_seed, kTagGps, static_cast<std::uint64_t>(u)));
    const Eigen::Vector3d tx_pos = tx->position;
    const Eigen::Vector2d gps_fix{
        tx_pos.x() + gps_rng.normal(0.0, scene.gps.noise_std_m),
        tx_pos.y() + gps_rng.normal(0.0, scene.gps.noise_std_m)};

    const auto paths = synth_paths(tx_pos, bs, yaw, scene.wavelength_m);
    const ChannelMatrix channel = build_channel(paths, config.array, config.ofdm);
    const PowerVector p64_clean = received_power(channel, sweep_codebook, 0.0, 0);
    const PowerVector p32_clean = downsample_power(p64_clean);
    PowerVector p32 = p32_clean;
    if (scene.power_noise_std > 0.0) {
      const PowerVector p64_noisy = received_power(
          channel, sweep_codebook, scene.power_noise_std,
          derive_seed(master_seed, kTagPower, static_cast<std::uint64_t>(u)));
      p32 = downsample_power(p64_noisy);
    }

    SceneSample sample;
    sample.sample_id = u;
    sample.scenario_tag =
        scene.tag + (mode == SceneMode::SingleCandidate ? "-single" : "-multi");
    sample.gps = gps_fix;
    sample.boxes = detection.boxes;
    sample.true_tx_row = detection.tx_row;
    sample.power32 = p32;
    sample.optimal_beam = optimal_beam_power(p32_clean);
    sample.validate();
    samples.push_back(std::move(sample));

    SampleDebug dbg;
    dbg.tx_position = tx_pos;
    dbg.tx_azimuth_rad = paths.front().azimuth_rad;
    dbg.true_objects = frame_objects;
    dbg.power32_noiseless = p32_clean;
    debug.push_back(std::move(dbg));
  }
  return {std::move(samples), std::move(debug)};
}

std::vector<SceneSample> generate_dataset(const GenConfig &config, SceneMode mode,
                                          int n_samples, std::uint64_t master_seed) {
  return generate_dataset_debug(config, mode, n_samples, master_seed).first;
}

}  // namespace beamsense
