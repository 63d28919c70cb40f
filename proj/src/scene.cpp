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

#include "beamsense/scene.hpp"

#include <algorithm>
#include <cmath>

#include "beamsense/rng.hpp"

namespace beamsense {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

void CameraModel::validate() const {
  if (!(focal_px > 0.0)) throw ConfigError("focal_px must be > 0");
  if (image_width <= 0 || image_height <= 0)
    throw ConfigError("image dimensions must be positive");
}

void DetectorModel::validate() const {
  if (miss_prob < 0.0 || miss_prob > 1.0)
    throw ConfigError("miss_prob must be in [0, 1]");
  if (false_positive_rate < 0.0)
    throw ConfigError("false_positive_rate must be >= 0");
  if (center_jitter_std < 0.0)
    throw ConfigError("center_jitter_std must be >= 0");
}

void GpsModel::validate() const {
  if (noise_std_m < 0.0) throw ConfigError("gps noise_std_m must be >= 0");
}

std::optional<Eigen::Vector2d> project_to_image(const Eigen::Vector3d &world,
                                                const CameraModel &camera) {
  camera.validate();
  const Eigen::Vector3d d = world - camera.position;
  const Eigen::Vector3d forward{std::cos(camera.yaw_rad), std::sin(camera.yaw_rad), 0.0};
  const Eigen::Vector3d right{std::sin(camera.yaw_rad), -std::cos(camera.yaw_rad), 0.0};

  const double depth = d.dot(forward);
  if (depth <= 0.0) return std::nullopt;

  const double px = camera.focal_px * d.dot(right) / depth +
                    0.5 * static_cast<double>(camera.image_width);
  const double py = camera.focal_px * (-d.z()) / depth +
                    0.5 * static_cast<double>(camera.image_height);
  return Eigen::Vector2d{px / static_cast<double>(camera.image_width),
                         py / static_cast<double>(camera.image_height)};
}

double azimuth_of(const Eigen::Vector3d &world, const Eigen::Vector3d &bs_position,
                  double bs_yaw_rad) {
  const Eigen::Vector3d d = world - bs_position;
  const double along = d.x() * std::cos(bs_yaw_rad) + d.y() * std::sin(bs_yaw_rad);
  const double lateral = d.x() * std::sin(bs_yaw_rad) - d.y() * std::cos(bs_yaw_rad);
  if (std::hypot(along, lateral) < 1e-12)
    throw CoincidentPoint("point coincides with the base-station axis");
  return std::atan2(lateral, along);
}

std::vector<ChannelPath> synth_paths(const Eigen::Vector3d &tx_position,
                                     const Eigen::Vector3d &bs_position,
                                     double bs_yaw_rad, double wavelength_m) {
  if (!(wavelength_m > 0.0)) throw ConfigError("wavelength_m must be > 0");
  const Eigen::Vector3d d = tx_position - bs_position;
  const double distance = d.norm();
  if (distance < 1e-12)
    throw CoincidentPoint("transmitter coincides with the base station");

  const double horizontal = std::hypot(d.x(), d.y());
  ChannelPath path;
  path.azimuth_rad = azimuth_of(tx_position, bs_position, bs_yaw_rad);
  path.elevation_rad = std::atan2(d.z(), horizontal);
  path.delay_s = distance / kSpeedOfLight;
  const double phase =
      -2.0 * std::numbers::pi * std::fmod(distance / wavelength_m, 1.0);
  path.gain = std::polar(1.0 / distance, phase);
  return {path};
}

DetectionResult detect(const std::vector<FrameObject> &frame_objects,
                       const DetectorModel &detector, std::uint64_t rng_seed) {
  detector.validate();
  for (const auto &obj : frame_objects)
    if (obj.cx < 0.0 || obj.cx > 1.0 || obj.cy < 0.0 || obj.cy > 1.0)
      throw ConfigError("frame object centers must lie in [0, 1]");

  Rng rng(rng_seed);
  std::vector<BoundingBox> kept;
  std::optional<int> tx_row;
  bool tx_present = false;

  for (const auto &obj : frame_objects) {
    tx_present = tx_present || obj.is_transmitter;
    if (rng.uniform01() < detector.miss_prob) continue;
    BoundingBox box;
    box.cx = clamp01(obj.cx + rng.normal(0.0, detector.center_jitter_std));
    box.cy = clamp01(obj.cy + rng.normal(0.0, detector.center_jitter_std));
    box.source_id = obj.id;
    if (obj.is_transmitter) tx_row = static_cast<int>(kept.size());
    kept.push_back(box);
  }

  const int false_positives = rng.poisson(detector.false_positive_rate);
  for (int i = 0; i < false_positives; ++i) {
    BoundingBox box;
    box.cx = rng.uniform01();
    box.cy = rng.uniform01();
    box.source_id = -1;
    kept.push_back(box);
  }

  DetectionResult result;
  result.boxes.rows.resize(static_cast<Eigen::Index>(kept.size()), 2);
  result.source_ids.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    result.boxes.rows(static_cast<Eigen::Index>(i), 0) = kept[i].cx;
    result.boxes.rows(static_cast<Eigen::Index>(i), 1) = kept[i].cy;
    result.source_ids.push_back(kept[i].source_id);
  }
  result.tx_row = tx_row;
  result.tx_was_present = tx_present;
  return result;
}

}  // namespace beamsense
