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
// Synthetic V2I world: a pinhole camera colocated with the array at the
// base station, vehicles on straight-line trajectories, a detector
// emulator producing noisy bounding boxes, and LOS channel-path synthesis.

#ifndef BEAMSENSE_SCENE_HPP
#define BEAMSENSE_SCENE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "beamsense/array_channel.hpp"

namespace beamsense {

// World frame: x east, y north, z up, meters. Yaw is measured from +x,
// counter-clockwise; azimuths are signed right-positive/left-negative.
struct CameraModel {
  Eigen::Vector3d position{0.0, 0.0, 5.0};
  double yaw_rad = 0.0;
  double focal_px = 4554.0;
  int image_width = 1280;
  int image_height = 720;

  void validate() const;
};

struct Trajectory {
  Eigen::Vector3d start{0.0, 0.0, 0.0};
  Eigen::Vector3d velocity{0.0, 0.0, 0.0}; // m/s

  Eigen::Vector3d at(double t) const { return start + t * velocity; }
};

struct Vehicle {
  int id = 0;
  Trajectory trajectory;
  double extent_width_m = 1.9;
  double extent_height_m = 1.5;
  bool is_transmitter = false;
};

// Emulates a fine-tuned object detector: per-object misses, center jitter
// in normalized image units, and Poisson-distributed false positives.
struct DetectorModel {
  double miss_prob = 0.05;
  double false_positive_rate = 0.2;
  double center_jitter_std = 0.01;

  void validate() const;
};

struct GpsModel {
  double noise_std_m = 2.0;

  void validate() const;
};

// Normalized box center plus where it came from (-1 = false positive).
struct BoundingBox {
  double cx = 0.0;
  double cy = 0.0;
  int source_id = -1;
};

// N x 2 matrix of normalized box centers; the detector's public output.
struct RelevantObjectMatrix {
  Eigen::MatrixX2d rows;

  int count() const { return static_cast<int>(rows.rows()); }
};

// One candidate object handed to the detector emulator.
struct FrameObject {
  int id = 0;
  double cx = 0.0;
  double cy = 0.0;
  bool is_transmitter = false;
};

struct DetectionResult {
  RelevantObjectMatrix boxes;
  std::vector<int> source_ids;   // per row; -1 for false positives
  std::optional<int> tx_row;     // row of the true transmitter, if detected
  bool tx_was_present = false;   // a transmitter existed among the inputs
};

// Pinhole projection to normalized image coordinates. Returns nullopt when
// the point is at or behind the camera plane.
std::optional<Eigen::Vector2d> project_to_image(const Eigen::Vector3d &world,
                                                const CameraModel &camera);

// Signed azimuth of a point relative to the base-station boresight, in
// (-pi, pi], negative to the left. Throws CoincidentPoint when the point
// sits on the base-station vertical axis.
double azimuth_of(const Eigen::Vector3d &world, const Eigen::Vector3d &bs_position,
                  double bs_yaw_rad);

// Single LOS path: |gain| = 1/distance, phase accumulated over the path
// length at the given wavelength, delay = distance / c.
std::vector<ChannelPath> synth_paths(const Eigen::Vector3d &tx_position,
                                     const Eigen::Vector3d &bs_position,
                                     double bs_yaw_rad, double wavelength_m);

// Runs the detector emulator over one frame. Kept objects appear first in
// input order, false positives are appended; all coordinates clamped to
// [0, 1].
DetectionResult detect(const std::vector<FrameObject> &frame_objects,
                       const DetectorModel &detector, std::uint64_t rng_seed);

}  // namespace beamsense

#endif  // BEAMSENSE_SCENE_HPP
