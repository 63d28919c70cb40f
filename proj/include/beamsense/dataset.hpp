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
// Canonical sample schema, JSON-lines persistence, seeded train/validation
// splitting, and a column-mapped CSV ingestion adapter for external
// tabular exports.

#ifndef BEAMSENSE_DATASET_HPP
#define BEAMSENSE_DATASET_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "beamsense/array_channel.hpp"
#include "beamsense/scene.hpp"

namespace beamsense {

// One multimodal sample: detector boxes, GPS position (local east/north
// meters), the 32-beam received-power vector, and the optimal-beam label
// computed from noiseless power.
struct SceneSample {
  std::int64_t sample_id = 0;
  std::string scenario_tag;
  Eigen::Vector2d gps{0.0, 0.0};
  RelevantObjectMatrix boxes;
  std::optional<int> true_tx_row;
  PowerVector power32;
  int optimal_beam = 0;

  void validate() const;
};

struct SplitSpec {
  double train_fraction = 0.70;
  std::uint64_t shuffle_seed = 0;
};

// Writes one JSON object per line with fields
//   sample_id, scenario, gps, boxes, true_tx_row, power32, beam
// Reals round-trip exactly (shortest decimal form).
void save(const std::vector<SceneSample> &samples,
          const std::filesystem::path &path);

// Inverse of save. Schema violations raise SchemaError naming the line.
std::vector<SceneSample> load(const std::filesystem::path &path);

// Seeded shuffle, then the first ceil(train_fraction * U) samples become
// the training set. The two halves are disjoint and exhaustive.
std::pair<std::vector<SceneSample>, std::vector<SceneSample>> split(
    const std::vector<SceneSample> &samples, const SplitSpec &spec);

// Column mapping for CSV ingestion. Power columns may number 64 (an
// oversampled sweep, downsampled on ingest) or 32 (stored unchanged).
// When gps_is_latlon is set, coordinates are converted to local
// east/north meters on a tangent plane anchored at the first record.
struct ColumnMap {
  std::vector<std::string> gps_columns;   // exactly 2
  std::vector<std::string> power_columns; // 32 or 64
  std::vector<std::string> box_columns;   // optional, pairs of (cx, cy)
  bool gps_is_latlon = false;
};

// Reads a column-map config block:
//   {"gps_columns": [..2 names..], "power_columns": [..32 or 64..],
//    "box_columns": [...], "gps_is_latlon": bool}
ColumnMap column_map_from_json(const std::string &json_text);

std::vector<SceneSample> ingest_csv(const std::filesystem::path &path,
                                    const ColumnMap &columns);

}  // namespace beamsense

#endif  // BEAMSENSE_DATASET_HPP
