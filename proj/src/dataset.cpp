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

#include "beamsense/dataset.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "beamsense/rng.hpp"

namespace beamsense {

using nlohmann::json;

namespace {

constexpr double kEarthRadiusM = 6378137.0;
constexpr int kPowerSize = 32;

json sample_to_json(const SceneSample &s) {
  json j;
  j["sample_id"] = s.sample_id;
  j["scenario"] = s.scenario_tag;
  j["gps"] = {s.gps.x(), s.gps.y()};
  json boxes = json::array();
  for (int i = 0; i < s.boxes.count(); ++i)
    boxes.push_back({s.boxes.rows(i, 0), s.boxes.rows(i, 1)});
  j["boxes"] = std::move(boxes);
  if (s.true_tx_row.has_value())
    j["true_tx_row"] = *s.true_tx_row;
  else
    j["true_tx_row"] = nullptr;
  json power;
  power["noisy"] = s.power32.noisy;
  power["values"] = std::vector<double>(
      s.power32.values.data(), s.power32.values.data() + s.power32.values.size());
  j["power32"] = std::move(power);
  j["beam"] = s.optimal_beam;
  return j;
}

SceneSample sample_from_json(const json &j, std::size_t line_no) {
  const auto fail = [line_no](const std::string &what) -> void {
    throw SchemaError("line " + std::to_string(line_no) + ": " + what);
  };

  static const char *kFields[] = {"sample_id", "scenario",  "gps",  "boxes",
                                  "true_tx_row", "power32", "beam"};
  for (const char *field : kFields)
    if (!j.contains(field)) fail(std::string("missing field '") + field + "'");

  SceneSample s;
  try {
    s.sample_id = j.at("sample_id").get<std::int64_t>();
    s.scenario_tag = j.at("scenario").get<std::string>();

    const auto &gps = j.at("gps");
    if (!gps.is_array() || gps.size() != 2) fail("gps must have 2 values");
    s.gps = {gps[0].get<double>(), gps[1].get<double>()};

    const auto &boxes = j.at("boxes");
    if (!boxes.is_array()) fail("boxes must be an array");
    s.boxes.rows.resize(static_cast<Eigen::Index>(boxes.size()), 2);
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      if (!boxes[i].is_array() || boxes[i].size() != 2)
        fail("box " + std::to_string(i) + " must have 2 coordinates");
      s.boxes.rows(static_cast<Eigen::Index>(i), 0) = boxes[i][0].get<double>();
      s.boxes.rows(static_cast<Eigen::Index>(i), 1) = boxes[i][1].get<double>();
    }

    const auto &tx = j.at("true_tx_row");
    if (!tx.is_null()) s.true_tx_row = tx.get<int>();

    const auto &power = j.at("power32");
    if (!power.contains("values") || !power.contains("noisy"))
      fail("power32 must carry 'values' and 'noisy'");
    const auto &values = power.at("values");
    if (!values.is_array() || values.size() != kPowerSize)
      fail("power32 must have " + std::to_string(kPowerSize) + " values, got " +
           std::to_string(values.size()));
    s.power32.values.resize(kPowerSize);
    for (int q = 0; q < kPowerSize; ++q) s.power32.values(q) = values[q].get<double>();
    s.power32.noisy = power.at("noisy").get<bool>();

    s.optimal_beam = j.at("beam").get<int>();
  } catch (const json::exception &e) {
    fail(e.what());
  }

  try {
    s.validate();
  } catch (const std::exception &e) {
    fail(e.what());
  }
  return s;
}

// strtod-based cell parser so malformed numbers are reported per row.
double parse_cell(const std::string &cell, std::size_t row) {
  char *end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str() || end != cell.c_str() + cell.size())
    throw ParseError("row " + std::to_string(row) + ": bad number '" + cell + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string &line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back("");
  return cells;
}

}  // namespace

void SceneSample::validate() const {
  if (power32.values.size() != kPowerSize)
    throw SchemaError("power32 must have " + std::to_string(kPowerSize) + " values");
  if (optimal_beam < 0 || optimal_beam >= kPowerSize)
    throw SchemaError("beam index out of range");
  if (true_tx_row.has_value() &&
      (*true_tx_row < 0 || *true_tx_row >= boxes.count()))
    throw SchemaError("true_tx_row out of range");
  for (int i = 0; i < boxes.count(); ++i)
    if (boxes.rows(i, 0) < 0.0 || boxes.rows(i, 0) > 1.0 ||
        boxes.rows(i, 1) < 0.0 || boxes.rows(i, 1) > 1.0)
      throw SchemaError("box coordinates must lie in [0, 1]");
}

void save(const std::vector<SceneSample> &samples,
          const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  for (const auto &s : samples) out << sample_to_json(s).dump() << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<SceneSample> load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::vector<SceneSample> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception &e) {
      throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
    }
    samples.push_back(sample_from_json(j, line_no));
  }
  return samples;
}

std::pair<std::vector<SceneSample>, std::vector<SceneSample>> split(
    const std::vector<SceneSample> &samples, const SplitSpec &spec) {
  if (!(spec.train_fraction > 0.0) || !(spec.train_fraction < 1.0))
    throw ConfigError("train_fraction must be in (0, 1)");
  if (samples.size() < 2)
    throw TooFewSamples("need at least 2 samples to split, got " +
                        std::to_string(samples.size()));

  Rng rng(spec.shuffle_seed);
  const auto order = rng.shuffled_indices(samples.size());
  const auto n_train = static_cast<std::size_t>(
      std::ceil(spec.train_fraction * static_cast<double>(samples.size())));

  std::pair<std::vector<SceneSample>, std::vector<SceneSample>> out;
  out.first.reserve(n_train);
  out.second.reserve(samples.size() - n_train);
  for (std::size_t i = 0; i < order.size(); ++i)
    (i < n_train ? out.first : out.second).push_back(samples[order[i]]);
  return out;
}

ColumnMap column_map_from_json(const std::string &json_text) {
  ColumnMap columns;
  try {
    const json doc = json::parse(json_text);
    if (!doc.is_object()) throw ConfigError("column map: expected an object");
    for (const auto &[key, value] : doc.items()) {
      if (key == "gps_columns")
        columns.gps_columns = value.get<std::vector<std::string>>();
      else if (key == "power_columns")
        columns.power_columns = value.get<std::vector<std::string>>();
      else if (key == "box_columns")
        columns.box_columns = value.get<std::vector<std::string>>();
      else if (key == "gps_is_latlon")
        columns.gps_is_latlon = value.get<bool>();
      else
        throw ConfigError("column map: unknown field '" + key + "'");
    }
  } catch (const json::exception &e) {
    throw ConfigError(std::string("column map: ") + e.what());
  }
  return columns;
}

std::vector<SceneSample> ingest_csv(const std::filesystem::path &path,
                                    const ColumnMap &columns) {
  if (columns.gps_columns.size() != 2)
    throw ConfigError("column map needs exactly 2 gps columns");
  if (columns.power_columns.size() != 32 && columns.power_columns.size() != 64)
    throw ConfigError("column map needs 32 or 64 power columns");
  if (columns.box_columns.size() % 2 != 0)
    throw ConfigError("box columns must come in (cx, cy) pairs");

  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path.string());

  std::string header_line;
  if (!std::getline(in, header_line))
    throw ParseError("row 0: missing header row");
  const auto header = split_csv_line(header_line);

  const auto column_index = [&header, &path](const std::string &name) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw ColumnMissing("column '" + name + "' not found in " + path.string());
  };

  std::vector<std::size_t> gps_idx, power_idx, box_idx;
  for (const auto &name : columns.gps_columns) gps_idx.push_back(column_index(name));
  for (const auto &name : columns.power_columns)
    power_idx.push_back(column_index(name));
  for (const auto &name : columns.box_columns) box_idx.push_back(column_index(name));

  std::vector<SceneSample> samples;
  std::optional<Eigen::Vector2d> anchor_latlon;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    const auto cell_at = [&cells, row](std::size_t idx) -> const std::string & {
      if (idx >= cells.size())
        throw ParseError("row " + std::to_string(row) + ": too few cells");
      return cells[idx];
    };

    SceneSample s;
    s.sample_id = static_cast<std::int64_t>(row) - 1;
    s.scenario_tag = path.stem().string();

    Eigen::Vector2d g{parse_cell(cell_at(gps_idx[0]), row),
                      parse_cell(cell_at(gps_idx[1]), row)};
    if (columns.gps_is_latlon) {
      if (!anchor_latlon) anchor_latlon = g;
      const double lat0 = anchor_latlon->x() * std::numbers::pi / 180.0;
      const double east = kEarthRadiusM * std::cos(lat0) *
                          (g.y() - anchor_latlon->y()) * std::numbers::pi / 180.0;
      const double north =
          kEarthRadiusM * (g.x() - anchor_latlon->x()) * std::numbers::pi / 180.0;
      g = {east, north};
    }
    s.gps = g;

    PowerVector power;
    power.values.resize(static_cast<Eigen::Index>(power_idx.size()));
    for (std::size_t i = 0; i < power_idx.size(); ++i)
      power.values(static_cast<Eigen::Index>(i)) =
          parse_cell(cell_at(power_idx[i]), row);
    power.noisy = false;
    s.power32 = power_idx.size() == 64 ? downsample_power(power) : power;
    s.optimal_beam = optimal_beam_power(s.power32);

    std::vector<Eigen::Vector2d> boxes;
    for (std::size_t i = 0; i + 1 < box_idx.size(); i += 2) {
      const std::string &bx = cell_at(box_idx[i]);
      const std::string &by = cell_at(box_idx[i + 1]);
      if (bx.empty() || by.empty()) continue;
      boxes.emplace_back(parse_cell(bx, row), parse_cell(by, row));
    }
    s.boxes.rows.resize(static_cast<Eigen::Index>(boxes.size()), 2);
    for (std::size_t i = 0; i < boxes.size(); ++i)
      s.boxes.rows(static_cast<Eigen::Index>(i), Eigen::all) =
          boxes[i].transpose();

    // Transmitter identity is unknown for external data.
    s.true_tx_row = std::nullopt;
    samples.push_back(std::move(s));
  }
  return samples;
}

}  // namespace beamsense
