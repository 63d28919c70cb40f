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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "beamsense/config.hpp"
#include "beamsense/pipeline.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace beamsense;

namespace {

SceneMode mode_from_string(const std::string &mode) {
  if (mode == "single") return SceneMode::SingleCandidate;
  if (mode == "multi") return SceneMode::MultiCandidate;
  throw ConfigError("mode must be 'single' or 'multi'");
}

py::dict sample_to_dict(const SceneSample &s) {
  py::dict d;
  d["sample_id"] = s.sample_id;
  d["scenario"] = s.scenario_tag;
  d["gps"] = s.gps;
  d["boxes"] = Eigen::MatrixXd(s.boxes.rows);
  d["true_tx_row"] = s.true_tx_row ? py::cast(*s.true_tx_row) : py::none();
  d["power32"] = s.power32.values;
  d["power32_noisy"] = s.power32.noisy;
  d["beam"] = s.optimal_beam;
  return d;
}

std::vector<std::pair<Eigen::Vector2d, Eigen::Vector2d>> pairs_from_arrays(
    const Eigen::MatrixXd &gps, const Eigen::MatrixXd &centers) {
  if (gps.cols() != 2 || centers.cols() != 2 || gps.rows() != centers.rows())
    throw DimensionMismatch("expected matching N x 2 arrays");
  std::vector<std::pair<Eigen::Vector2d, Eigen::Vector2d>> pairs;
  pairs.reserve(static_cast<std::size_t>(gps.rows()));
  for (Eigen::Index i = 0; i < gps.rows(); ++i)
    pairs.emplace_back(gps.row(i).transpose(), centers.row(i).transpose());
  return pairs;
}

std::vector<LabeledPoint> points_from_arrays(const Eigen::MatrixXd &x,
                                             const std::vector<int> &labels) {
  if (x.cols() != 2 || static_cast<std::size_t>(x.rows()) != labels.size())
    throw DimensionMismatch("expected N x 2 inputs and N labels");
  std::vector<LabeledPoint> points;
  points.reserve(labels.size());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    points.push_back({x.row(i).transpose(), labels[static_cast<std::size_t>(i)]});
  return points;
}

}  // namespace

PYBIND11_MODULE(_beamsense, m) {
  m.doc() = "sensing-aided mmWave beam prediction: channel simulator, scene "
            "generator, transmitter identification, and beam classifier";

  py::register_exception<ConfigError>(m, "ConfigError");

  py::class_<ArrayConfig>(m, "ArrayConfig")
      .def(py::init([](int num_elements, double element_spacing, double fov_gamma_deg) {
             return ArrayConfig{num_elements, element_spacing, fov_gamma_deg};
           }),
           "num_elements"_a = 32, "element_spacing"_a = 0.5,
           "fov_gamma_deg"_a = 90.0)
      .def_readwrite("num_elements", &ArrayConfig::num_elements)
      .def_readwrite("element_spacing", &ArrayConfig::element_spacing)
      .def_readwrite("fov_gamma_deg", &ArrayConfig::fov_gamma_deg);

  py::class_<OfdmConfig>(m, "OfdmConfig")
      .def(py::init([](int num_subcarriers, int cyclic_prefix, double sample_time_s,
                       double snr_db) {
             return OfdmConfig{num_subcarriers, cyclic_prefix, sample_time_s,
                               snr_db, 1.0};
           }),
           "num_subcarriers"_a = 64, "cyclic_prefix"_a = 8,
           "sample_time_s"_a = 1e-9, "snr_db"_a = 20.0)
      .def_readwrite("num_subcarriers", &OfdmConfig::num_subcarriers)
      .def_readwrite("cyclic_prefix", &OfdmConfig::cyclic_prefix)
      .def_readwrite("sample_time_s", &OfdmConfig::sample_time_s)
      .def_readwrite("snr_db", &OfdmConfig::snr_db);

  py::class_<ChannelPath>(m, "ChannelPath")
      .def(py::init([](std::complex<double> gain, double delay_s, double azimuth_rad,
                       double elevation_rad) {
             return ChannelPath{gain, delay_s, azimuth_rad, elevation_rad};
           }),
           "gain"_a = std::complex<double>(1.0, 0.0), "delay_s"_a = 0.0,
           "azimuth_rad"_a = 0.0, "elevation_rad"_a = 0.0)
      .def_readwrite("gain", &ChannelPath::gain)
      .def_readwrite("delay_s", &ChannelPath::delay_s)
      .def_readwrite("azimuth_rad", &ChannelPath::azimuth_rad)
      .def_readwrite("elevation_rad", &ChannelPath::elevation_rad);

  py::class_<BeamCodebook>(m, "BeamCodebook")
      .def_readonly("beams", &BeamCodebook::beams)
      .def_readonly("steer_angles_deg", &BeamCodebook::steer_angles_deg)
      .def_property_readonly("num_beams", &BeamCodebook::num_beams);

  py::class_<ChannelMatrix>(m, "ChannelMatrix")
      .def_readonly("entries", &ChannelMatrix::entries);

  py::class_<PowerVector>(m, "PowerVector")
      .def_readonly("values", &PowerVector::values)
      .def_readonly("noisy", &PowerVector::noisy);

  m.def("steering_vector", &steering_vector, "array"_a, "theta_rad"_a,
        "phi_rad"_a = 0.0);
  m.def("generate_codebook", &generate_codebook, "array"_a, "num_beams"_a);
  m.def("build_channel", &build_channel, "paths"_a, "array"_a, "ofdm"_a);
  m.def("received_power", &received_power, "channel"_a, "codebook"_a,
        "noise_std"_a = 0.0, "rng_seed"_a = 0);
  m.def("optimal_beam_rate", &optimal_beam_rate, "channel"_a, "codebook"_a,
        "snr_linear"_a);
  m.def("optimal_beam_power", &optimal_beam_power, "power"_a);
  m.def("downsample_power", &downsample_power, "p64"_a);

  m.def(
      "poly_expand",
      [](const Eigen::Vector2d &g, bool include_bias) {
        return poly_expand(g, include_bias);
      },
      "g_normalized"_a, "include_bias"_a = true);

  py::class_<RegressionModel>(m, "RegressionModel")
      .def_readonly("weights", &RegressionModel::weights)
      .def_readonly("train_residual", &RegressionModel::train_residual)
      .def_property_readonly("feature_count", &RegressionModel::feature_count);

  m.def(
      "fit_regression",
      [](const Eigen::MatrixXd &gps, const Eigen::MatrixXd &centers,
         bool include_bias) {
        return fit_regression(pairs_from_arrays(gps, centers), include_bias);
      },
      "gps"_a, "centers"_a, "include_bias"_a = true);
  m.def("predict_center", &predict_center, "model"_a, "g"_a);
  m.def(
      "select_tx",
      [](const Eigen::MatrixXd &boxes, const Eigen::Vector2d &predicted) {
        RelevantObjectMatrix matrix;
        matrix.rows = boxes;
        const Selection sel = select_tx(matrix, predicted);
        return py::make_tuple(sel.row ? py::cast(*sel.row) : py::none(), sel.center);
      },
      "boxes"_a, "predicted_center"_a);

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("batch_size", &TrainConfig::batch_size)
      .def_readwrite("learning_rate", &TrainConfig::learning_rate)
      .def_readwrite("lr_decay_epochs", &TrainConfig::lr_decay_epochs)
      .def_readwrite("lr_decay_factor", &TrainConfig::lr_decay_factor)
      .def_readwrite("dropout", &TrainConfig::dropout)
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("hidden", &TrainConfig::hidden)
      .def_readwrite("outputs", &TrainConfig::outputs)
      .def_readwrite("seed", &TrainConfig::seed);

  py::class_<MlpParams>(m, "MlpParams")
      .def_static("init", &MlpParams::init, "hidden"_a, "outputs"_a, "seed"_a)
      .def_property_readonly("hidden", &MlpParams::hidden)
      .def_property_readonly("outputs", &MlpParams::outputs);

  m.def(
      "train_mlp",
      [](const Eigen::MatrixXd &train_x, const std::vector<int> &train_labels,
         const Eigen::MatrixXd &val_x, const std::vector<int> &val_labels,
         const TrainConfig &config) {
        const TrainResult result = train(points_from_arrays(train_x, train_labels),
                                         points_from_arrays(val_x, val_labels),
                                         config);
        py::list history;
        for (const auto &row : result.history)
          history.append(py::make_tuple(row.epoch, row.learning_rate,
                                        row.train_loss, row.val_top1));
        return py::make_tuple(result.params, history, result.best_epoch);
      },
      "train_x"_a, "train_labels"_a, "val_x"_a, "val_labels"_a, "config"_a);

  m.def("predict_topk", &predict_topk, "params"_a, "x"_a, "k"_a);
  m.def(
      "predict_topk_batch",
      [](const MlpParams &params, const Eigen::MatrixXd &x, int k) {
        if (x.cols() != 2) throw DimensionMismatch("expected an N x 2 array");
        Eigen::MatrixXi out(x.rows(), k);
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
          const auto ranked = predict_topk(params, x.row(i).transpose(), k);
          for (int j = 0; j < k; ++j) out(i, j) = ranked[static_cast<std::size_t>(j)];
        }
        return out;
      },
      "params"_a, "x"_a, "k"_a);

  m.def(
      "topk_accuracy",
      [](const Eigen::MatrixXi &ranked, const std::vector<int> &truths, int k) {
        std::vector<std::vector<int>> lists;
        lists.reserve(static_cast<std::size_t>(ranked.rows()));
        for (Eigen::Index i = 0; i < ranked.rows(); ++i) {
          std::vector<int> row;
          for (Eigen::Index j = 0; j < ranked.cols(); ++j) row.push_back(ranked(i, j));
          lists.push_back(std::move(row));
        }
        return topk_accuracy(lists, truths, k);
      },
      "ranked"_a, "truths"_a, "k"_a);
  m.def("r2_power", &r2_power, "top1_power"_a, "gt_power"_a);

  m.def("default_config_json",
        []() { return config_to_json(default_config()).dump(2); });
  m.def(
      "generate_scene_dataset",
      [](const std::string &config_json, const std::string &mode, int n,
         std::uint64_t seed) {
        const ExperimentConfig config =
            parse_config(nlohmann::json::parse(config_json));
        const auto samples =
            generate_dataset(config.gen_config(), mode_from_string(mode), n, seed);
        py::list out;
        for (const auto &s : samples) out.append(sample_to_dict(s));
        return out;
      },
      "config_json"_a, "mode"_a, "n"_a, "seed"_a);

#ifdef VERSION_INFO
#define BEAMSENSE_STR(x) #x
#define BEAMSENSE_XSTR(x) BEAMSENSE_STR(x)
  m.attr("__version__") = BEAMSENSE_XSTR(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
