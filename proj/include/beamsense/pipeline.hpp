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
// Glue between datasets and the classifier. The single-candidate pipeline
// feeds the labeled box center straight to the network. The multi-candidate
// pipeline trains on the ground-truth transmitter box and, at inference,
// selects a box via the regression-guided nearest-neighbor rule.

#ifndef BEAMSENSE_PIPELINE_HPP
#define BEAMSENSE_PIPELINE_HPP

#include <optional>
#include <vector>

#include "beamsense/beamnet.hpp"
#include "beamsense/dataset.hpp"
#include "beamsense/eval.hpp"
#include "beamsense/txid.hpp"

namespace beamsense {

enum class Pipeline { Single, Multi };

// One evaluation-ready sample: the network input, its label, the selection
// outcome (multi), and the stored power vector for wireless metrics.
struct EvalPoint {
  Eigen::Vector2d x{0.0, 0.0};
  int label = 0;
  std::optional<int> selected_row;
  TxProvenance provenance;
  bool txid_correct = false;
  Eigen::VectorXd power;
  bool power_noisy = false;
};

// Training inputs. Single: the transmitter box (or the first box when
// provenance is missing). Multi: the ground-truth transmitter box;
// frames whose transmitter was not detected are skipped.
std::vector<LabeledPoint> training_points(const std::vector<SceneSample> &samples,
                                          Pipeline pipeline);

// Inference-path inputs. Multi mode runs predict_center + select_tx and
// needs the fitted regression.
std::vector<EvalPoint> evaluation_points(const std::vector<SceneSample> &samples,
                                         Pipeline pipeline,
                                         const RegressionModel *regression);

// GPS -> ground-truth-box pairs for fitting the regression.
std::vector<std::pair<Eigen::Vector2d, Eigen::Vector2d>> regression_pairs(
    const std::vector<SceneSample> &samples);

// Runs the prediction model over evaluation points and assembles the full
// report: top-k, confusion, R^2 power scatter, hybrid sweep (noiseless
// power only), and identification metrics in multi mode.
EvalReport evaluate_pipeline(const MlpParams &params,
                             const std::vector<EvalPoint> &points,
                             Pipeline pipeline, const std::vector<int> &topk_list,
                             int num_classes);

}  // namespace beamsense

#endif  // BEAMSENSE_PIPELINE_HPP
