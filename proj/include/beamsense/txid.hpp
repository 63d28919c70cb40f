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
// Transmitter identification: cubic bivariate regression from GPS to the
// image-plane box center, nearest-neighbor selection over detected boxes,
// and the frame-level identification metrics.

#ifndef BEAMSENSE_TXID_HPP
#define BEAMSENSE_TXID_HPP

#include <array>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "beamsense/scene.hpp"

namespace beamsense {

// Per-coordinate z-score parameters fitted on the training GPS fixes.
// A degenerate (constant) coordinate keeps std = 1 and is flagged.
struct Normalizer {
  Eigen::Vector2d mean{0.0, 0.0};
  Eigen::Vector2d std{1.0, 1.0};
  std::array<bool, 2> degenerate{false, false};

  Eigen::Vector2d apply(const Eigen::Vector2d &g) const {
    return {(g.x() - mean.x()) / std.x(), (g.y() - mean.y()) / std.y()};
  }
};

// Monomials of the bivariate cubic in a fixed order:
// [1, g1, g2, g1^2, g1 g2, g2^2, g1^3, g1^2 g2, g1 g2^2, g2^3].
// Without the bias term the leading 1 is dropped (9 monomials).
Eigen::VectorXd poly_expand(const Eigen::Vector2d &g_normalized,
                            bool include_bias = true);

// A x 2 parameter matrix plus the predictor normalizer.
struct RegressionModel {
  Eigen::MatrixXd weights; // A x 2
  Normalizer normalizer;
  bool include_bias = true;
  double train_residual = 0.0; // mean squared training residual

  int feature_count() const { return static_cast<int>(weights.rows()); }
};

// Ridge-regularized least squares via the normal equations. Throws
// DegenerateDesign when the regularized system cannot be solved to a
// finite result. ridge_lambda is exposed for tests; the default matches
// the production setting.
RegressionModel fit_regression(
    const std::vector<std::pair<Eigen::Vector2d, Eigen::Vector2d>> &pairs,
    bool include_bias = true, double ridge_lambda = 1e-8);

// W^T phi(normalize(g)); the estimate may land outside [0, 1], it is a
// guide for the selector, not a final answer.
Eigen::Vector2d predict_center(const RegressionModel &model,
                               const Eigen::Vector2d &g);

// Nearest-neighbor pick. With no boxes the estimate itself is returned,
// clamped into the image, and row stays empty.
struct Selection {
  std::optional<int> row;
  Eigen::Vector2d center{0.0, 0.0};
};

Selection select_tx(const RelevantObjectMatrix &boxes,
                    const Eigen::Vector2d &predicted_center);

// Per-frame ground truth for the metrics: was a transmitter physically in
// the frame, and which detected row (if any) is it.
struct TxProvenance {
  bool tx_present = false;
  std::optional<int> tx_row;
};

// 2x2 frame-level confusion. Every frame lands in exactly one cell:
// selected-the-transmitter (tp), picked some other box while the
// transmitter was detectable (fp), transmitter present but not among the
// boxes (fn, counts against recall), no transmitter and nothing selected (tn).
struct TxidCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  long tn = 0;

  long total() const { return tp + fp + fn + tn; }
  double accuracy() const;
  double precision() const;
  double recall() const;
};

TxidCounts txid_metrics(const std::vector<std::optional<int>> &selections,
                        const std::vector<TxProvenance> &provenance);

// Structured-text persistence (full-precision weights and normalizer).
void save_regression(const RegressionModel &model,
                     const std::filesystem::path &path);
RegressionModel load_regression(const std::filesystem::path &path);

}  // namespace beamsense

#endif  // BEAMSENSE_TXID_HPP
