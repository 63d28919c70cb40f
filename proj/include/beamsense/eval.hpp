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
// Evaluation machinery: top-k accuracy, confusion matrices, the
// R^2 power scatter, learning curves, the hybrid top-k sweep, and
// deterministic report emission.

#ifndef BEAMSENSE_EVAL_HPP
#define BEAMSENSE_EVAL_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "beamsense/beamnet.hpp"

namespace beamsense {

// Fraction of samples whose truth appears among the first k ranked beams.
double topk_accuracy(const std::vector<std::vector<int>> &ranked,
                     const std::vector<int> &truths, int k);

// counts(t, p): samples with truth t predicted as p.
Eigen::MatrixXi confusion(const std::vector<int> &predictions,
                          const std::vector<int> &truths, int num_classes);

// Coefficient of determination between ground-truth power and the power
// achieved by the top-1 predicted beam.
double r2_power(const Eigen::VectorXd &top1_power, const Eigen::VectorXd &gt_power);

struct CurvePoint {
  double fraction = 0.0;
  int n_used = 0;
  double top1 = 0.0;
  double top5 = 0.0;
};

// Trains a fresh model per fraction on a seeded random subset of the
// training set (kept in original relative order, so fraction 1.0 is the
// standalone full run) and evaluates on the same validation set.
std::vector<CurvePoint> learning_curve(const std::vector<LabeledPoint> &full_train,
                                       const std::vector<LabeledPoint> &val,
                                       const std::vector<double> &fractions,
                                       const TrainConfig &config);

// Mean of max-power-over-top-k / max-power-over-all-beams. Power vectors
// must be noiseless ground truth.
double hybrid_sweep_power(const std::vector<std::vector<int>> &ranked,
                          const std::vector<Eigen::VectorXd> &power_vectors, int k);

struct TxidBlock {
  long tp = 0, fp = 0, fn = 0, tn = 0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

struct EvalReport {
  std::map<int, double> topk;          // k -> accuracy
  Eigen::MatrixXi confusion_counts;    // Q x Q
  std::optional<double> r2;
  std::vector<std::pair<double, double>> power_pairs; // (top1, ground truth)
  std::map<int, double> hybrid;        // k -> mean achieved-power ratio
  std::optional<TxidBlock> txid;
  std::optional<double> top1_given_txid;
  std::uint64_t seed = 0;
  std::string config_hash;
  int num_classes = 0;
  long n_samples = 0;
};

// Writes metrics.csv, confusion.csv(+svg), scatter.csv(+svg) as present,
// byte-deterministic for a given report. Returns the emitted file names.
std::vector<std::string> emit_report(const EvalReport &report,
                                     const std::filesystem::path &out_dir);

}  // namespace beamsense

#endif  // BEAMSENSE_EVAL_HPP
