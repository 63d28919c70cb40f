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
// The beam classifier: a 2-layer feed-forward network on the detected box
// center, with inverted dropout, softmax cross-entropy, exact
// backpropagation, Adam, and a step learning-rate schedule.

#ifndef BEAMSENSE_BEAMNET_HPP
#define BEAMSENSE_BEAMNET_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "beamsense/errors.hpp"

namespace beamsense {

struct LabeledPoint {
  Eigen::Vector2d x{0.0, 0.0};
  int label = 0;
};

// Dense parameters of the 2 -> hidden -> outputs network.
struct MlpParams {
  Eigen::MatrixXd w1; // hidden x 2
  Eigen::VectorXd b1; // hidden
  Eigen::MatrixXd w2; // outputs x hidden
  Eigen::VectorXd b2; // outputs

  int hidden() const { return static_cast<int>(w1.rows()); }
  int outputs() const { return static_cast<int>(w2.rows()); }

  // Uniform +-1/sqrt(fan_in) weights, zero biases; seeded.
  static MlpParams init(int hidden, int outputs, std::uint64_t seed);
};

// Training hyper-parameters. Defaults are the production settings:
// batch 32, lr 1e-2 decayed by 0.1 at the start of epochs 20 and 40,
// dropout 0.3, 50 epochs, 32 output nodes.
struct TrainConfig {
  int batch_size = 32;
  double learning_rate = 1e-2;
  std::vector<int> lr_decay_epochs{20, 40}; // 1-indexed
  double lr_decay_factor = 0.1;
  double dropout = 0.3;
  int epochs = 50;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  int hidden = 128;
  int outputs = 32;
  std::uint64_t seed = 1;

  void validate() const;
};

struct AdamState {
  MlpParams first_moment;
  MlpParams second_moment;
  long step = 0;

  static AdamState zeros_like(const MlpParams &params);
};

// Eval mode is deterministic; train mode applies an inverted-dropout mask
// to the hidden layer, derived from mask_seed alone so a loss can be
// re-evaluated under the identical mask (finite differences rely on this).
struct ForwardMode {
  bool train = false;
  double dropout_p = 0.0;
  std::uint64_t mask_seed = 0;

  static ForwardMode eval() { return {}; }
  static ForwardMode train_mode(double dropout_p, std::uint64_t mask_seed) {
    return {true, dropout_p, mask_seed};
  }
};

// Logits of one input.
Eigen::VectorXd forward(const MlpParams &params, const Eigen::Vector2d &x,
                        const ForwardMode &mode);

// Numerically safe softmax (max subtraction).
Eigen::VectorXd softmax(const Eigen::VectorXd &logits);

// Mean cross-entropy over the batch plus exact gradients through the
// dropout masks used by the forward pass. In train mode, sample i uses a
// mask derived from (mode.mask_seed, i).
double loss_and_grad(const MlpParams &params, std::span<const LabeledPoint> batch,
                     const ForwardMode &mode, MlpParams &gradients);

// Bias-corrected Adam update; increments the step counter.
void adam_step(MlpParams &params, const MlpParams &gradients, AdamState &state,
               double learning_rate, const TrainConfig &config);

struct EpochStats {
  int epoch = 0; // 1-indexed
  double learning_rate = 0.0;
  double train_loss = 0.0;
  double val_top1 = 0.0;
};

struct TrainResult {
  MlpParams params; // best validation top-1 checkpoint
  std::vector<EpochStats> history;
  int best_epoch = 0;
};

// Full training loop: seeded per-epoch shuffles, step lr schedule, and
// best-validation-top-1 model selection. Bit-reproducible per seed.
TrainResult train(const std::vector<LabeledPoint> &train_set,
                  const std::vector<LabeledPoint> &val_set,
                  const TrainConfig &config);

// Indices of the k largest logits, ties broken toward the lower index.
std::vector<int> predict_topk(const MlpParams &params, const Eigen::Vector2d &x,
                              int k);

// Structured-text persistence with a config echo, plus the history CSV
// (epoch, lr, train_loss, val_top1).
void save_mlp(const MlpParams &params, const TrainConfig &config,
              const std::filesystem::path &path);
MlpParams load_mlp(const std::filesystem::path &path);
void write_history_csv(const std::vector<EpochStats> &history,
                       const std::filesystem::path &path);

}  // namespace beamsense

#endif  // BEAMSENSE_BEAMNET_HPP
