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

#include "beamsense/beamnet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "beamsense/rng.hpp"

namespace beamsense {

using nlohmann::json;

namespace {

enum : std::uint64_t {
  kTagInit = 0x696e6974,
  kTagShuffle = 0x73687566,
  kTagMask = 0x6d61736b,
};

// Inverted-dropout mask for one sample; entry j depends only on
// (mask_seed, j), so re-evaluations see the same mask.
Eigen::VectorXd dropout_mask(int hidden, double p, std::uint64_t mask_seed) {
  Eigen::VectorXd mask(hidden);
  const double keep_scale = 1.0 / (1.0 - p);
  for (int j = 0; j < hidden; ++j) {
    const std::uint64_t bits =
        splitmix64(mask_seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(j + 1));
    const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
    mask(j) = u < p ? 0.0 : keep_scale;
  }
  return mask;
}

struct ForwardCache {
  Eigen::VectorXd pre_activation;
  Eigen::VectorXd hidden; // after relu and mask
  Eigen::VectorXd logits;
};

ForwardCache forward_cached(const MlpParams &params, const Eigen::Vector2d &x,
                            const ForwardMode &mode, std::uint64_t sample_mask_seed) {
  if (!x.allFinite()) throw NonFinite("network input is non-finite");
  ForwardCache cache;
  cache.pre_activation = params.w1 * x + params.b1;
  cache.hidden = cache.pre_activation.cwiseMax(0.0);
  if (mode.train && mode.dropout_p > 0.0)
    cache.hidden.array() *=
        dropout_mask(params.hidden(), mode.dropout_p, sample_mask_seed).array();
  cache.logits = params.w2 * cache.hidden + params.b2;
  return cache;
}

double evaluate_top1(const MlpParams &params, const std::vector<LabeledPoint> &set) {
  long hits = 0;
  for (const auto &point : set)
    if (predict_topk(params, point.x, 1).front() == point.label) ++hits;
  return static_cast<double>(hits) / static_cast<double>(set.size());
}

}  // namespace

MlpParams MlpParams::init(int hidden, int outputs, std::uint64_t seed) {
  if (hidden < 1 || outputs < 1)
    throw ConfigError("network sizes must be positive");
  Rng rng(derive_seed(seed, kTagInit));
  MlpParams params;
  params.w1.resize(hidden, 2);
  params.b1 = Eigen::VectorXd::Zero(hidden);
  params.w2.resize(outputs, hidden);
  params.b2 = Eigen::VectorXd::Zero(outputs);

  const double bound1 = 1.0 / std::sqrt(2.0);
  for (int r = 0; r < hidden; ++r)
    for (int c = 0; c < 2; ++c) params.w1(r, c) = rng.uniform(-bound1, bound1);
  const double bound2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (int r = 0; r < outputs; ++r)
    for (int c = 0; c < hidden; ++c) params.w2(r, c) = rng.uniform(-bound2, bound2);
  return params;
}

void TrainConfig::validate() const {
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (!(lr_decay_factor > 0.0)) throw ConfigError("lr_decay_factor must be > 0");
  if (dropout < 0.0 || dropout >= 1.0)
    throw ConfigError("dropout must be in [0, 1)");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (hidden < 1 || outputs < 1) throw ConfigError("network sizes must be positive");
  if (!(adam_beta1 > 0.0 && adam_beta1 < 1.0) ||
      !(adam_beta2 > 0.0 && adam_beta2 < 1.0))
    throw ConfigError("adam betas must be in (0, 1)");
  if (!(adam_eps > 0.0)) throw ConfigError("adam_eps must be > 0");
}

AdamState AdamState::zeros_like(const MlpParams &params) {
  AdamState state;
  for (MlpParams *moment : {&state.first_moment, &state.second_moment}) {
    moment->w1 = Eigen::MatrixXd::Zero(params.w1.rows(), params.w1.cols());
    moment->b1 = Eigen::VectorXd::Zero(params.b1.size());
    moment->w2 = Eigen::MatrixXd::Zero(params.w2.rows(), params.w2.cols());
    moment->b2 = Eigen::VectorXd::Zero(params.b2.size());
  }
  return state;
}

Eigen::VectorXd forward(const MlpParams &params, const Eigen::Vector2d &x,
                        const ForwardMode &mode) {
  return forward_cached(params, x, mode, mode.mask_seed).logits;
}

Eigen::VectorXd softmax(const Eigen::VectorXd &logits) {
  const double max_logit = logits.maxCoeff();
  Eigen::VectorXd p = (logits.array() - max_logit).exp();
  return p / p.sum();
}

double loss_and_grad(const MlpParams &params, std::span<const LabeledPoint> batch,
                     const ForwardMode &mode, MlpParams &gradients) {
  if (batch.empty()) throw EmptyDataset("loss_and_grad needs a nonempty batch");

  gradients.w1 = Eigen::MatrixXd::Zero(params.w1.rows(), params.w1.cols());
  gradients.b1 = Eigen::VectorXd::Zero(params.b1.size());
  gradients.w2 = Eigen::MatrixXd::Zero(params.w2.rows(), params.w2.cols());
  gradients.b2 = Eigen::VectorXd::Zero(params.b2.size());

  const int outputs = params.outputs();
  double total_loss = 0.0;

  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto &point = batch[i];
    if (point.label < 0 || point.label >= outputs)
      throw LabelOutOfRange("label " + std::to_string(point.label) +
                            " outside [0, " + std::to_string(outputs) + ")");

    const std::uint64_t sample_seed =
        mode.train ? derive_seed(mode.mask_seed, kTagMask, i) : 0;
    const ForwardCache cache = forward_cached(params, point.x, mode, sample_seed);

    // loss = logsumexp(logits) - logits[label]
    const double max_logit = cache.logits.maxCoeff();
    const double lse =
        max_logit + std::log((cache.logits.array() - max_logit).exp().sum());
    total_loss += lse - cache.logits(point.label);

    Eigen::VectorXd dlogits = softmax(cache.logits);
    dlogits(point.label) -= 1.0;

    gradients.w2.noalias() += dlogits * cache.hidden.transpose();
    gradients.b2 += dlogits;

    Eigen::VectorXd dhidden = params.w2.transpose() * dlogits;
    if (mode.train && mode.dropout_p > 0.0)
      dhidden.array() *=
          dropout_mask(params.hidden(), mode.dropout_p, sample_seed).array();
    const Eigen::VectorXd dpre =
        (cache.pre_activation.array() > 0.0).select(dhidden, 0.0);

    gradients.w1.noalias() += dpre * point.x.transpose();
    gradients.b1 += dpre;
  }

  const double inv_n = 1.0 / static_cast<double>(batch.size());
  gradients.w1 *= inv_n;
  gradients.b1 *= inv_n;
  gradients.w2 *= inv_n;
  gradients.b2 *= inv_n;
  return total_loss * inv_n;
}

void adam_step(MlpParams &params, const MlpParams &gradients, AdamState &state,
               double learning_rate, const TrainConfig &config) {
  if (gradients.w1.rows() != params.w1.rows() ||
      gradients.w2.rows() != params.w2.rows() ||
      gradients.w1.cols() != params.w1.cols() ||
      gradients.w2.cols() != params.w2.cols())
    throw ShapeMismatch("gradient shapes do not match the parameters");

  ++state.step;
  const double bc1 = 1.0 - std::pow(config.adam_beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(config.adam_beta2, static_cast<double>(state.step));

  const auto update = [&](Eigen::Ref<Eigen::MatrixXd> value,
                          const Eigen::Ref<const Eigen::MatrixXd> &grad,
                          Eigen::Ref<Eigen::MatrixXd> m,
                          Eigen::Ref<Eigen::MatrixXd> v) {
    m = config.adam_beta1 * m + (1.0 - config.adam_beta1) * grad;
    v = config.adam_beta2 * v.array().matrix() +
        (1.0 - config.adam_beta2) * grad.array().square().matrix();
    const Eigen::ArrayXXd m_hat = m.array() / bc1;
    const Eigen::ArrayXXd v_hat = v.array() / bc2;
    value.array() -= learning_rate * m_hat / (v_hat.sqrt() + config.adam_eps);
  };

  update(params.w1, gradients.w1, state.first_moment.w1, state.second_moment.w1);
  update(params.b1, gradients.b1, state.first_moment.b1, state.second_moment.b1);
  update(params.w2, gradients.w2, state.first_moment.w2, state.second_moment.w2);
  update(params.b2, gradients.b2, state.first_moment.b2, state.second_moment.b2);
}

TrainResult train(const std::vector<LabeledPoint> &train_set,
                  const std::vector<LabeledPoint> &val_set,
                  const TrainConfig &config) {
  config.validate();
  if (train_set.empty() || val_set.empty())
    throw EmptyDataset("train() needs nonempty train and validation sets");

  MlpParams params = MlpParams::init(config.hidden, config.outputs, config.seed);
  AdamState state = AdamState::zeros_like(params);
  MlpParams gradients;

  TrainResult result;
  result.best_epoch = 0;
  double best_top1 = -1.0;
  double lr = config.learning_rate;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    if (std::find(config.lr_decay_epochs.begin(), config.lr_decay_epochs.end(),
                  epoch) != config.lr_decay_epochs.end())
      lr *= config.lr_decay_factor;

    Rng shuffle_rng(derive_seed(config.seed, kTagShuffle, static_cast<std::uint64_t>(epoch)));
    const auto order = shuffle_rng.shuffled_indices(train_set.size());

    double epoch_loss = 0.0;
    long batches = 0;
    std::vector<LabeledPoint> batch;
    batch.reserve(static_cast<std::size_t>(config.batch_size));

    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      batch.clear();
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      for (std::size_t i = start; i < stop; ++i) batch.push_back(train_set[order[i]]);

      const std::uint64_t mask_seed = derive_seed(
          config.seed, kTagMask,
          static_cast<std::uint64_t>(epoch) * 1000003ULL + static_cast<std::uint64_t>(batches));
      const ForwardMode mode = config.dropout > 0.0
                                   ? ForwardMode::train_mode(config.dropout, mask_seed)
                                   : ForwardMode::eval();
      epoch_loss += loss_and_grad(params, batch, mode, gradients);
      adam_step(params, gradients, state, lr, config);
      ++batches;
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.learning_rate = lr;
    stats.train_loss = epoch_loss / static_cast<double>(batches);
    stats.val_top1 = evaluate_top1(params, val_set);
    result.history.push_back(stats);

    if (stats.val_top1 > best_top1) {
      best_top1 = stats.val_top1;
      result.params = params;
      result.best_epoch = epoch;
    }
  }
  return result;
}

std::vector<int> predict_topk(const MlpParams &params, const Eigen::Vector2d &x,
                              int k) {
  if (k < 1 || k > params.outputs())
    throw BadK("k must be in [1, " + std::to_string(params.outputs()) + "]");
  const Eigen::VectorXd logits = forward(params, x, ForwardMode::eval());

  std::vector<int> idx(static_cast<std::size_t>(params.outputs()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&logits](int a, int b) { return logits(a) > logits(b); });
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

void save_mlp(const MlpParams &params, const TrainConfig &config,
              const std::filesystem::path &path) {
  const auto flatten = [](const Eigen::MatrixXd &m) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(m.size()));
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
    return out;
  };

  json j;
  j["hidden"] = params.hidden();
  j["outputs"] = params.outputs();
  j["w1"] = flatten(params.w1);
  j["b1"] = std::vector<double>(params.b1.data(), params.b1.data() + params.b1.size());
  j["w2"] = flatten(params.w2);
  j["b2"] = std::vector<double>(params.b2.data(), params.b2.data() + params.b2.size());
  j["config"] = {
      {"batch_size", config.batch_size},
      {"learning_rate", config.learning_rate},
      {"lr_decay_epochs", config.lr_decay_epochs},
      {"lr_decay_factor", config.lr_decay_factor},
      {"dropout", config.dropout},
      {"epochs", config.epochs},
      {"adam_beta1", config.adam_beta1},
      {"adam_beta2", config.adam_beta2},
      {"adam_eps", config.adam_eps},
      {"seed", config.seed},
  };

  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

MlpParams load_mlp(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  json j;
  try {
    in >> j;
    const int hidden = j.at("hidden").get<int>();
    const int outputs = j.at("outputs").get<int>();
    MlpParams params;
    const auto unflatten = [&j](const char *key, Eigen::MatrixXd &m, int rows,
                                int cols) {
      const auto values = j.at(key).get<std::vector<double>>();
      if (values.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
        throw SchemaError(std::string("wrong element count for ") + key);
      m.resize(rows, cols);
      std::size_t i = 0;
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = values[i++];
    };
    unflatten("w1", params.w1, hidden, 2);
    unflatten("w2", params.w2, outputs, hidden);
    const auto b1 = j.at("b1").get<std::vector<double>>();
    const auto b2 = j.at("b2").get<std::vector<double>>();
    if (b1.size() != static_cast<std::size_t>(hidden) ||
        b2.size() != static_cast<std::size_t>(outputs))
      throw SchemaError("bias sizes do not match the declared shape");
    params.b1 = Eigen::Map<const Eigen::VectorXd>(b1.data(), hidden);
    params.b2 = Eigen::Map<const Eigen::VectorXd>(b2.data(), outputs);
    return params;
  } catch (const json::exception &e) {
    throw SchemaError(std::string("model file: ") + e.what());
  }
}

void write_history_csv(const std::vector<EpochStats> &history,
                       const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "epoch,lr,train_loss,val_top1\n";
  char line[160];
  for (const auto &row : history) {
    std::snprintf(line, sizeof(line), "%d,%.17g,%.17g,%.17g\n", row.epoch,
                  row.learning_rate, row.train_loss, row.val_top1);
    out << line;
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace beamsense
