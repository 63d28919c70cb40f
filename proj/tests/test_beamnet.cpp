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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "beamsense/beamnet.hpp"
#include "beamsense/rng.hpp"

using namespace beamsense;

namespace {

MlpParams zero_params(int hidden, int outputs) {
  MlpParams p;
  p.w1 = Eigen::MatrixXd::Zero(hidden, 2);
  p.b1 = Eigen::VectorXd::Zero(hidden);
  p.w2 = Eigen::MatrixXd::Zero(outputs, hidden);
  p.b2 = Eigen::VectorXd::Zero(outputs);
  return p;
}

MlpParams random_params(int hidden, int outputs, std::uint64_t seed) {
  Rng rng(seed);
  MlpParams p = zero_params(hidden, outputs);
  for (int r = 0; r < hidden; ++r)
    for (int c = 0; c < 2; ++c) p.w1(r, c) = rng.uniform(-0.7, 0.7);
  for (int r = 0; r < hidden; ++r) p.b1(r) = rng.uniform(-0.3, 0.3);
  for (int r = 0; r < outputs; ++r)
    for (int c = 0; c < hidden; ++c) p.w2(r, c) = rng.uniform(-0.7, 0.7);
  for (int r = 0; r < outputs; ++r) p.b2(r) = rng.uniform(-0.3, 0.3);
  return p;
}

std::vector<double *> parameter_coords(MlpParams &p) {
  std::vector<double *> coords;
  for (Eigen::Index i = 0; i < p.w1.size(); ++i) coords.push_back(p.w1.data() + i);
  for (Eigen::Index i = 0; i < p.b1.size(); ++i) coords.push_back(p.b1.data() + i);
  for (Eigen::Index i = 0; i < p.w2.size(); ++i) coords.push_back(p.w2.data() + i);
  for (Eigen::Index i = 0; i < p.b2.size(); ++i) coords.push_back(p.b2.data() + i);
  return coords;
}

// Central finite differences against the analytic gradient; returns the
// largest relative error over every coordinate.
double max_gradient_error(MlpParams params, const std::vector<LabeledPoint> &batch,
                          const ForwardMode &mode) {
  MlpParams analytic;
  loss_and_grad(params, batch, mode, analytic);

  std::vector<double *> coords = parameter_coords(params);
  MlpParams grad_view = analytic; // same shapes; reuse for pointer walking
  std::vector<double *> grads = parameter_coords(grad_view);

  const double h = 1e-5;
  double worst = 0.0;
  MlpParams scratch;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const double saved = *coords[i];
    *coords[i] = saved + h;
    const double loss_hi = loss_and_grad(params, batch, mode, scratch);
    *coords[i] = saved - h;
    const double loss_lo = loss_and_grad(params, batch, mode, scratch);
    *coords[i] = saved;

    const double fd = (loss_hi - loss_lo) / (2.0 * h);
    const double analytic_value = *grads[i];
    const double rel = std::abs(analytic_value - fd) /
                       std::max({std::abs(analytic_value), std::abs(fd), 1e-3});
    worst = std::max(worst, rel);
  }
  return worst;
}

std::vector<LabeledPoint> random_batch(int n, int outputs, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<LabeledPoint> batch;
  for (int i = 0; i < n; ++i)
    batch.push_back({{rng.uniform(-1.0, 2.0), rng.uniform(-1.0, 2.0)},
                     rng.uniform_int(outputs)});
  return batch;
}

// Finite differences are invalid within a probe step of the relu kink;
// configurations too close to it get redrawn.
bool kink_safe(const MlpParams &params, const std::vector<LabeledPoint> &batch) {
  for (const auto &point : batch) {
    const Eigen::VectorXd pre = params.w1 * point.x + params.b1;
    if (pre.cwiseAbs().minCoeff() < 1e-3) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("zero parameters give zero logits and a uniform softmax") {
  const auto params = zero_params(16, 32);
  const auto logits = forward(params, {0.3, 0.7}, ForwardMode::eval());
  CHECK(logits.cwiseAbs().maxCoeff() == 0.0);
  const auto probs = softmax(logits);
  for (int i = 0; i < 32; ++i) CHECK(probs(i) == doctest::Approx(1.0 / 32));
}

TEST_CASE("eval mode is deterministic") {
  const auto params = random_params(32, 8, 1);
  const auto a = forward(params, {0.4, 0.1}, ForwardMode::eval());
  const auto b = forward(params, {0.4, 0.1}, ForwardMode::eval());
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("hand-sized network matches pencil-and-paper arithmetic") {
  MlpParams p = zero_params(2, 2);
  p.w1 << 0.5, -0.25, 0.1, 0.3;
  p.b1 << 0.05, -0.02;
  p.w2 << 1.0, -1.0, 0.2, 0.4;
  p.b2 << 0.01, -0.03;
  const auto logits = forward(p, {0.6, 0.4}, ForwardMode::eval());
  // h1 = relu(0.5*0.6 - 0.25*0.4 + 0.05) = 0.25
  // h2 = relu(0.1*0.6 + 0.3*0.4 - 0.02) = 0.16
  // z1 = 0.25 - 0.16 + 0.01 = 0.10
  // z2 = 0.2*0.25 + 0.4*0.16 - 0.03 = 0.084
  CHECK(logits(0) == doctest::Approx(0.10).epsilon(1e-12));
  CHECK(logits(1) == doctest::Approx(0.084).epsilon(1e-12));
}

TEST_CASE("uniform logits cost ln(32)") {
  const auto params = zero_params(8, 32);
  MlpParams grads;
  const std::vector<LabeledPoint> batch{{{0.2, 0.9}, 5}, {{0.8, 0.3}, 17}};
  const double loss = loss_and_grad(params, batch, ForwardMode::eval(), grads);
  CHECK(loss == doctest::Approx(std::log(32.0)).epsilon(1e-12));
}

TEST_CASE("a confidently correct prediction has vanishing loss") {
  auto params = zero_params(4, 8);
  params.b2(3) = 50.0;
  MlpParams grads;
  const std::vector<LabeledPoint> batch{{{0.5, 0.5}, 3}};
  const double loss = loss_and_grad(params, batch, ForwardMode::eval(), grads);
  CHECK(loss >= 0.0);
  CHECK(loss < 1e-12);
}

TEST_CASE("labels outside the output range are rejected") {
  const auto params = zero_params(4, 8);
  MlpParams grads;
  CHECK_THROWS_AS(loss_and_grad(params, std::vector<LabeledPoint>{{{0, 0}, 8}},
                                ForwardMode::eval(), grads),
                  LabelOutOfRange);
  CHECK_THROWS_AS(loss_and_grad(params, std::vector<LabeledPoint>{},
                                ForwardMode::eval(), grads),
                  EmptyDataset);
}

TEST_CASE("gradients match central finite differences without dropout") {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 10; ++seed) {
    const auto params = random_params(8, 8, 100 + seed);
    const auto batch = random_batch(5, 8, 200 + seed);
    if (!kink_safe(params, batch)) continue;
    CHECK(max_gradient_error(params, batch, ForwardMode::eval()) < 1e-5);
    ++checked;
  }
}

TEST_CASE("gradients match finite differences under a fixed dropout mask") {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 10; ++seed) {
    const auto params = random_params(8, 8, 300 + seed);
    const auto batch = random_batch(5, 8, 400 + seed);
    if (!kink_safe(params, batch)) continue;
    const auto mode = ForwardMode::train_mode(0.3, 500 + seed);
    CHECK(max_gradient_error(params, batch, mode) < 1e-5);
    ++checked;
  }
}

TEST_CASE("adam leaves parameters unchanged under zero gradients") {
  TrainConfig config;
  auto params = random_params(8, 4, 2);
  const MlpParams before = params;
  auto state = AdamState::zeros_like(params);
  adam_step(params, zero_params(8, 4), state, 0.01, config);
  CHECK((params.w1 - before.w1).cwiseAbs().maxCoeff() == 0.0);
  CHECK((params.w2 - before.w2).cwiseAbs().maxCoeff() == 0.0);
  CHECK(state.step == 1);
}

TEST_CASE("one adam step on a unit gradient matches the hand computation") {
  TrainConfig config;
  auto params = zero_params(1, 1);
  auto grads = zero_params(1, 1);
  grads.w2(0, 0) = 1.0;
  auto state = AdamState::zeros_like(params);
  adam_step(params, grads, state, 0.01, config);
  // m_hat = 0.1/(1-0.9) = 1, v_hat = 0.001/(1-0.999) = 1
  // delta = -lr * 1 / (sqrt(1) + eps)
  const double expected = -0.01 * (1.0 / (1.0 + 1e-8));
  CHECK(params.w2(0, 0) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("the first adam step opposes each gradient sign") {
  TrainConfig config;
  auto params = random_params(6, 5, 3);
  const MlpParams before = params;
  MlpParams grads;
  loss_and_grad(params, random_batch(8, 5, 4), ForwardMode::eval(), grads);
  auto state = AdamState::zeros_like(params);
  adam_step(params, grads, state, 0.01, config);
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 6; ++c) {
      if (grads.w2(r, c) == 0.0) continue;
      const double moved = params.w2(r, c) - before.w2(r, c);
      CHECK(moved * grads.w2(r, c) < 0.0);
    }
  }
}

TEST_CASE("adam rejects mismatched shapes") {
  TrainConfig config;
  auto params = zero_params(4, 4);
  auto state = AdamState::zeros_like(params);
  CHECK_THROWS_AS(adam_step(params, zero_params(5, 4), state, 0.01, config),
                  ShapeMismatch);
}

TEST_CASE("a one-sample dataset is memorized with decreasing loss") {
  TrainConfig config;
  config.hidden = 8;
  config.outputs = 4;
  config.epochs = 5;
  config.dropout = 0.0;
  config.lr_decay_epochs = {};
  config.seed = 5;
  const std::vector<LabeledPoint> single{{{0.3, 0.8}, 2}};
  const auto result = train(single, single, config);
  REQUIRE(result.history.size() == 5);
  for (std::size_t e = 1; e < result.history.size(); ++e)
    CHECK(result.history[e].train_loss < result.history[e - 1].train_loss);
}

TEST_CASE("training twice with one seed gives identical histories") {
  TrainConfig config;
  config.hidden = 16;
  config.outputs = 8;
  config.epochs = 6;
  config.seed = 99;
  const auto train_set = random_batch(120, 8, 6);
  const auto val_set = random_batch(40, 8, 7);
  const auto a = train(train_set, val_set, config);
  const auto b = train(train_set, val_set, config);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t e = 0; e < a.history.size(); ++e) {
    CHECK(a.history[e].train_loss == b.history[e].train_loss);
    CHECK(a.history[e].val_top1 == b.history[e].val_top1);
    CHECK(a.history[e].learning_rate == b.history[e].learning_rate);
  }
  CHECK(a.best_epoch == b.best_epoch);
  CHECK((a.params.w1 - b.params.w1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("the learning rate steps down at the scheduled epochs") {
  TrainConfig config;
  config.hidden = 4;
  config.outputs = 4;
  config.epochs = 6;
  config.lr_decay_epochs = {3, 5};
  config.learning_rate = 1e-2;
  config.seed = 8;
  const auto set = random_batch(20, 4, 9);
  const auto result = train(set, set, config);
  CHECK(result.history[0].learning_rate == doctest::Approx(1e-2));
  CHECK(result.history[2].learning_rate == doctest::Approx(1e-3));
  CHECK(result.history[3].learning_rate == doctest::Approx(1e-3));
  CHECK(result.history[4].learning_rate == doctest::Approx(1e-4));
}

TEST_CASE("train rejects empty datasets") {
  TrainConfig config;
  CHECK_THROWS_AS(train({}, random_batch(5, 32, 1), config), EmptyDataset);
  CHECK_THROWS_AS(train(random_batch(5, 32, 1), {}, config), EmptyDataset);
}

TEST_CASE("top-Q prediction is a permutation of all beams") {
  const auto params = random_params(16, 12, 10);
  const auto topk = predict_topk(params, {0.2, 0.6}, 12);
  std::vector<int> sorted = topk;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 12; ++i) CHECK(sorted[static_cast<std::size_t>(i)] == i);
}

TEST_CASE("a unique maximum beam is ranked first") {
  auto params = zero_params(4, 12);
  params.b2(7) = 1.0;
  const auto topk = predict_topk(params, {0.5, 0.5}, 1);
  REQUIRE(topk.size() == 1);
  CHECK(topk[0] == 7);
}

TEST_CASE("equal logits rank by index") {
  const auto params = zero_params(4, 6);
  const auto topk = predict_topk(params, {0.1, 0.9}, 6);
  for (int i = 0; i < 6; ++i) CHECK(topk[static_cast<std::size_t>(i)] == i);
}

TEST_CASE("ranking agrees with a sort oracle") {
  Rng rng(11);
  for (int trial = 0; trial < 10000; ++trial) {
    auto params = zero_params(1, 8);
    for (int i = 0; i < 8; ++i) params.b2(i) = rng.uniform(-1.0, 1.0);
    const auto ranked = predict_topk(params, {0.0, 0.0}, 8);
    std::vector<int> expected(8);
    for (int i = 0; i < 8; ++i) expected[static_cast<std::size_t>(i)] = i;
    std::stable_sort(expected.begin(), expected.end(),
                     [&params](int a, int b) { return params.b2(a) > params.b2(b); });
    CHECK(ranked == expected);
  }
}

TEST_CASE("predict_topk validates k") {
  const auto params = zero_params(4, 8);
  CHECK_THROWS_AS(predict_topk(params, {0, 0}, 0), BadK);
  CHECK_THROWS_AS(predict_topk(params, {0, 0}, 9), BadK);
}

TEST_CASE("top-1 equals the argmax of eval logits") {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const auto params = random_params(8, 8, 600 + static_cast<std::uint64_t>(trial));
    const Eigen::Vector2d x{rng.uniform01(), rng.uniform01()};
    const auto logits = forward(params, x, ForwardMode::eval());
    int argmax = 0;
    for (int i = 1; i < 8; ++i)
      if (logits(i) > logits(argmax)) argmax = i;
    CHECK(predict_topk(params, x, 1)[0] == argmax);
  }
}

TEST_CASE("zero dropout makes train and eval forward passes identical") {
  const auto params = random_params(16, 8, 13);
  const Eigen::Vector2d x{0.25, 0.75};
  const auto train_logits = forward(params, x, ForwardMode::train_mode(0.0, 123));
  const auto eval_logits = forward(params, x, ForwardMode::eval());
  CHECK((train_logits - eval_logits).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("softmax stays finite and normalized for extreme logits") {
  Eigen::VectorXd logits(4);
  logits << 1e4, -1e4, 0.0, 9999.0;
  const auto probs = softmax(logits);
  CHECK(probs.allFinite());
  CHECK(probs.sum() == doctest::Approx(1.0).epsilon(1e-12));
  for (int i = 0; i < 4; ++i) {
    CHECK(probs(i) >= 0.0);
    CHECK(probs(i) <= 1.0);
  }
}

TEST_CASE("dropout masks depend only on the seed") {
  const auto params = random_params(64, 8, 14);
  const Eigen::Vector2d x{0.4, 0.6};
  const auto a = forward(params, x, ForwardMode::train_mode(0.5, 42));
  const auto b = forward(params, x, ForwardMode::train_mode(0.5, 42));
  const auto c = forward(params, x, ForwardMode::train_mode(0.5, 43));
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a - c).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("model files round-trip parameters exactly") {
  const auto params = random_params(8, 8, 15);
  TrainConfig config;
  const auto path = std::filesystem::temp_directory_path() /
                    ("beamsense_mlp_" + std::to_string(::getpid()) + ".json");
  save_mlp(params, config, path);
  const auto loaded = load_mlp(path);
  CHECK((params.w1 - loaded.w1).cwiseAbs().maxCoeff() == 0.0);
  CHECK((params.b1 - loaded.b1).cwiseAbs().maxCoeff() == 0.0);
  CHECK((params.w2 - loaded.w2).cwiseAbs().maxCoeff() == 0.0);
  CHECK((params.b2 - loaded.b2).cwiseAbs().maxCoeff() == 0.0);
  std::filesystem::remove(path);
}
