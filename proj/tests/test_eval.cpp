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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "beamsense/eval.hpp"
#include "beamsense/rng.hpp"

using namespace beamsense;

namespace {

std::vector<int> random_permutation(Rng &rng, int n) {
  const auto idx = rng.shuffled_indices(static_cast<std::size_t>(n));
  std::vector<int> out;
  out.reserve(idx.size());
  for (const auto i : idx) out.push_back(static_cast<int>(i));
  return out;
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<LabeledPoint> toy_points(int n, int classes, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<LabeledPoint> points;
  for (int i = 0; i < n; ++i) {
    const double x = rng.uniform01();
    points.push_back({{x, 0.5}, std::min(classes - 1, static_cast<int>(x * classes))});
  }
  return points;
}

}  // namespace

TEST_CASE("all-correct rankings score one for every k") {
  std::vector<std::vector<int>> ranked;
  std::vector<int> truths;
  for (int i = 0; i < 20; ++i) {
    ranked.push_back({i % 7, (i + 1) % 7, (i + 2) % 7});
    truths.push_back(i % 7);
  }
  for (int k : {1, 2, 3}) CHECK(topk_accuracy(ranked, truths, k) == 1.0);
}

TEST_CASE("a truth in second place counts for top-2 but not top-1") {
  const std::vector<std::vector<int>> ranked{{5, 3}};
  const std::vector<int> truths{3};
  CHECK(topk_accuracy(ranked, truths, 1) == 0.0);
  CHECK(topk_accuracy(ranked, truths, 2) == 1.0);
}

TEST_CASE("random rankings against random labels hit 1/Q") {
  Rng rng(21);
  std::vector<std::vector<int>> ranked;
  std::vector<int> truths;
  for (int i = 0; i < 10000; ++i) {
    ranked.push_back(random_permutation(rng, 32));
    truths.push_back(rng.uniform_int(32));
  }
  CHECK(std::abs(topk_accuracy(ranked, truths, 1) - 1.0 / 32) <= 0.01);
}

TEST_CASE("top-k accuracy is nondecreasing in k and exact at k = Q") {
  Rng rng(22);
  std::vector<std::vector<int>> ranked;
  std::vector<int> truths;
  for (int i = 0; i < 500; ++i) {
    ranked.push_back(random_permutation(rng, 16));
    truths.push_back(rng.uniform_int(16));
  }
  double previous = 0.0;
  for (int k = 1; k <= 16; ++k) {
    const double acc = topk_accuracy(ranked, truths, k);
    CHECK(acc >= previous);
    previous = acc;
  }
  CHECK(previous == 1.0);
}

TEST_CASE("top-k validates lengths and k") {
  CHECK_THROWS_AS(topk_accuracy({{0}}, {0, 1}, 1), LengthMismatch);
  CHECK_THROWS_AS(topk_accuracy({{0}}, {0}, 2), BadK);
}

TEST_CASE("perfect predictions give a diagonal confusion matrix") {
  std::vector<int> labels;
  for (int i = 0; i < 40; ++i) labels.push_back(i % 8);
  const auto counts = confusion(labels, labels, 8);
  CHECK(counts.trace() == 40);
  CHECK(counts.sum() == 40);
}

TEST_CASE("a single error lands in one off-diagonal cell") {
  const auto counts = confusion({5}, {2}, 8);
  CHECK(counts(2, 5) == 1);
  CHECK(counts.sum() == 1);
}

TEST_CASE("confusion row sums equal class frequencies") {
  Rng rng(23);
  std::vector<int> preds, truths;
  std::vector<int> freq(8, 0);
  for (int i = 0; i < 300; ++i) {
    preds.push_back(rng.uniform_int(8));
    const int t = rng.uniform_int(8);
    truths.push_back(t);
    ++freq[static_cast<std::size_t>(t)];
  }
  const auto counts = confusion(preds, truths, 8);
  for (int t = 0; t < 8; ++t)
    CHECK(counts.row(t).sum() == freq[static_cast<std::size_t>(t)]);
  CHECK_THROWS_AS(confusion({8}, {0}, 8), IndexOutOfRange);
  CHECK_THROWS_AS(confusion({0, 1}, {0}, 8), LengthMismatch);
}

TEST_CASE("exact predictions score R^2 of one") {
  Eigen::VectorXd gt(4);
  gt << 0.1, 0.4, 0.7, 0.9;
  CHECK(r2_power(gt, gt) == doctest::Approx(1.0));
}

TEST_CASE("predicting the mean scores R^2 of zero") {
  Eigen::VectorXd gt(3);
  gt << 1.0, 2.0, 3.0;
  Eigen::VectorXd pred = Eigen::VectorXd::Constant(3, 2.0);
  CHECK(r2_power(pred, gt) == doctest::Approx(0.0));
}

TEST_CASE("hand-computed fixture scores one half") {
  Eigen::VectorXd gt(3), pred(3);
  gt << 1.0, 2.0, 3.0;
  pred << 1.0, 2.0, 2.0;
  CHECK(r2_power(pred, gt) == doctest::Approx(0.5));
}

TEST_CASE("constant ground truth is degenerate") {
  Eigen::VectorXd gt = Eigen::VectorXd::Constant(5, 0.4);
  CHECK_THROWS_AS(r2_power(gt, gt), DegenerateGroundTruth);
}

TEST_CASE("common rescaling leaves R^2 unchanged") {
  Rng rng(24);
  Eigen::VectorXd gt(50), pred(50);
  for (int i = 0; i < 50; ++i) {
    gt(i) = rng.uniform(0.1, 1.0);
    pred(i) = gt(i) + rng.normal(0.0, 0.05);
  }
  const double base = r2_power(pred, gt);
  CHECK(r2_power(pred * 7.5, gt * 7.5) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("learning curve at fraction one equals the standalone run") {
  TrainConfig config;
  config.hidden = 8;
  config.outputs = 4;
  config.epochs = 3;
  config.seed = 25;
  const auto train_set = toy_points(60, 4, 26);
  const auto val_set = toy_points(30, 4, 27);

  const auto points = learning_curve(train_set, val_set, {0.5, 1.0}, config);
  REQUIRE(points.size() == 2);
  CHECK(points[0].n_used == 30);
  CHECK(points[1].n_used == 60);

  const auto standalone = train(train_set, val_set, config);
  double best = 0.0;
  for (const auto &row : standalone.history) best = std::max(best, row.val_top1);
  CHECK(points[1].top1 == best);
}

TEST_CASE("learning curve validates its fractions") {
  TrainConfig config;
  const auto set = toy_points(10, 4, 28);
  CHECK_THROWS_AS(learning_curve(set, set, {}, config), EmptyFraction);
  CHECK_THROWS_AS(learning_curve(set, set, {0.0, 0.5}, config), EmptyFraction);
  CHECK_THROWS_AS(learning_curve(set, set, {0.9, 0.5}, config), EmptyFraction);
}

TEST_CASE("a full sweep always achieves the maximum power") {
  Rng rng(29);
  std::vector<std::vector<int>> ranked;
  std::vector<Eigen::VectorXd> powers;
  for (int i = 0; i < 100; ++i) {
    ranked.push_back(random_permutation(rng, 16));
    Eigen::VectorXd p(16);
    for (int q = 0; q < 16; ++q) p(q) = rng.uniform(0.0, 1.0);
    powers.push_back(p);
  }
  CHECK(hybrid_sweep_power(ranked, powers, 16) == doctest::Approx(1.0));
}

TEST_CASE("a correct top-1 achieves full power at k = 1") {
  std::vector<std::vector<int>> ranked;
  std::vector<Eigen::VectorXd> powers;
  Rng rng(30);
  for (int i = 0; i < 50; ++i) {
    Eigen::VectorXd p(8);
    for (int q = 0; q < 8; ++q) p(q) = rng.uniform(0.0, 1.0);
    int best = 0;
    for (int q = 1; q < 8; ++q)
      if (p(q) > p(best)) best = q;
    powers.push_back(p);
    ranked.push_back({best});
  }
  CHECK(hybrid_sweep_power(ranked, powers, 1) == doctest::Approx(1.0));
}

TEST_CASE("achieved power ratio is nondecreasing in k") {
  Rng rng(31);
  std::vector<std::vector<int>> ranked;
  std::vector<Eigen::VectorXd> powers;
  for (int i = 0; i < 200; ++i) {
    ranked.push_back(random_permutation(rng, 16));
    Eigen::VectorXd p(16);
    for (int q = 0; q < 16; ++q) p(q) = rng.uniform(0.0, 1.0);
    powers.push_back(p);
  }
  double previous = 0.0;
  for (int k = 1; k <= 16; ++k) {
    const double ratio = hybrid_sweep_power(ranked, powers, k);
    CHECK(ratio >= previous);
    CHECK(ratio <= 1.0 + 1e-12);
    previous = ratio;
  }
}

TEST_CASE("reports are emitted byte-deterministically") {
  EvalReport report;
  report.topk = {{1, 0.8125}, {2, 0.9}, {3, 0.95}, {5, 1.0}};
  report.confusion_counts = Eigen::MatrixXi::Zero(4, 4);
  report.confusion_counts.diagonal() << 5, 6, 7, 8;
  report.confusion_counts(1, 2) = 2;
  report.r2 = 0.87;
  report.power_pairs = {{0.5, 0.6}, {0.9, 0.9}, {0.25, 0.5}};
  report.hybrid = {{1, 0.91}, {5, 0.999}};
  TxidBlock txid;
  txid.tp = 90;
  txid.fp = 5;
  txid.fn = 5;
  txid.accuracy = 0.9;
  txid.precision = 90.0 / 95.0;
  txid.recall = 90.0 / 95.0;
  report.txid = txid;
  report.top1_given_txid = 0.85;
  report.seed = 7;
  report.config_hash = "deadbeef";
  report.num_classes = 4;
  report.n_samples = 28;

  const auto base =
      std::filesystem::temp_directory_path() /
      ("beamsense_eval_" + std::to_string(::getpid()));
  const auto dir_a = base / "a";
  const auto dir_b = base / "b";
  const auto files_a = emit_report(report, dir_a);
  const auto files_b = emit_report(report, dir_b);
  REQUIRE(files_a == files_b);
  CHECK(files_a.size() == 5);
  for (const auto &name : files_a)
    CHECK(read_file(dir_a / name) == read_file(dir_b / name));

  // confusion.csv re-ingests to the same matrix
  std::ifstream in(dir_a / "confusion.csv");
  Eigen::MatrixXi parsed = Eigen::MatrixXi::Zero(4, 4);
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    int col = 0;
    while (std::getline(ss, cell, ',')) parsed(row, col++) = std::stoi(cell);
    ++row;
  }
  CHECK(row == 4);
  CHECK((parsed - report.confusion_counts).cwiseAbs().maxCoeff() == 0);

  std::filesystem::remove_all(base);
}

TEST_CASE("optional report blocks are omitted from the file list") {
  EvalReport report;
  report.topk = {{1, 0.5}};
  report.num_classes = 4;
  report.n_samples = 2;
  const auto dir =
      std::filesystem::temp_directory_path() /
      ("beamsense_eval_min_" + std::to_string(::getpid()));
  const auto files = emit_report(report, dir);
  CHECK(files == std::vector<std::string>{"metrics.csv"});
  CHECK_FALSE(std::filesystem::exists(dir / "confusion.csv"));
  CHECK_FALSE(std::filesystem::exists(dir / "scatter.csv"));
  std::filesystem::remove_all(dir);
}
