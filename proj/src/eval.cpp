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

#include "beamsense/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "beamsense/rng.hpp"

namespace beamsense {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  return out;
}

void write_scatter_svg(const std::vector<std::pair<double, double>> &pairs,
                       const std::filesystem::path &path) {
  const int size = 640, margin = 40;
  const double span = static_cast<double>(size - 2 * margin);
  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size
      << "\" height=\"" << size << "\">\n";
  out << "<rect width=\"" << size << "\" height=\"" << size
      << "\" fill=\"white\"/>\n";
  // axes plus the y = x reference
  out << "<line x1=\"" << margin << "\" y1=\"" << size - margin << "\" x2=\""
      << size - margin << "\" y2=\"" << size - margin
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << size - margin << "\" x2=\""
      << margin << "\" y2=\"" << margin << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << size - margin << "\" x2=\""
      << size - margin << "\" y2=\"" << margin
      << "\" stroke=\"#cccccc\" stroke-dasharray=\"4\"/>\n";
  for (const auto &[top1, gt] : pairs) {
    const double px = margin + span * std::clamp(gt, 0.0, 1.0);
    const double py = size - margin - span * std::clamp(top1, 0.0, 1.0);
    out << "<circle cx=\"" << fmt4(px) << "\" cy=\"" << fmt4(py)
        << "\" r=\"2\" fill=\"#1f77b4\" fill-opacity=\"0.5\"/>\n";
  }
  out << "</svg>\n";
}

void write_confusion_svg(const Eigen::MatrixXi &counts,
                         const std::filesystem::path &path) {
  const int q = static_cast<int>(counts.rows());
  const int cell = 16, margin = 24;
  const int size = 2 * margin + q * cell;
  const int max_count = std::max(1, counts.maxCoeff());
  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size
      << "\" height=\"" << size << "\">\n";
  out << "<rect width=\"" << size << "\" height=\"" << size
      << "\" fill=\"white\"/>\n";
  for (int t = 0; t < q; ++t) {
    for (int p = 0; p < q; ++p) {
      const double level =
          static_cast<double>(counts(t, p)) / static_cast<double>(max_count);
      const int shade = static_cast<int>(std::lround(255.0 * (1.0 - level)));
      char color[8];
      std::snprintf(color, sizeof(color), "#%02x%02x%02x", shade, shade, 255);
      out << "<rect x=\"" << margin + p * cell << "\" y=\"" << margin + t * cell
          << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\""
          << color << "\"/>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace

double topk_accuracy(const std::vector<std::vector<int>> &ranked,
                     const std::vector<int> &truths, int k) {
  if (ranked.size() != truths.size())
    throw LengthMismatch("ranked lists and truths must align");
  if (ranked.empty()) throw LengthMismatch("no samples to evaluate");
  if (k < 1) throw BadK("k must be >= 1");

  long hits = 0;
  for (std::size_t u = 0; u < ranked.size(); ++u) {
    if (ranked[u].size() < static_cast<std::size_t>(k))
      throw BadK("ranked list " + std::to_string(u) + " is shorter than k");
    for (int i = 0; i < k; ++i) {
      if (ranked[u][static_cast<std::size_t>(i)] == truths[u]) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(ranked.size());
}

Eigen::MatrixXi confusion(const std::vector<int> &predictions,
                          const std::vector<int> &truths, int num_classes) {
  if (predictions.size() != truths.size())
    throw LengthMismatch("predictions and truths must align");
  Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(num_classes, num_classes);
  for (std::size_t u = 0; u < predictions.size(); ++u) {
    const int t = truths[u];
    const int p = predictions[u];
    if (t < 0 || t >= num_classes || p < 0 || p >= num_classes)
      throw IndexOutOfRange("class index outside [0, " +
                            std::to_string(num_classes) + ")");
    ++counts(t, p);
  }
  return counts;
}

double r2_power(const Eigen::VectorXd &top1_power, const Eigen::VectorXd &gt_power) {
  if (top1_power.size() != gt_power.size())
    throw LengthMismatch("power series must align");
  if (gt_power.size() == 0) throw LengthMismatch("empty power series");

  const double mean = gt_power.mean();
  const double ss_total = (gt_power.array() - mean).square().sum();
  if (ss_total <= 0.0)
    throw DegenerateGroundTruth("ground-truth powers are all identical");
  const double ss_residual = (gt_power - top1_power).squaredNorm();
  return 1.0 - ss_residual / ss_total;
}

std::vector<CurvePoint> learning_curve(const std::vector<LabeledPoint> &full_train,
                                       const std::vector<LabeledPoint> &val,
                                       const std::vector<double> &fractions,
                                       const TrainConfig &config) {
  if (fractions.empty()) throw EmptyFraction("no fractions given");
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    if (!(fractions[i] > 0.0) || fractions[i] > 1.0)
      throw EmptyFraction("fractions must lie in (0, 1]");
    if (i > 0 && fractions[i] < fractions[i - 1])
      throw EmptyFraction("fractions must be sorted ascending");
  }
  if (full_train.empty() || val.empty())
    throw EmptyDataset("learning_curve needs nonempty sets");

  // One shuffled order decides which samples enter the smaller subsets.
  // Chosen indices are sorted back, so fraction 1.0 reproduces the full
  // training set in its original order.
  Rng rng(derive_seed(config.seed, 0x63757276 /* curve */));
  const auto order = rng.shuffled_indices(full_train.size());

  std::vector<CurvePoint> points;
  for (const double fraction : fractions) {
    const auto n_used = static_cast<std::size_t>(std::max<long>(
        1, std::lround(std::ceil(fraction * static_cast<double>(full_train.size())))));
    std::vector<std::size_t> chosen(order.begin(),
                                    order.begin() + static_cast<long>(n_used));
    std::sort(chosen.begin(), chosen.end());
    std::vector<LabeledPoint> subset;
    subset.reserve(chosen.size());
    for (const auto idx : chosen) subset.push_back(full_train[idx]);

    const TrainResult run = train(subset, val, config);
    double best_top1 = 0.0;
    for (const auto &row : run.history) best_top1 = std::max(best_top1, row.val_top1);

    std::vector<std::vector<int>> ranked;
    std::vector<int> truths;
    ranked.reserve(val.size());
    truths.reserve(val.size());
    const int k5 = std::min(5, run.params.outputs());
    for (const auto &point : val) {
      ranked.push_back(predict_topk(run.params, point.x, k5));
      truths.push_back(point.label);
    }

    CurvePoint cp;
    cp.fraction = fraction;
    cp.n_used = static_cast<int>(n_used);
    cp.top1 = best_top1;
    cp.top5 = topk_accuracy(ranked, truths, k5);
    points.push_back(cp);
  }
  return points;
}

double hybrid_sweep_power(const std::vector<std::vector<int>> &ranked,
                          const std::vector<Eigen::VectorXd> &power_vectors, int k) {
  if (ranked.size() != power_vectors.size())
    throw LengthMismatch("ranked lists and power vectors must align");
  if (ranked.empty()) throw LengthMismatch("no samples");
  if (k < 1) throw BadK("k must be >= 1");

  double total_ratio = 0.0;
  for (std::size_t u = 0; u < ranked.size(); ++u) {
    const auto &powers = power_vectors[u];
    if (ranked[u].size() < static_cast<std::size_t>(k))
      throw BadK("ranked list " + std::to_string(u) + " is shorter than k");
    const double best = powers.maxCoeff();
    if (!(best > 0.0)) {
      total_ratio += 1.0; // a dead channel: any beam is as good as any other
      continue;
    }
    double achieved = 0.0;
    for (int i = 0; i < k; ++i) {
      const int beam = ranked[u][static_cast<std::size_t>(i)];
      if (beam < 0 || beam >= powers.size())
        throw IndexOutOfRange("beam index outside the power vector");
      achieved = std::max(achieved, powers(beam));
    }
    total_ratio += achieved / best;
  }
  return total_ratio / static_cast<double>(ranked.size());
}

std::vector<std::string> emit_report(const EvalReport &report,
                                     const std::filesystem::path &out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> emitted;

  {
    auto out = open_out(out_dir / "metrics.csv");
    out << "key,value\n";
    out << "n_samples," << report.n_samples << "\n";
    out << "num_classes," << report.num_classes << "\n";
    out << "seed," << report.seed << "\n";
    out << "config_hash," << report.config_hash << "\n";
    for (const auto &[k, acc] : report.topk)
      out << "top" << k << "," << fmt(acc) << "\n";
    if (report.r2) out << "r2," << fmt(*report.r2) << "\n";
    for (const auto &[k, ratio] : report.hybrid)
      out << "hybrid_power_top" << k << "," << fmt(ratio) << "\n";
    if (report.txid) {
      out << "txid_tp," << report.txid->tp << "\n";
      out << "txid_fp," << report.txid->fp << "\n";
      out << "txid_fn," << report.txid->fn << "\n";
      out << "txid_tn," << report.txid->tn << "\n";
      out << "txid_accuracy," << fmt(report.txid->accuracy) << "\n";
      out << "txid_precision," << fmt(report.txid->precision) << "\n";
      out << "txid_recall," << fmt(report.txid->recall) << "\n";
    }
    if (report.top1_given_txid)
      out << "top1_given_txid," << fmt(*report.top1_given_txid) << "\n";
    emitted.push_back("metrics.csv");
  }

  if (report.confusion_counts.size() > 0) {
    auto out = open_out(out_dir / "confusion.csv");
    for (int t = 0; t < report.confusion_counts.rows(); ++t) {
      for (int p = 0; p < report.confusion_counts.cols(); ++p) {
        if (p > 0) out << ',';
        out << report.confusion_counts(t, p);
      }
      out << '\n';
    }
    emitted.push_back("confusion.csv");
    write_confusion_svg(report.confusion_counts, out_dir / "confusion.svg");
    emitted.push_back("confusion.svg");
  }

  if (!report.power_pairs.empty()) {
    auto out = open_out(out_dir / "scatter.csv");
    out << "top1_power,gt_power\n";
    for (const auto &[top1, gt] : report.power_pairs)
      out << fmt(top1) << ',' << fmt(gt) << '\n';
    emitted.push_back("scatter.csv");
    write_scatter_svg(report.power_pairs, out_dir / "scatter.svg");
    emitted.push_back("scatter.svg");
  }

  return emitted;
}

}  // namespace beamsense
