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

#include "beamsense/pipeline.hpp"

#include <algorithm>

namespace beamsense {

std::vector<LabeledPoint> training_points(const std::vector<SceneSample> &samples,
                                          Pipeline pipeline) {
  std::vector<LabeledPoint> points;
  points.reserve(samples.size());
  for (const auto &s : samples) {
    if (pipeline == Pipeline::Multi) {
      if (!s.true_tx_row) continue; // no ground-truth box to train on
      points.push_back(
          {s.boxes.rows.row(*s.true_tx_row).transpose(), s.optimal_beam});
    } else {
      if (s.boxes.count() == 0) continue;
      const int row = s.true_tx_row ? *s.true_tx_row : 0;
      points.push_back({s.boxes.rows.row(row).transpose(), s.optimal_beam});
    }
  }
  return points;
}

std::vector<EvalPoint> evaluation_points(const std::vector<SceneSample> &samples,
                                         Pipeline pipeline,
                                         const RegressionModel *regression) {
  if (pipeline == Pipeline::Multi && regression == nullptr)
    throw ConfigError("the multi pipeline needs a fitted regression model");

  std::vector<EvalPoint> points;
  points.reserve(samples.size());
  for (const auto &s : samples) {
    EvalPoint point;
    point.label = s.optimal_beam;
    point.provenance = {true, s.true_tx_row};
    point.power = s.power32.values;
    point.power_noisy = s.power32.noisy;

    if (pipeline == Pipeline::Multi) {
      const Selection sel = select_tx(s.boxes, predict_center(*regression, s.gps));
      point.x = sel.center;
      point.selected_row = sel.row;
      point.txid_correct =
          sel.row && s.true_tx_row && *sel.row == *s.true_tx_row;
    } else {
      if (s.boxes.count() == 0) continue; // nothing visible to predict from
      const int row = s.true_tx_row ? *s.true_tx_row : 0;
      point.x = s.boxes.rows.row(row).transpose();
      point.selected_row = row;
      point.txid_correct = s.true_tx_row.has_value();
    }
    points.push_back(std::move(point));
  }
  return points;
}

std::vector<std::pair<Eigen::Vector2d, Eigen::Vector2d>> regression_pairs(
    const std::vector<SceneSample> &samples) {
  std::vector<std::pair<Eigen::Vector2d, Eigen::Vector2d>> pairs;
  pairs.reserve(samples.size());
  for (const auto &s : samples)
    if (s.true_tx_row)
      pairs.emplace_back(s.gps, s.boxes.rows.row(*s.true_tx_row).transpose());
  return pairs;
}

EvalReport evaluate_pipeline(const MlpParams &params,
                             const std::vector<EvalPoint> &points,
                             Pipeline pipeline, const std::vector<int> &topk_list,
                             int num_classes) {
  if (points.empty()) throw EmptyDataset("nothing to evaluate");

  int k_max = 1;
  for (const int k : topk_list) k_max = std::max(k_max, k);
  k_max = std::min(k_max, params.outputs());

  std::vector<std::vector<int>> ranked, ranked_txid;
  std::vector<int> truths, preds, truths_txid;
  std::vector<Eigen::VectorXd> powers;
  bool any_noisy = false;
  for (const auto &point : points) {
    ranked.push_back(predict_topk(params, point.x, k_max));
    preds.push_back(ranked.back().front());
    truths.push_back(point.label);
    powers.push_back(point.power);
    any_noisy = any_noisy || point.power_noisy;
    if (pipeline == Pipeline::Multi && point.txid_correct) {
      ranked_txid.push_back(ranked.back());
      truths_txid.push_back(point.label);
    }
  }

  EvalReport report;
  report.num_classes = num_classes;
  report.n_samples = static_cast<long>(points.size());
  for (const int k : topk_list)
    report.topk[k] = topk_accuracy(ranked, truths, std::min(k, k_max));
  report.confusion_counts = confusion(preds, truths, num_classes);

  // Power scatter, normalized by the strongest ground-truth power so the
  // axes live in [0, 1].
  double max_power = 0.0;
  for (std::size_t u = 0; u < points.size(); ++u)
    max_power = std::max(max_power, powers[u](truths[u]));
  if (max_power > 0.0) {
    Eigen::VectorXd top1_power(points.size()), gt_power(points.size());
    for (std::size_t u = 0; u < points.size(); ++u) {
      top1_power(static_cast<Eigen::Index>(u)) = powers[u](preds[u]) / max_power;
      gt_power(static_cast<Eigen::Index>(u)) = powers[u](truths[u]) / max_power;
      report.power_pairs.emplace_back(top1_power(static_cast<Eigen::Index>(u)),
                                      gt_power(static_cast<Eigen::Index>(u)));
    }
    if ((gt_power.array() - gt_power.mean()).abs().maxCoeff() > 0.0)
      report.r2 = r2_power(top1_power, gt_power);
  }

  if (!any_noisy)
    for (const int k : topk_list)
      report.hybrid[k] = hybrid_sweep_power(ranked, powers, std::min(k, k_max));

  if (pipeline == Pipeline::Multi) {
    std::vector<std::optional<int>> selections;
    std::vector<TxProvenance> provenance;
    for (const auto &point : points) {
      selections.push_back(point.selected_row);
      provenance.push_back(point.provenance);
    }
    const TxidCounts counts = txid_metrics(selections, provenance);
    TxidBlock block;
    block.tp = counts.tp;
    block.fp = counts.fp;
    block.fn = counts.fn;
    block.tn = counts.tn;
    block.accuracy = counts.accuracy();
    block.precision = counts.precision();
    block.recall = counts.recall();
    report.txid = block;
    if (!ranked_txid.empty())
      report.top1_given_txid = topk_accuracy(ranked_txid, truths_txid, 1);
  }
  return report;
}

}  // namespace beamsense
