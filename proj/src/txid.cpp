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

#include "beamsense/txid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

namespace beamsense {

using nlohmann::json;

Eigen::VectorXd poly_expand(const Eigen::Vector2d &g_normalized, bool include_bias) {
  const double g1 = g_normalized.x();
  const double g2 = g_normalized.y();
  if (!std::isfinite(g1) || !std::isfinite(g2))
    throw NonFinite("poly_expand requires finite inputs");

  Eigen::VectorXd phi(include_bias ? 10 : 9);
  int i = 0;
  if (include_bias) phi(i++) = 1.0;
  phi(i++) = g1;
  phi(i++) = g2;
  phi(i++) = g1 * g1;
  phi(i++) = g1 * g2;
  phi(i++) = g2 * g2;
  phi(i++) = g1 * g1 * g1;
  phi(i++) = g1 * g1 * g2;
  phi(i++) = g1 * g2 * g2;
  phi(i++) = g2 * g2 * g2;
  return phi;
}

RegressionModel fit_regression(
    const std::vector<std::pair<Eigen::Vector2d, Eigen::Vector2d>> &pairs,
    bool include_bias, double ridge_lambda) {
  if (pairs.empty()) throw TooFewSamples("fit_regression needs at least 1 pair");

  RegressionModel model;
  model.include_bias = include_bias;

  const auto n = static_cast<double>(pairs.size());
  Eigen::Vector2d mean{0.0, 0.0};
  for (const auto &[g, target] : pairs) mean += g;
  mean /= n;
  Eigen::Vector2d var{0.0, 0.0};
  for (const auto &[g, target] : pairs)
    var += (g - mean).cwiseProduct(g - mean);
  var /= n;

  model.normalizer.mean = mean;
  for (int c = 0; c < 2; ++c) {
    const double sd = std::sqrt(var(c));
    if (sd < 1e-12) {
      model.normalizer.std(c) = 1.0;
      model.normalizer.degenerate[static_cast<std::size_t>(c)] = true;
    } else {
      model.normalizer.std(c) = sd;
    }
  }

  const int a = include_bias ? 10 : 9;
  Eigen::MatrixXd design(static_cast<Eigen::Index>(pairs.size()), a);
  Eigen::MatrixXd targets(static_cast<Eigen::Index>(pairs.size()), 2);
  for (std::size_t u = 0; u < pairs.size(); ++u) {
    design.row(static_cast<Eigen::Index>(u)) =
        poly_expand(model.normalizer.apply(pairs[u].first), include_bias)
            .transpose();
    targets.row(static_cast<Eigen::Index>(u)) = pairs[u].second.transpose();
  }

  Eigen::MatrixXd gram = design.transpose() * design;
  gram.diagonal().array() += ridge_lambda;
  const Eigen::FullPivLU<Eigen::MatrixXd> solver(gram);
  if (!solver.isInvertible())
    throw DegenerateDesign("regularized normal matrix is numerically singular");
  model.weights = solver.solve(design.transpose() * targets);
  if (!model.weights.allFinite())
    throw DegenerateDesign("regression solve produced non-finite weights");

  model.train_residual =
      (design * model.weights - targets).squaredNorm() / n;
  return model;
}

Eigen::Vector2d predict_center(const RegressionModel &model,
                               const Eigen::Vector2d &g) {
  if (!g.allFinite()) throw NonFinite("predict_center requires finite input");
  const Eigen::VectorXd phi =
      poly_expand(model.normalizer.apply(g), model.include_bias);
  Eigen::Vector2d out = model.weights.transpose() * phi;
  if (!out.allFinite()) throw NonFinite("predicted center is non-finite");
  return out;
}

Selection select_tx(const RelevantObjectMatrix &boxes,
                    const Eigen::Vector2d &predicted_center) {
  Selection sel;
  if (boxes.count() == 0) {
    sel.center = {std::clamp(predicted_center.x(), 0.0, 1.0),
                  std::clamp(predicted_center.y(), 0.0, 1.0)};
    return sel;
  }
  int best = 0;
  double best_dist = (boxes.rows.row(0).transpose() - predicted_center).norm();
  for (int i = 1; i < boxes.count(); ++i) {
    const double dist = (boxes.rows.row(i).transpose() - predicted_center).norm();
    if (dist < best_dist) {
      best_dist = dist;
      best = i;
    }
  }
  sel.row = best;
  sel.center = boxes.rows.row(best).transpose();
  return sel;
}

double TxidCounts::accuracy() const {
  return total() == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(total());
}

double TxidCounts::precision() const {
  const long denom = tp + fp;
  return denom == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(denom);
}

double TxidCounts::recall() const {
  const long denom = tp + fn;
  return denom == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(denom);
}

TxidCounts txid_metrics(const std::vector<std::optional<int>> &selections,
                        const std::vector<TxProvenance> &provenance) {
  if (selections.size() != provenance.size())
    throw LengthMismatch("selections and provenance must align");

  TxidCounts counts;
  for (std::size_t u = 0; u < selections.size(); ++u) {
    const auto &sel = selections[u];
    const auto &prov = provenance[u];
    if (prov.tx_present) {
      if (!prov.tx_row.has_value())
        ++counts.fn; // detector missed the transmitter
      else if (sel.has_value() && *sel == *prov.tx_row)
        ++counts.tp;
      else
        ++counts.fp; // pointed at the wrong box
    } else {
      if (sel.has_value())
        ++counts.fp;
      else
        ++counts.tn;
    }
  }
  return counts;
}

void save_regression(const RegressionModel &model,
                     const std::filesystem::path &path) {
  json j;
  j["feature_count"] = model.feature_count();
  j["include_bias"] = model.include_bias;
  j["train_residual"] = model.train_residual;
  j["normalizer"] = {
      {"mean", {model.normalizer.mean.x(), model.normalizer.mean.y()}},
      {"std", {model.normalizer.std.x(), model.normalizer.std.y()}},
      {"degenerate", {model.normalizer.degenerate[0], model.normalizer.degenerate[1]}},
  };
  json rows = json::array();
  for (int r = 0; r < model.weights.rows(); ++r)
    rows.push_back({model.weights(r, 0), model.weights(r, 1)});
  j["weights"] = std::move(rows);

  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

RegressionModel load_regression(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  json j;
  try {
    in >> j;
    RegressionModel model;
    model.include_bias = j.at("include_bias").get<bool>();
    model.train_residual = j.at("train_residual").get<double>();
    const auto &norm = j.at("normalizer");
    model.normalizer.mean = {norm.at("mean")[0].get<double>(),
                             norm.at("mean")[1].get<double>()};
    model.normalizer.std = {norm.at("std")[0].get<double>(),
                            norm.at("std")[1].get<double>()};
    model.normalizer.degenerate = {norm.at("degenerate")[0].get<bool>(),
                                   norm.at("degenerate")[1].get<bool>()};
    const auto &rows = j.at("weights");
    model.weights.resize(static_cast<Eigen::Index>(rows.size()), 2);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      model.weights(static_cast<Eigen::Index>(r), 0) = rows[r][0].get<double>();
      model.weights(static_cast<Eigen::Index>(r), 1) = rows[r][1].get<double>();
    }
    if (model.feature_count() != (model.include_bias ? 10 : 9))
      throw SchemaError("weight row count does not match the feature basis");
    return model;
  } catch (const json::exception &e) {
    throw SchemaError(std::string("regression file: ") + e.what());
  }
}

}  // namespace beamsense
