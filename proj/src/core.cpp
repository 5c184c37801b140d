/*
 * Copyright 2026 The tcal Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "tcal/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace tcal {

Dataset::Dataset(Eigen::VectorXd predictions, Eigen::VectorXi labels)
    : predictions_(std::move(predictions)), labels_(std::move(labels)) {
  if (predictions_.size() != labels_.size()) {
    throw ArgumentError("dataset: " + std::to_string(predictions_.size()) +
                        " predictions but " + std::to_string(labels_.size()) +
                        " labels");
  }
  if (predictions_.size() == 0) {
    throw ArgumentError("dataset: no records");
  }
  for (Index i = 0; i < predictions_.size(); ++i) {
    const double p = predictions_[i];
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ArgumentError("dataset: row " + std::to_string(i + 1) +
                          ": prediction " + std::to_string(p) +
                          " outside [0,1]");
    }
    if (labels_[i] != 0 && labels_[i] != 1) {
      throw ArgumentError("dataset: row " + std::to_string(i + 1) +
                          ": label " + std::to_string(labels_[i]) +
                          " not in {0,1}");
    }
  }
}

SortedView sorted_view(const Dataset& dataset) {
  const Index n = dataset.size();
  SortedView view;
  view.order.resize(static_cast<std::size_t>(n));
  std::iota(view.order.begin(), view.order.end(), Index{0});
  const auto& preds = dataset.predictions();
  std::stable_sort(view.order.begin(), view.order.end(),
                   [&](Index a, Index b) { return preds[a] < preds[b]; });
  view.predictions.resize(n);
  view.labels.resize(n);
  for (Index r = 0; r < n; ++r) {
    view.predictions[r] = preds[view.order[r]];
    view.labels[r] = dataset.label(view.order[r]);
  }
  return view;
}

BinSet::BinSet() = default;

BinSet::BinSet(std::vector<double> interior) : interior_(std::move(interior)) {}

BinSet BinSet::from_boundaries(std::vector<double> interior) {
  for (std::size_t i = 0; i < interior.size(); ++i) {
    if (!(interior[i] > 0.0 && interior[i] < 1.0)) {
      throw ArgumentError("binset: boundary " + std::to_string(interior[i]) +
                          " not inside (0,1)");
    }
    if (i > 0 && !(interior[i] > interior[i - 1])) {
      throw ArgumentError("binset: boundaries not strictly increasing");
    }
  }
  return BinSet(std::move(interior));
}

Bin BinSet::bin(Index b) const {
  if (b < 0 || b >= count()) {
    throw ArgumentError("binset: bin index out of range");
  }
  const auto k = static_cast<std::size_t>(b);
  Bin out;
  out.lower = b == 0 ? 0.0 : interior_[k - 1];
  out.upper = k == interior_.size() ? 1.0 : interior_[k];
  out.closed_upper = k == interior_.size();
  return out;
}

std::vector<Bin> BinSet::bins() const {
  std::vector<Bin> out;
  out.reserve(static_cast<std::size_t>(count()));
  for (Index b = 0; b < count(); ++b) out.push_back(bin(b));
  return out;
}

Index BinSet::locate(double p) const {
  // Number of interior boundaries <= p, which implements [L,R) membership.
  return static_cast<Index>(
      std::upper_bound(interior_.begin(), interior_.end(), p) -
      interior_.begin());
}

double BinStats::calibration_gap() const {
  if (count == 0) return std::numeric_limits<double>::quiet_NaN();
  const long double gap =
      std::fabs(static_cast<long double>(positives) - prediction_sum) /
      static_cast<long double>(count);
  return static_cast<double>(gap);
}

double BinStats::label_variance() const {
  if (count == 0) return 0.0;
  // Mean of (y - p)^2 for 0/1 labels reduces to k (n - k) / n^2.
  const auto k = static_cast<long double>(positives);
  const auto n = static_cast<long double>(count);
  return static_cast<double>(k * (n - k) / (n * n));
}

Index BinnedData::nonempty_count() const {
  return std::count_if(stats.begin(), stats.end(),
                       [](const BinStats& s) { return !s.empty(); });
}

BinnedData partition(const Dataset& dataset, const BinSet& bins) {
  BinnedData out;
  out.bins = bins;
  out.total = dataset.size();
  out.stats.resize(static_cast<std::size_t>(bins.count()));
  for (Index b = 0; b < bins.count(); ++b) {
    out.stats[static_cast<std::size_t>(b)].interval = bins.bin(b);
  }

  const SortedView view = sorted_view(dataset);
  for (Index r = 0; r < dataset.size(); ++r) {
    const Index i = view.order[static_cast<std::size_t>(r)];
    auto& s = out.stats[static_cast<std::size_t>(bins.locate(dataset.prediction(i)))];
    s.members.push_back(i);
    s.count += 1;
    s.positives += dataset.label(i);
    s.prediction_sum += static_cast<long double>(dataset.prediction(i));
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (auto& s : out.stats) {
    s.weight = static_cast<double>(s.count) / static_cast<double>(out.total);
    if (s.count == 0) {
      s.p_hat = nan;
      s.q_bar = nan;
      continue;
    }
    s.p_hat = static_cast<double>(static_cast<long double>(s.positives) /
                                  static_cast<long double>(s.count));
    s.q_bar = static_cast<double>(s.prediction_sum /
                                  static_cast<long double>(s.count));
  }
  return out;
}

}  // namespace tcal
