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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace tcal {

using Index = Eigen::Index;

/// Raised on violated preconditions of any public operation.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Paired model predictions in [0,1] and binary labels.
///
/// Immutable after construction. The classifier itself is never stored,
/// only its outputs on the evaluation points.
class Dataset {
 public:
  /// Validates every record; throws ArgumentError naming the first bad row
  /// (1-based) when a prediction is outside [0,1] or a label is not 0/1.
  Dataset(Eigen::VectorXd predictions, Eigen::VectorXi labels);

  Index size() const { return predictions_.size(); }
  const Eigen::VectorXd& predictions() const { return predictions_; }
  const Eigen::VectorXi& labels() const { return labels_; }

  double prediction(Index i) const { return predictions_[i]; }
  int label(Index i) const { return labels_[i]; }

  Index positives() const { return labels_.sum(); }

 private:
  Eigen::VectorXd predictions_;
  Eigen::VectorXi labels_;
};

/// Records co-sorted ascending by prediction. Ties keep input order.
struct SortedView {
  Eigen::VectorXd predictions;
  Eigen::VectorXi labels;
  /// order[r] is the dataset index of the r-th smallest prediction.
  std::vector<Index> order;
};

SortedView sorted_view(const Dataset& dataset);

/// Interval [lower, upper), or [lower, upper] when closed_upper is set.
struct Bin {
  double lower = 0.0;
  double upper = 1.0;
  bool closed_upper = true;

  bool contains(double p) const {
    return p >= lower && (p < upper || (closed_upper && p == upper));
  }
};

/// Ordered contiguous bins whose union is exactly [0,1].
class BinSet {
 public:
  /// The single bin [0,1].
  BinSet();

  /// Builds bins from strictly increasing interior boundaries in (0,1).
  static BinSet from_boundaries(std::vector<double> interior);

  Index count() const { return static_cast<Index>(interior_.size()) + 1; }
  Bin bin(Index b) const;
  std::vector<Bin> bins() const;
  const std::vector<double>& interior_boundaries() const { return interior_; }

  /// Index of the bin containing p, for p in [0,1].
  Index locate(double p) const;

  bool operator==(const BinSet&) const = default;

 private:
  explicit BinSet(std::vector<double> interior);
  std::vector<double> interior_;
};

/// Per-bin subset statistics of a partition.
struct BinStats {
  Bin interval;
  /// Dataset indices of members, ascending by prediction (stable).
  std::vector<Index> members;
  Index count = 0;
  Index positives = 0;
  /// Sum of member predictions, accumulated in extended precision.
  long double prediction_sum = 0.0L;
  /// Empirical label mean; NaN when empty.
  double p_hat = 0.0;
  /// Mean prediction; NaN when empty.
  double q_bar = 0.0;
  /// count / N.
  double weight = 0.0;

  bool empty() const { return count == 0; }
  /// |p_hat - q_bar| formed from the raw sums so it is correctly rounded.
  double calibration_gap() const;
  /// Mean squared deviation of member labels from p_hat.
  double label_variance() const;
};

struct BinnedData {
  BinSet bins;
  Index total = 0;
  std::vector<BinStats> stats;

  Index nonempty_count() const;
};

/// Assigns every record to the unique bin containing its prediction.
/// Empty bins are kept with count 0 and NaN p_hat / q_bar.
BinnedData partition(const Dataset& dataset, const BinSet& bins);

}  // namespace tcal
