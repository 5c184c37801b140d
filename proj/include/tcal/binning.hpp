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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "tcal/core.hpp"

namespace tcal {

enum class BinKind { equispaced, quantile, pava, pava_bc };

std::string_view to_string(BinKind kind);
/// Accepts the CLI spellings: equispaced, quantile, pava, pava-bc.
BinKind parse_bin_kind(std::string_view text);

/// How to build bins for a dataset.
///
/// For pava_bc, explicit n_min / n_max win over the fractions; otherwise
/// N_min = floor(N * n_min_frac) and N_max = max(1, floor(N * n_max_frac)).
struct BinStrategy {
  BinKind kind = BinKind::pava_bc;
  Index count = 10;
  std::optional<Index> n_min;
  std::optional<Index> n_max;
  double n_min_frac = 1.0 / 20.0;
  double n_max_frac = 1.0 / 5.0;

  static BinStrategy of(BinKind kind, Index b = 10) {
    BinStrategy s;
    s.kind = kind;
    s.count = b;
    return s;
  }
  static BinStrategy equispaced(Index b) { return of(BinKind::equispaced, b); }
  static BinStrategy quantile(Index b) { return of(BinKind::quantile, b); }
  static BinStrategy pava() { return of(BinKind::pava); }
  static BinStrategy pava_bc() { return of(BinKind::pava_bc); }
  static BinStrategy pava_bc(Index n_min, Index n_max) {
    BinStrategy s = of(BinKind::pava_bc);
    s.n_min = n_min;
    s.n_max = n_max;
    return s;
  }

  /// Resolved (N_min, N_max) for a dataset of size n.
  std::pair<Index, Index> block_limits(Index n) const;
  /// Human-readable summary, e.g. "pava-bc(300,1200)" or "quantile(10)".
  std::string describe(Index n) const;
};

/// Piecewise-constant fit of a label sequence, with its block structure.
struct IsotonicFit {
  struct Block {
    Index start = 0;
    Index length = 0;
    /// Number of ones among the covered labels.
    Index positives = 0;
    double mean() const {
      return static_cast<double>(positives) / static_cast<double>(length);
    }
  };

  Eigen::VectorXd fitted;
  std::vector<Block> blocks;
};

BinSet equispaced_bins(Index count);

/// Boundaries at midpoints of the order statistics straddling each j/B
/// quantile; ties are never split and coinciding boundaries collapse, so the
/// result may have fewer than `count` bins.
BinSet quantile_bins(const Dataset& dataset, Index count);

/// Least-squares monotone non-decreasing fit by pool-adjacent-violators.
IsotonicFit pava(const Eigen::Ref<const Eigen::VectorXi>& labels_sorted);

/// Pool-adjacent-violators with block-size constraints. Every block has at
/// most n_max labels and the last block at least min(n_min, N). The fit may
/// mildly violate monotonicity.
IsotonicFit pava_bc(const Eigen::Ref<const Eigen::VectorXi>& labels_sorted,
                    Index n_min, Index n_max);

/// Turns the change points of a fit into bin boundaries at the midpoints of
/// the straddling predictions. A boundary that would fall between two equal
/// predictions moves to the nearest strictly increasing gap, searching right
/// first; coinciding boundaries collapse.
BinSet bins_from_fit(const IsotonicFit& fit,
                     const Eigen::Ref<const Eigen::VectorXd>& preds_sorted);

/// Bins for `dataset` by the given strategy.
BinSet make_bins(const Dataset& dataset, const BinStrategy& strategy);

/// Weighted within-bin label variance, (1/N) sum_b sum_{i in b} (y_i - P_b)^2.
double total_error(const Dataset& dataset, const BinSet& bins);

/// Unweighted mean of the within-bin label variance over non-empty bins.
double within_bin_error_avg(const Dataset& dataset, const BinSet& bins);

struct OptimalPartition {
  /// Block lengths, left to right.
  std::vector<Index> blocks;
  double objective = 0.0;
};

inline constexpr Index kBruteForceMaxSize = 16;

/// Exhaustive minimum of the weighted within-bin variance over contiguous
/// partitions with non-decreasing block means. Refuses N > 16.
OptimalPartition brute_force_optimal(
    const Eigen::Ref<const Eigen::VectorXi>& labels_sorted);

/// Indices b (b >= 1) of blocks whose mean is below the previous block's.
std::vector<Index> monotonicity_report(const IsotonicFit& fit);

}  // namespace tcal
