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

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "tcal/binning.hpp"
#include "tcal/core.hpp"
#include "tcal/stattest.hpp"

namespace tcal {

enum class NormKind { weighted_l1, sup };

std::string_view to_string(NormKind kind);
/// Accepts "wl1" / "weighted_l1" and "sup".
NormKind parse_norm_kind(std::string_view text);

/// Aggregates per-bin losses. Empty bins carry zero weight and are skipped.
///
/// weighted_l1: sum_b (N_b / N) |v_b|;  sup: max_b |v_b| over non-empty bins.
template <typename LossVec, typename CountVec>
double apply_norm(NormKind kind, const Eigen::DenseBase<LossVec>& losses,
                  const Eigen::DenseBase<CountVec>& counts) {
  using Scalar = typename LossVec::Scalar;
  const auto total = static_cast<long double>(counts.derived().sum());
  long double acc = 0.0L;
  for (Eigen::Index b = 0; b < losses.size(); ++b) {
    if (counts.derived()[b] == 0) continue;
    const long double v = std::abs(static_cast<long double>(Scalar(losses.derived()[b])));
    if (kind == NormKind::weighted_l1) {
      acc += static_cast<long double>(counts.derived()[b]) / total * v;
    } else if (v > acc) {
      acc = v;
    }
  }
  return static_cast<double>(acc);
}

/// Per-bin entry of a metric report.
struct BinReport {
  Bin interval;
  Index count = 0;
  double p_hat = 0.0;
  double q_bar = 0.0;
  double loss = 0.0;
  double weight = 0.0;
};

/// A calibration error value with its per-bin breakdown.
struct MetricReport {
  std::string metric;
  double value = 0.0;
  NormKind norm = NormKind::weighted_l1;
  std::vector<BinReport> per_bin;
  /// Snapshot of the configuration that produced the value.
  std::map<std::string, std::string> config;
};

/// Loss of one non-empty bin.
using BinLoss = std::function<double(const Dataset&, const BinStats&)>;

/// General calibration error: per-bin losses aggregated by `norm`.
/// Throws ArgumentError when every bin is empty.
MetricReport gce(const Dataset& dataset, const BinSet& bins, const BinLoss& loss,
                 NormKind norm, std::string name = "GCE");

/// |P_b - Q_b|, the loss shared by ECE, ACE and MCE.
double absolute_gap_loss(const Dataset& dataset, const BinStats& bin);

MetricReport ece(const Dataset& dataset, Index bins = 10);
MetricReport ace(const Dataset& dataset, Index bins = 10);
MetricReport mce(const Dataset& dataset, Index bins = 10,
                 BinKind bins_kind = BinKind::equispaced);

/// Percentage of predictions in the bin whose value is rejected as the
/// success probability of the bin's labels.
double rejection_percentage(const Dataset& dataset, const BinStats& bin,
                            const TestConfig& cfg);

/// Test-based calibration error in [0,100].
MetricReport tce(const Dataset& dataset, const BinSet& bins, const TestConfig& cfg,
                 NormKind norm = NormKind::weighted_l1);

struct TceVariants {
  MetricReport pava_bc;    // TCE(P)
  MetricReport quantile;   // TCE(Q)
  MetricReport pava;       // TCE(V)
};

/// TCE under PAVA-BC, quantile and PAVA bins. `pava_bc_strategy` carries the
/// block limits (defaults N/20, N/5); `quantile_count` the B of TCE(Q).
TceVariants tce_variants(const Dataset& dataset, const TestConfig& cfg,
                         const BinStrategy& pava_bc_strategy = BinStrategy::pava_bc(),
                         Index quantile_count = 10,
                         NormKind norm = NormKind::weighted_l1);

/// Mean of one-vs-rest TCEs. `probabilities` is N x K with rows on the
/// simplex (tolerance 1e-9); `labels` take values 1..K. Bins are rebuilt for
/// every class with `strategy`.
double tce_classwise(const Eigen::Ref<const Eigen::MatrixXd>& probabilities,
                     const Eigen::Ref<const Eigen::VectorXi>& labels,
                     const TestConfig& cfg,
                     const BinStrategy& strategy = BinStrategy::pava_bc(),
                     NormKind norm = NormKind::weighted_l1);

/// All seven columns of the comparison tables for one prediction set.
struct MetricSummary {
  double tce_p = 0.0;
  double tce_q = 0.0;
  double tce_v = 0.0;
  double ece = 0.0;
  double ace = 0.0;
  double mce = 0.0;
  double mce_q = 0.0;
};

struct SummaryOptions {
  TestConfig test;
  BinStrategy tce_strategy = BinStrategy::pava_bc();
  Index count = 10;
  NormKind norm = NormKind::weighted_l1;
};

MetricSummary summarize(const Dataset& dataset, const SummaryOptions& options);

}  // namespace tcal
