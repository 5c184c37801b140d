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

#include "tcal/metrics.hpp"

#include <cmath>
#include <string>

namespace tcal {

std::string_view to_string(NormKind kind) {
  return kind == NormKind::sup ? "sup" : "wl1";
}

NormKind parse_norm_kind(std::string_view text) {
  if (text == "wl1" || text == "weighted_l1") return NormKind::weighted_l1;
  if (text == "sup") return NormKind::sup;
  throw ArgumentError("unknown norm '" + std::string(text) + "'");
}

MetricReport gce(const Dataset& dataset, const BinSet& bins, const BinLoss& loss,
                 NormKind norm, std::string name) {
  const BinnedData binned = partition(dataset, bins);
  if (binned.nonempty_count() == 0) {
    throw ArgumentError(name + ": every bin is empty");
  }
  const auto nbins = static_cast<Index>(binned.stats.size());
  Eigen::VectorXd losses = Eigen::VectorXd::Zero(nbins);
  Eigen::Matrix<Index, Eigen::Dynamic, 1> counts(nbins);

  MetricReport report;
  report.metric = std::move(name);
  report.norm = norm;
  report.per_bin.reserve(binned.stats.size());
  for (Index b = 0; b < nbins; ++b) {
    const auto& s = binned.stats[static_cast<std::size_t>(b)];
    counts[b] = s.count;
    if (!s.empty()) losses[b] = loss(dataset, s);
    report.per_bin.push_back({s.interval, s.count, s.p_hat, s.q_bar,
                              s.empty() ? 0.0 : losses[b], s.weight});
  }
  report.value = apply_norm(norm, losses, counts);
  report.config["norm"] = std::string(to_string(norm));
  report.config["bins"] = std::to_string(bins.count());
  return report;
}

double absolute_gap_loss(const Dataset&, const BinStats& bin) {
  return bin.calibration_gap();
}

MetricReport ece(const Dataset& dataset, Index bins) {
  auto r = gce(dataset, equispaced_bins(bins), absolute_gap_loss,
               NormKind::weighted_l1, "ECE");
  r.config["strategy"] = BinStrategy::equispaced(bins).describe(dataset.size());
  return r;
}

MetricReport ace(const Dataset& dataset, Index bins) {
  auto r = gce(dataset, quantile_bins(dataset, bins), absolute_gap_loss,
               NormKind::weighted_l1, "ACE");
  r.config["strategy"] = BinStrategy::quantile(bins).describe(dataset.size());
  return r;
}

MetricReport mce(const Dataset& dataset, Index bins, BinKind bins_kind) {
  if (bins_kind != BinKind::equispaced && bins_kind != BinKind::quantile) {
    throw ArgumentError("mce: bins must be equispaced or quantile");
  }
  const bool quantile = bins_kind == BinKind::quantile;
  const BinSet set = quantile ? quantile_bins(dataset, bins) : equispaced_bins(bins);
  auto r = gce(dataset, set, absolute_gap_loss, NormKind::sup,
               quantile ? "MCE(Q)" : "MCE");
  r.config["strategy"] = (quantile ? BinStrategy::quantile(bins)
                                   : BinStrategy::equispaced(bins))
                             .describe(dataset.size());
  return r;
}

double rejection_percentage(const Dataset& dataset, const BinStats& bin,
                            const TestConfig& cfg) {
  if (bin.empty()) throw ArgumentError("rejection_percentage: empty bin");
  // Every test in a bin shares (n, k), so one p-value per distinct
  // prediction suffices. Members are ordered by prediction.
  Index rejected = 0;
  std::size_t i = 0;
  while (i < bin.members.size()) {
    const double q = dataset.prediction(bin.members[i]);
    std::size_t j = i + 1;
    while (j < bin.members.size() && dataset.prediction(bin.members[j]) == q) ++j;
    if (reject(bin.count, bin.positives, q, cfg).rejected) {
      rejected += static_cast<Index>(j - i);
    }
    i = j;
  }
  return 100.0 * static_cast<double>(rejected) / static_cast<double>(bin.count);
}

MetricReport tce(const Dataset& dataset, const BinSet& bins, const TestConfig& cfg,
                 NormKind norm) {
  cfg.validate();
  auto loss = [&cfg](const Dataset& d, const BinStats& s) {
    return rejection_percentage(d, s, cfg);
  };
  auto r = gce(dataset, bins, loss, norm, "TCE");
  r.config["alpha"] = std::to_string(cfg.alpha);
  r.config["test"] = std::string(to_string(cfg.kind));
  return r;
}

namespace {

MetricReport tce_with(const Dataset& dataset, const BinStrategy& strategy,
                      const TestConfig& cfg, NormKind norm, const char* name) {
  auto r = tce(dataset, make_bins(dataset, strategy), cfg, norm);
  r.metric = name;
  r.config["strategy"] = strategy.describe(dataset.size());
  return r;
}

}  // namespace

TceVariants tce_variants(const Dataset& dataset, const TestConfig& cfg,
                         const BinStrategy& pava_bc_strategy, Index quantile_count,
                         NormKind norm) {
  if (pava_bc_strategy.kind != BinKind::pava_bc) {
    throw ArgumentError("tce_variants: first strategy must be pava-bc");
  }
  return {tce_with(dataset, pava_bc_strategy, cfg, norm, "TCE(P)"),
          tce_with(dataset, BinStrategy::quantile(quantile_count), cfg, norm, "TCE(Q)"),
          tce_with(dataset, BinStrategy::pava(), cfg, norm, "TCE(V)")};
}

double tce_classwise(const Eigen::Ref<const Eigen::MatrixXd>& probabilities,
                     const Eigen::Ref<const Eigen::VectorXi>& labels,
                     const TestConfig& cfg, const BinStrategy& strategy,
                     NormKind norm) {
  const Index n = probabilities.rows();
  const Index classes = probabilities.cols();
  if (classes < 2) throw ArgumentError("tce_classwise: need at least two classes");
  if (labels.size() != n) {
    throw ArgumentError("tce_classwise: row count and label count differ");
  }
  for (Index i = 0; i < n; ++i) {
    const auto row = probabilities.row(i);
    if ((row.array() < 0.0).any() || (row.array() > 1.0).any() ||
        std::abs(row.sum() - 1.0) > 1e-9) {
      throw ArgumentError("tce_classwise: row " + std::to_string(i + 1) +
                          " is not a probability vector");
    }
    if (labels[i] < 1 || labels[i] > classes) {
      throw ArgumentError("tce_classwise: row " + std::to_string(i + 1) +
                          ": label outside 1.." + std::to_string(classes));
    }
  }

  double sum = 0.0;
  for (Index k = 0; k < classes; ++k) {
    const Eigen::VectorXi one_vs_rest = (labels.array() == k + 1).cast<int>();
    const Dataset d(probabilities.col(k), one_vs_rest);
    sum += tce(d, make_bins(d, strategy), cfg, norm).value;
  }
  return sum / static_cast<double>(classes);
}

MetricSummary summarize(const Dataset& dataset, const SummaryOptions& options) {
  MetricSummary out;
  out.tce_p = tce(dataset, make_bins(dataset, options.tce_strategy), options.test,
                  options.norm)
                  .value;
  out.tce_q = tce(dataset, quantile_bins(dataset, options.count), options.test,
                  options.norm)
                  .value;
  out.tce_v = tce(dataset, make_bins(dataset, BinStrategy::pava()), options.test,
                  options.norm)
                  .value;
  out.ece = ece(dataset, options.count).value;
  out.ace = ace(dataset, options.count).value;
  out.mce = mce(dataset, options.count, BinKind::equispaced).value;
  out.mce_q = mce(dataset, options.count, BinKind::quantile).value;
  return out;
}

}  // namespace tcal
