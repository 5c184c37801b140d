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

#include "tcal/binning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace tcal {

std::string_view to_string(BinKind kind) {
  switch (kind) {
    case BinKind::equispaced:
      return "equispaced";
    case BinKind::quantile:
      return "quantile";
    case BinKind::pava:
      return "pava";
    case BinKind::pava_bc:
      return "pava-bc";
  }
  return "pava-bc";
}

BinKind parse_bin_kind(std::string_view text) {
  if (text == "equispaced") return BinKind::equispaced;
  if (text == "quantile") return BinKind::quantile;
  if (text == "pava") return BinKind::pava;
  if (text == "pava-bc" || text == "pava_bc") return BinKind::pava_bc;
  throw ArgumentError("unknown bin strategy '" + std::string(text) + "'");
}

std::pair<Index, Index> BinStrategy::block_limits(Index n) const {
  const auto nd = static_cast<double>(n);
  const Index lo = n_min ? *n_min : static_cast<Index>(std::floor(nd * n_min_frac));
  const Index hi = n_max ? *n_max
                         : std::max<Index>(1, static_cast<Index>(std::floor(nd * n_max_frac)));
  return {lo, hi};
}

std::string BinStrategy::describe(Index n) const {
  switch (kind) {
    case BinKind::equispaced:
    case BinKind::quantile:
      return std::string(to_string(kind)) + "(" + std::to_string(count) + ")";
    case BinKind::pava:
      return "pava";
    case BinKind::pava_bc: {
      const auto [lo, hi] = block_limits(n);
      return "pava-bc(" + std::to_string(lo) + "," + std::to_string(hi) + ")";
    }
  }
  return {};
}

BinSet equispaced_bins(Index count) {
  if (count < 1) throw ArgumentError("equispaced_bins: bin count must be >= 1");
  std::vector<double> interior;
  interior.reserve(static_cast<std::size_t>(count - 1));
  for (Index b = 1; b < count; ++b) {
    interior.push_back(static_cast<double>(b) / static_cast<double>(count));
  }
  return BinSet::from_boundaries(std::move(interior));
}

namespace {

// Boundary for a cut requested between sorted[i-1] and sorted[i]. Returns
// nullopt when every prediction is tied.
std::optional<double> cut_between(const Eigen::Ref<const Eigen::VectorXd>& sorted,
                                  Index i) {
  const Index n = sorted.size();
  Index gap = -1;
  for (Index j = i; j < n; ++j) {
    if (sorted[j - 1] < sorted[j]) {
      gap = j;
      break;
    }
  }
  if (gap < 0) {
    for (Index j = i - 1; j >= 1; --j) {
      if (sorted[j - 1] < sorted[j]) {
        gap = j;
        break;
      }
    }
  }
  if (gap < 0) return std::nullopt;
  const double lo = sorted[gap - 1];
  const double hi = sorted[gap];
  double mid = lo + (hi - lo) / 2.0;
  // Adjacent doubles can round the midpoint down onto lo.
  if (!(mid > lo)) mid = hi;
  return mid;
}

BinSet bins_from_cuts(const Eigen::Ref<const Eigen::VectorXd>& sorted,
                      const std::vector<Index>& cuts) {
  std::vector<double> interior;
  for (Index i : cuts) {
    if (auto b = cut_between(sorted, i)) interior.push_back(*b);
  }
  std::sort(interior.begin(), interior.end());
  interior.erase(std::unique(interior.begin(), interior.end()), interior.end());
  // A midpoint can only reach 0 or 1 if the predictions do.
  std::erase_if(interior, [](double b) { return !(b > 0.0 && b < 1.0); });
  return BinSet::from_boundaries(std::move(interior));
}

void require_binary(const Eigen::Ref<const Eigen::VectorXi>& labels) {
  for (Index i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      throw ArgumentError("labels must be 0/1");
    }
  }
}

Eigen::VectorXd expand(const std::vector<IsotonicFit::Block>& blocks, Index n) {
  Eigen::VectorXd fitted(n);
  for (const auto& block : blocks) {
    fitted.segment(block.start, block.length).setConstant(block.mean());
  }
  return fitted;
}

}  // namespace

BinSet quantile_bins(const Dataset& dataset, Index count) {
  if (count < 1) throw ArgumentError("quantile_bins: bin count must be >= 1");
  const SortedView view = sorted_view(dataset);
  const Index n = dataset.size();
  std::vector<Index> cuts;
  for (Index j = 1; j < count; ++j) {
    const Index i = std::clamp<Index>(j * n / count, 1, n - 1);
    if (n > 1) cuts.push_back(i);
  }
  return bins_from_cuts(view.predictions, cuts);
}

IsotonicFit pava(const Eigen::Ref<const Eigen::VectorXi>& labels_sorted) {
  const Index n = labels_sorted.size();
  if (n == 0) throw ArgumentError("pava: empty input");
  require_binary(labels_sorted);

  // Pool while the previous block mean is >= the current one; means are
  // compared exactly as cross-multiplied integer sums.
  std::vector<IsotonicFit::Block> stack;
  stack.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    stack.push_back({i, 1, labels_sorted[i]});
    while (stack.size() > 1) {
      auto& cur = stack.back();
      auto& prev = stack[stack.size() - 2];
      if (prev.positives * cur.length < cur.positives * prev.length) break;
      prev.length += cur.length;
      prev.positives += cur.positives;
      stack.pop_back();
    }
  }
  IsotonicFit fit;
  fit.fitted = expand(stack, n);
  fit.blocks = std::move(stack);
  return fit;
}

IsotonicFit pava_bc(const Eigen::Ref<const Eigen::VectorXi>& labels_sorted,
                    Index n_min, Index n_max) {
  const Index n = labels_sorted.size();
  if (n == 0) throw ArgumentError("pava_bc: empty input");
  if (n_min < 0 || n_min > n_max || n_max > n) {
    throw ArgumentError("pava_bc: need 0 <= N_min <= N_max <= N, got N_min=" +
                        std::to_string(n_min) + " N_max=" + std::to_string(n_max) +
                        " N=" + std::to_string(n));
  }
  if (n_max < 1) throw ArgumentError("pava_bc: N_max must be >= 1");
  require_binary(labels_sorted);

  std::vector<IsotonicFit::Block> stack;
  stack.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n - n_min; ++i) {
    stack.push_back({i, 1, labels_sorted[i]});
    while (stack.size() > 1) {
      auto& cur = stack.back();
      auto& prev = stack[stack.size() - 2];
      const Index combined = prev.length + cur.length;
      if (combined > n_min) {
        if (combined > n_max) break;
        if (prev.positives * cur.length < cur.positives * prev.length) break;
      }
      prev.length = combined;
      prev.positives += cur.positives;
      stack.pop_back();
    }
  }

  // The trailing N_min labels join the last block if it stays within N_max,
  // otherwise they form a block of their own.
  if (n_min > 0) {
    const Index tail_start = n - n_min;
    const Index tail_positives = labels_sorted.tail(n_min).sum();
    if (!stack.empty() && stack.back().length + n_min <= n_max) {
      stack.back().length += n_min;
      stack.back().positives += tail_positives;
    } else {
      stack.push_back({tail_start, n_min, tail_positives});
    }
  }

  IsotonicFit fit;
  fit.fitted = expand(stack, n);
  fit.blocks = std::move(stack);
  return fit;
}

BinSet bins_from_fit(const IsotonicFit& fit,
                     const Eigen::Ref<const Eigen::VectorXd>& preds_sorted) {
  const Index n = fit.fitted.size();
  if (preds_sorted.size() != n) {
    throw ArgumentError("bins_from_fit: fit has " + std::to_string(n) +
                        " values but " + std::to_string(preds_sorted.size()) +
                        " predictions were given");
  }
  std::vector<Index> cuts;
  for (Index i = 1; i < n; ++i) {
    if (fit.fitted[i - 1] != fit.fitted[i]) cuts.push_back(i);
  }
  return bins_from_cuts(preds_sorted, cuts);
}

BinSet make_bins(const Dataset& dataset, const BinStrategy& strategy) {
  switch (strategy.kind) {
    case BinKind::equispaced:
      return equispaced_bins(strategy.count);
    case BinKind::quantile:
      return quantile_bins(dataset, strategy.count);
    case BinKind::pava: {
      const SortedView view = sorted_view(dataset);
      return bins_from_fit(pava(view.labels), view.predictions);
    }
    case BinKind::pava_bc: {
      const SortedView view = sorted_view(dataset);
      const auto [lo, hi] = strategy.block_limits(dataset.size());
      return bins_from_fit(pava_bc(view.labels, lo, hi), view.predictions);
    }
  }
  throw ArgumentError("make_bins: unknown strategy");
}

double total_error(const Dataset& dataset, const BinSet& bins) {
  const BinnedData binned = partition(dataset, bins);
  long double sum = 0.0L;
  for (const auto& s : binned.stats) {
    if (s.empty()) continue;
    const auto k = static_cast<long double>(s.positives);
    const auto nb = static_cast<long double>(s.count);
    sum += k * (nb - k) / nb;
  }
  return static_cast<double>(sum / static_cast<long double>(binned.total));
}

double within_bin_error_avg(const Dataset& dataset, const BinSet& bins) {
  const BinnedData binned = partition(dataset, bins);
  long double sum = 0.0L;
  Index used = 0;
  for (const auto& s : binned.stats) {
    if (s.empty()) continue;
    sum += s.label_variance();
    ++used;
  }
  return static_cast<double>(sum / static_cast<long double>(used));
}

OptimalPartition brute_force_optimal(
    const Eigen::Ref<const Eigen::VectorXi>& labels_sorted) {
  const Index n = labels_sorted.size();
  if (n == 0) throw ArgumentError("brute_force_optimal: empty input");
  if (n > kBruteForceMaxSize) {
    throw ArgumentError("brute_force_optimal: N=" + std::to_string(n) +
                        " exceeds the enumeration limit of " +
                        std::to_string(kBruteForceMaxSize));
  }
  require_binary(labels_sorted);

  OptimalPartition best;
  best.objective = std::numeric_limits<double>::infinity();
  // Bit i of mask set means a cut between positions i and i+1.
  const std::uint32_t masks = 1u << static_cast<unsigned>(n - 1);
  for (std::uint32_t mask = 0; mask < masks; ++mask) {
    std::vector<Index> lengths;
    double objective = 0.0;
    double previous_mean = -1.0;
    bool monotone = true;
    Index start = 0;
    for (Index i = 0; i < n && monotone; ++i) {
      const bool cut_after = i == n - 1 || ((mask >> i) & 1u);
      if (!cut_after) continue;
      const Index len = i - start + 1;
      double mean = 0.0;
      for (Index j = start; j <= i; ++j) mean += labels_sorted[j];
      mean /= static_cast<double>(len);
      if (mean < previous_mean) monotone = false;
      for (Index j = start; j <= i; ++j) {
        const double d = labels_sorted[j] - mean;
        objective += d * d;
      }
      previous_mean = mean;
      lengths.push_back(len);
      start = i + 1;
    }
    if (!monotone) continue;
    objective /= static_cast<double>(n);
    if (objective < best.objective) {
      best.objective = objective;
      best.blocks = std::move(lengths);
    }
  }
  return best;
}

std::vector<Index> monotonicity_report(const IsotonicFit& fit) {
  std::vector<Index> out;
  for (std::size_t b = 1; b < fit.blocks.size(); ++b) {
    const auto& prev = fit.blocks[b - 1];
    const auto& cur = fit.blocks[b];
    if (cur.positives * prev.length < prev.positives * cur.length) {
      out.push_back(static_cast<Index>(b));
    }
  }
  return out;
}

}  // namespace tcal
