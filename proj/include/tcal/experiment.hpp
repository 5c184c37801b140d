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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tcal/metrics.hpp"
#include "tcal/synthdata.hpp"

namespace tcal {

/// One train/test prevalence pair of the simulation study.
struct Scenario {
  std::string name;
  double train_prior = 0.5;
  double test_prior = 0.5;
  Index n_train = 14000;
  Index n_test = 6000;
  /// Logit-normal noise applied to the test predictions.
  double noise = 0.0;
};

struct ExperimentOptions {
  /// Class means and scale; `prior` and `seed` are overwritten per run.
  GdaConfig gda;
  SummaryOptions metrics;
  std::vector<std::uint64_t> seeds;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;
  NewtonOptions newton;
};

/// Default seeds 0..count-1.
std::vector<std::uint64_t> seed_range(std::uint64_t count);

/// Test-set predictions and labels for one run, with the fitted model.
struct ScenarioData {
  Dataset test;
  LogisticFit model;
};

/// Fits the logistic model on a training draw and scores a test draw.
/// Streams 0/1 of `seed` feed the training and test samples; the noise
/// stream is derived from the seed as well.
ScenarioData simulate_scenario(const Scenario& scenario, const ExperimentOptions& options,
                               std::uint64_t seed);

/// Per-seed metric summaries plus their mean and standard deviation.
struct ScenarioResult {
  Scenario scenario;
  std::vector<std::uint64_t> seeds;
  std::vector<MetricSummary> runs;
  MetricSummary mean;
  MetricSummary stddev;
};

ScenarioResult run_scenario(const Scenario& scenario, const ExperimentOptions& options);

std::vector<ScenarioResult> run_scenarios(const std::vector<Scenario>& scenarios,
                                          const ExperimentOptions& options);

/// The six prevalence pairs of the controlled class-imbalance study.
std::vector<Scenario> standard_scenarios();

enum class SweepParameter {
  n_min,
  n_max,
  binsize_range,
  noise,
  alpha,
  test_kind,
  data_size,
  prevalence
};

std::string_view to_string(SweepParameter p);
SweepParameter parse_sweep_parameter(std::string_view text);

/// A grid value. Ranges are written "lo:hi" (binsize_range) and test kinds
/// by name; everything else is numeric.
struct SweepPoint {
  std::string label;
  double value = 0.0;
  double value_hi = 0.0;
  TestKind test = TestKind::binomial;
};

SweepPoint parse_sweep_point(SweepParameter parameter, std::string_view text);

struct SweepEntry {
  std::string scenario;
  SweepPoint point;
  std::optional<ScenarioResult> result;
  /// Set instead of `result` when the grid value is invalid.
  std::string error;
};

/// Runs the calibrated (50% vs 50%) and miscalibrated (50% vs 40%)
/// scenarios at every grid point. Invalid points yield error entries and
/// the sweep continues.
std::vector<SweepEntry> run_sweep(SweepParameter parameter,
                                  const std::vector<std::string>& grid,
                                  const Scenario& base,
                                  const ExperimentOptions& options);

}  // namespace tcal
