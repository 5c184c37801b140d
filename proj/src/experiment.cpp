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

#include "tcal/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <thread>

namespace tcal {

std::vector<std::uint64_t> seed_range(std::uint64_t count) {
  std::vector<std::uint64_t> seeds(count);
  for (std::uint64_t i = 0; i < count; ++i) seeds[i] = i;
  return seeds;
}

namespace {

constexpr std::uint64_t kTrainStream = 0;
constexpr std::uint64_t kTestStream = 1;
constexpr std::uint64_t kNoiseSalt = 0xa5a5a5a5ULL;

// Runs fn(i) for i in [0, count) on a small pool; results are stored by index
// so the output does not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
        next = count;
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

MetricSummary combine(const std::vector<MetricSummary>& runs, bool stddev,
                      const MetricSummary& mean) {
  MetricSummary out;
  const auto fields = {&MetricSummary::tce_p, &MetricSummary::tce_q,
                       &MetricSummary::tce_v, &MetricSummary::ece,
                       &MetricSummary::ace,   &MetricSummary::mce,
                       &MetricSummary::mce_q};
  const auto n = static_cast<double>(runs.size());
  for (auto field : fields) {
    double acc = 0.0;
    for (const auto& r : runs) {
      const double v = r.*field;
      acc += stddev ? (v - mean.*field) * (v - mean.*field) : v;
    }
    if (stddev) {
      out.*field = runs.size() > 1 ? std::sqrt(acc / (n - 1.0)) : 0.0;
    } else {
      out.*field = acc / n;
    }
  }
  return out;
}

}  // namespace

ScenarioData simulate_scenario(const Scenario& scenario, const ExperimentOptions& options,
                               std::uint64_t seed) {
  GdaConfig train_cfg = options.gda;
  train_cfg.prior = scenario.train_prior;
  train_cfg.seed = seed;
  GdaConfig test_cfg = options.gda;
  test_cfg.prior = scenario.test_prior;
  test_cfg.seed = seed;

  const GdaSample train = sample(train_cfg, scenario.n_train, kTrainStream);
  const GdaSample test = sample(test_cfg, scenario.n_test, kTestStream);
  const LogisticFit model = fit_logistic(train.x, train.y, options.newton);

  Eigen::VectorXd preds = model.predict(test.x);
  if (scenario.noise > 0.0) {
    preds = perturb_logit_normal(preds, scenario.noise, seed ^ kNoiseSalt);
  }
  return {Dataset(std::move(preds), test.y), model};
}

ScenarioResult run_scenario(const Scenario& scenario, const ExperimentOptions& options) {
  if (options.seeds.empty()) throw ArgumentError("experiment: no seeds");
  if (!(scenario.train_prior > 0.0 && scenario.train_prior < 1.0)) {
    throw ArgumentError("experiment: training prevalence must lie in (0,1)");
  }
  if (!(scenario.test_prior >= 0.0 && scenario.test_prior <= 1.0)) {
    throw ArgumentError("experiment: test prevalence must lie in [0,1]");
  }
  options.metrics.test.validate();

  ScenarioResult result;
  result.scenario = scenario;
  result.seeds = options.seeds;
  result.runs.resize(options.seeds.size());
  parallel_for(options.seeds.size(), options.threads, [&](std::size_t i) {
    const ScenarioData data = simulate_scenario(scenario, options, options.seeds[i]);
    result.runs[i] = summarize(data.test, options.metrics);
  });
  result.mean = combine(result.runs, false, {});
  result.stddev = combine(result.runs, true, result.mean);
  return result;
}

std::vector<ScenarioResult> run_scenarios(const std::vector<Scenario>& scenarios,
                                          const ExperimentOptions& options) {
  std::vector<ScenarioResult> out;
  out.reserve(scenarios.size());
  for (const auto& s : scenarios) out.push_back(run_scenario(s, options));
  return out;
}

std::vector<Scenario> standard_scenarios() {
  return {
      {"50% vs 50%", 0.5, 0.5},  {"50% vs 40%", 0.5, 0.4},
      {"50% vs 60%", 0.5, 0.6},  {"1% vs 1%", 0.01, 0.01},
      {"1% vs 0%", 0.01, 0.0},   {"1% vs 2%", 0.01, 0.02},
  };
}

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::n_min:
      return "n_min";
    case SweepParameter::n_max:
      return "n_max";
    case SweepParameter::binsize_range:
      return "binsize_range";
    case SweepParameter::noise:
      return "noise";
    case SweepParameter::alpha:
      return "alpha";
    case SweepParameter::test_kind:
      return "test_kind";
    case SweepParameter::data_size:
      return "data_size";
    case SweepParameter::prevalence:
      return "prevalence";
  }
  return "";
}

SweepParameter parse_sweep_parameter(std::string_view text) {
  for (auto p : {SweepParameter::n_min, SweepParameter::n_max,
                 SweepParameter::binsize_range, SweepParameter::noise,
                 SweepParameter::alpha, SweepParameter::test_kind,
                 SweepParameter::data_size, SweepParameter::prevalence}) {
    if (text == to_string(p)) return p;
  }
  throw ArgumentError("unknown sweep parameter '" + std::string(text) + "'");
}

namespace {

double parse_number(std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ArgumentError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

Index as_count(double v, std::string_view what) {
  if (!(v >= 0.0) || v != std::floor(v)) {
    throw ArgumentError(std::string(what) + " must be a non-negative integer");
  }
  return static_cast<Index>(v);
}

}  // namespace

SweepPoint parse_sweep_point(SweepParameter parameter, std::string_view text) {
  SweepPoint point;
  point.label = std::string(text);
  switch (parameter) {
    case SweepParameter::test_kind:
      point.test = parse_test_kind(text);
      break;
    case SweepParameter::binsize_range: {
      const auto colon = text.find(':');
      if (colon == std::string_view::npos) {
        throw ArgumentError("binsize range must be written lo:hi");
      }
      point.value = parse_number(text.substr(0, colon));
      point.value_hi = parse_number(text.substr(colon + 1));
      break;
    }
    default:
      point.value = parse_number(text);
      break;
  }
  return point;
}

namespace {

// Applies one grid point to copies of the scenario and options.
void apply_point(SweepParameter parameter, const SweepPoint& point, Scenario& scenario,
                 ExperimentOptions& options, bool miscalibrated) {
  auto& strategy = options.metrics.tce_strategy;
  const auto [base_min, base_max] = strategy.block_limits(scenario.n_test);
  switch (parameter) {
    case SweepParameter::n_min: {
      const Index lo = as_count(point.value, "n_min");
      strategy.n_min = lo;
      strategy.n_max = std::max(base_max, lo);
      break;
    }
    case SweepParameter::n_max: {
      const Index hi = as_count(point.value, "n_max");
      strategy.n_max = hi;
      strategy.n_min = std::min(base_min, hi);
      break;
    }
    case SweepParameter::binsize_range:
      strategy.n_min = as_count(point.value, "range lower bound");
      strategy.n_max = as_count(point.value_hi, "range upper bound");
      break;
    case SweepParameter::noise:
      if (!(point.value >= 0.0)) throw ArgumentError("noise must be non-negative");
      scenario.noise = point.value;
      break;
    case SweepParameter::alpha:
      options.metrics.test.alpha = point.value;
      options.metrics.test.validate();
      break;
    case SweepParameter::test_kind:
      options.metrics.test.kind = point.test;
      break;
    case SweepParameter::data_size:
      scenario.n_test = as_count(point.value, "data size");
      if (scenario.n_test < 1) throw ArgumentError("data size must be positive");
      strategy.n_min.reset();
      strategy.n_max.reset();
      break;
    case SweepParameter::prevalence: {
      const double p = point.value;
      if (!(p > 0.0 && p < 1.0)) throw ArgumentError("prevalence must lie in (0,1)");
      scenario.train_prior = p;
      // Shifted test prevalence for the miscalibrated arm: ten points lower
      // above 20%, two points lower below.
      scenario.test_prior = miscalibrated ? (p >= 0.2 - 1e-12 ? p - 0.1
                                                               : std::max(0.0, p - 0.02))
                                          : p;
      break;
    }
  }
}

}  // namespace

std::vector<SweepEntry> run_sweep(SweepParameter parameter,
                                  const std::vector<std::string>& grid,
                                  const Scenario& base, const ExperimentOptions& options) {
  std::vector<SweepEntry> out;
  for (const bool miscalibrated : {false, true}) {
    for (const auto& text : grid) {
      SweepEntry entry;
      entry.scenario = miscalibrated ? "miscalibrated" : "calibrated";
      Scenario scenario = base;
      scenario.train_prior = 0.5;
      scenario.test_prior = miscalibrated ? 0.4 : 0.5;
      ExperimentOptions local = options;
      try {
        entry.point = parse_sweep_point(parameter, text);
        apply_point(parameter, entry.point, scenario, local, miscalibrated);
        scenario.name = entry.scenario + " " + std::string(to_string(parameter)) + "=" +
                        entry.point.label;
        entry.result = run_scenario(scenario, local);
      } catch (const std::exception& e) {
        entry.point.label = text;
        entry.error = e.what();
      }
      out.push_back(std::move(entry));
    }
  }
  return out;
}

}  // namespace tcal
