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

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tcal/core.hpp"
#include "tcal/experiment.hpp"
#include "tcal/metrics.hpp"

namespace tcal {

/// Failure to read a prediction file. `row` is the 1-based data row (the
/// header is row 0), or 0 when the error is not tied to a row.
class IngestError : public ArgumentError {
 public:
  enum class Kind { unreadable, empty_input, malformed_row, prediction_range, label_value };

  IngestError(Kind kind, Index row, const std::string& message)
      : ArgumentError(message), kind_(kind), row_(row) {}

  Kind kind() const { return kind_; }
  Index row() const { return row_; }

 private:
  Kind kind_;
  Index row_;
};

/// Parses `prediction,label` CSV text.
Dataset parse_csv(std::string_view text);
/// Parses a JSON array of {"prediction": p, "label": y} objects.
Dataset parse_json(std::string_view text);
/// Reads a file; `.json` files are parsed as JSON, everything else as CSV.
Dataset ingest(const std::filesystem::path& path);

/// CSV with 17 significant digits, so re-ingesting reproduces every value.
std::string to_csv(const Dataset& dataset);

/// Settings shared by all commands. Loaded from a flat `key = value` file,
/// then overridden from the command line.
struct RunConfig {
  BinKind bins = BinKind::pava_bc;
  Index count = 10;
  double n_min_frac = 1.0 / 20.0;
  double n_max_frac = 1.0 / 5.0;
  double alpha = 0.05;
  TestKind test = TestKind::binomial;
  NormKind norm = NormKind::weighted_l1;
  std::uint64_t seed = 0;
  std::uint64_t seeds = 20;
  unsigned threads = 0;
  std::filesystem::path out = "tcal_report";

  /// Throws ArgumentError on any value outside the binning / test ranges.
  void validate() const;

  BinStrategy strategy() const;
  TestConfig test_config() const { return {test, alpha}; }
  SummaryOptions summary_options() const;

  /// Applies `key = value` pairs; unknown keys are errors.
  void apply(const std::string& key, const std::string& value);
  nlohmann::json to_json() const;
};

/// Reads a flat key/value file. Blank lines and `#` comments are ignored.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

inline constexpr const char* kReportSchema = "tcal.report/1";

nlohmann::json to_json(const MetricReport& report);

/// One named input with every metric of the comparison tables.
struct ComputeResult {
  std::string name;
  Index size = 0;
  Index positives = 0;
  std::vector<MetricReport> metrics;  // TCE, TCE(Q), TCE(V), ECE, ACE, MCE, MCE(Q)
};

ComputeResult compute_all(const std::string& name, const Dataset& dataset,
                          const RunConfig& config);

nlohmann::json compute_report(const std::vector<ComputeResult>& results,
                              const RunConfig& config);
/// Rows of TCE, TCE(Q), TCE(V), ECE, ACE, MCE, MCE(Q), one per input.
std::string compute_table(const std::vector<ComputeResult>& results);

nlohmann::json simulate_report(const std::vector<ScenarioResult>& results,
                               const RunConfig& config, Index n_train, Index n_test);
/// Prevalence rows with mean (and stddev) over seeds.
std::string simulate_table(const std::vector<ScenarioResult>& results);

nlohmann::json sweep_report(SweepParameter parameter, const std::vector<SweepEntry>& entries,
                            const RunConfig& config);
std::string sweep_table(SweepParameter parameter, const std::vector<SweepEntry>& entries);

/// Writes text to a file, creating parent directories.
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace tcal
