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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tcal/diagram.hpp"
#include "tcal/experiment.hpp"
#include "tcal/io.hpp"

namespace tcal::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsageError = 1,   // bad configuration or arguments
  kInputError = 2,   // unreadable or invalid prediction file
  kOutputError = 3,  // refused or failed to write outputs
};

/// Writes `<out>.json` and `<out>.txt` and prints the table. With several
/// inputs the table has one row per input.
int compute(const RunConfig& config, const std::vector<std::filesystem::path>& inputs,
            std::ostream& out, std::ostream& err);

struct DiagramOptions {
  DiagramKind kind = DiagramKind::test_based;
  /// Required for test-based diagrams.
  std::optional<TestConfig> test;
  int width = 720;
  int height = 540;
};

/// Writes `<out>.svg` and `<out>.json`; refuses to overwrite either.
int diagram(const RunConfig& config, const std::filesystem::path& input,
            const DiagramOptions& options, std::ostream& out, std::ostream& err);

struct SimulateOptions {
  /// Empty means the six standard prevalence pairs.
  std::vector<Scenario> scenarios;
  Index n_train = 14000;
  Index n_test = 6000;
  double noise = 0.0;
  /// When set, the test predictions of every (scenario, seed) are written
  /// there as CSV.
  std::optional<std::filesystem::path> emit_csv;
};

/// Parses "train:test" prevalence pairs such as "0.5:0.4".
Scenario parse_scenario(const std::string& text);

int simulate(const RunConfig& config, const SimulateOptions& options, std::ostream& out,
             std::ostream& err);

struct SweepOptions {
  SweepParameter parameter = SweepParameter::alpha;
  std::vector<std::string> grid;
  Index n_train = 14000;
  Index n_test = 6000;
};

int sweep(const RunConfig& config, const SweepOptions& options, std::ostream& out,
          std::ostream& err);

/// Full command-line entry point (used by the tcal binary).
int run(int argc, char** argv);

}  // namespace tcal::cli
