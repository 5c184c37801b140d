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

#include <json.hpp>

#include "tcal/core.hpp"
#include "tcal/stattest.hpp"

namespace tcal {

enum class DiagramKind { standard, test_based };

std::string_view to_string(DiagramKind kind);
DiagramKind parse_diagram_kind(std::string_view text);

inline constexpr int kDensityBuckets = 20;
inline constexpr int kHistogramBuckets = 50;

struct Quartiles {
  double lower = 0.0;
  double median = 0.0;
  double upper = 0.0;
};

struct DiagramBin {
  Bin interval;
  Index count = 0;
  /// NaN for empty bins.
  double p_hat = 0.0;
  double q_bar = 0.0;
  /// Test-based diagrams only.
  std::optional<double> rejection_percentage;
  std::optional<Quartiles> quartiles;
  /// Prediction counts in kDensityBuckets equal slices of the interval.
  std::vector<Index> density;
};

/// Everything needed to draw a standard or test-based reliability diagram.
struct DiagramSpec {
  DiagramKind kind = DiagramKind::standard;
  Index total = 0;
  std::vector<DiagramBin> bins;
  /// Counts of all predictions in kHistogramBuckets slices of [0,1].
  std::vector<Index> histogram;
  /// Set for test-based diagrams.
  std::optional<TestConfig> test;
};

/// Builds the diagram data. Test-based diagrams need `test`, and their
/// rejection percentages are the per-bin losses of tce().
DiagramSpec build_diagram(const Dataset& dataset, const BinSet& bins,
                          const std::optional<TestConfig>& test, DiagramKind kind);

/// Renders an SVG 1.1 document. Output is a pure function of the inputs.
std::string render_svg(const DiagramSpec& spec, int width = 720, int height = 540);

nlohmann::json to_json(const DiagramSpec& spec);

}  // namespace tcal
