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

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "tcal/diagram.hpp"
#include "tcal/metrics.hpp"
#include "tcal/synthdata.hpp"
#include "fixtures.hpp"
#include "xml_check.hpp"

namespace tcal {
namespace {

using testing::count_occurrences;
using testing::well_formed_xml;

using testing::golden_dataset;

Dataset fixture() { return testing::four_point_fixture(); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(BuildDiagram, SingleBinMeans) {
  const auto spec = build_diagram(fixture(), BinSet(), TestConfig{}, DiagramKind::test_based);
  ASSERT_EQ(spec.bins.size(), 1u);
  EXPECT_EQ(spec.bins[0].p_hat, 0.75);
  EXPECT_DOUBLE_EQ(spec.bins[0].q_bar, 0.525);
  EXPECT_EQ(spec.bins[0].count, 4);
  ASSERT_TRUE(spec.bins[0].quartiles.has_value());
  EXPECT_DOUBLE_EQ(spec.bins[0].quartiles->median, 0.5);
}

TEST(BuildDiagram, CalibratedConstantBin) {
  Eigen::VectorXd p = Eigen::VectorXd::Constant(10, 0.5);
  Eigen::VectorXi y(10);
  y << 1, 0, 1, 0, 1, 0, 1, 0, 1, 0;
  const auto spec =
      build_diagram(Dataset(p, y), BinSet(), TestConfig{}, DiagramKind::test_based);
  EXPECT_EQ(*spec.bins[0].rejection_percentage, 0.0);
}

TEST(BuildDiagram, TestBasedNeedsConfig) {
  EXPECT_THROW(build_diagram(fixture(), BinSet(), std::nullopt, DiagramKind::test_based),
               ArgumentError);
  const auto spec = build_diagram(fixture(), BinSet(), std::nullopt, DiagramKind::standard);
  EXPECT_FALSE(spec.bins[0].rejection_percentage.has_value());
}

TEST(BuildDiagram, NumbersComeFromReports) {
  const auto d = golden_dataset();
  const auto bins = make_bins(d, BinStrategy::pava_bc());
  const TestConfig cfg;
  const auto spec = build_diagram(d, bins, cfg, DiagramKind::test_based);
  const auto report = tce(d, bins, cfg);
  const auto binned = partition(d, bins);
  ASSERT_EQ(spec.bins.size(), report.per_bin.size());
  for (std::size_t b = 0; b < spec.bins.size(); ++b) {
    EXPECT_EQ(spec.bins[b].count, binned.stats[b].count);
    if (binned.stats[b].empty()) continue;
    EXPECT_EQ(*spec.bins[b].rejection_percentage, report.per_bin[b].loss);
    EXPECT_EQ(spec.bins[b].p_hat, binned.stats[b].p_hat);
    EXPECT_EQ(spec.bins[b].q_bar, binned.stats[b].q_bar);
  }
}

TEST(RenderSvg, SingleBinHasOnePHatMarker) {
  for (auto kind : {DiagramKind::standard, DiagramKind::test_based}) {
    const auto spec = build_diagram(fixture(), BinSet(), TestConfig{}, kind);
    const auto svg = render_svg(spec);
    std::string why;
    EXPECT_TRUE(well_formed_xml(svg, &why)) << why;
    EXPECT_EQ(count_occurrences(svg, "class=\"p-hat\""), 1u);
  }
}

TEST(RenderSvg, Deterministic) {
  const auto d = golden_dataset();
  const auto spec =
      build_diagram(d, make_bins(d, BinStrategy::pava_bc()), TestConfig{}, DiagramKind::test_based);
  EXPECT_EQ(render_svg(spec), render_svg(spec));
  EXPECT_EQ(to_json(spec).dump(), to_json(spec).dump());
  EXPECT_THROW(render_svg(spec, 0, 100), ArgumentError);
}

TEST(RenderSvg, MatchesGoldenFile) {
  const auto d = golden_dataset();
  const auto spec =
      build_diagram(d, make_bins(d, BinStrategy::pava_bc()), TestConfig{}, DiagramKind::test_based);
  const auto svg = render_svg(spec);
  const std::string path = std::string(TCAL_TEST_DATA) + "/golden_test_based.svg";
  const std::string golden = read_file(path);
  ASSERT_FALSE(golden.empty()) << "missing " << path;
  EXPECT_EQ(svg, golden);
}

TEST(DiagramJson, Schema) {
  const auto spec = build_diagram(fixture(), equispaced_bins(10), TestConfig{},
                                  DiagramKind::test_based);
  const auto j = to_json(spec);
  EXPECT_EQ(j["schema"], "tcal.diagram/1");
  EXPECT_EQ(j["bins"].size(), 10u);
  EXPECT_TRUE(j["bins"][0]["p_hat"].is_null());
  EXPECT_EQ(j["bins"][2]["p_hat"], 0.0);
  EXPECT_EQ(j["test"]["kind"], "binomial");
}

}  // namespace
}  // namespace tcal
