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

#include "tcal/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "tcal/metrics.hpp"

namespace tcal {

std::string_view to_string(DiagramKind kind) {
  return kind == DiagramKind::test_based ? "test_based" : "standard";
}

DiagramKind parse_diagram_kind(std::string_view text) {
  if (text == "standard") return DiagramKind::standard;
  if (text == "test_based" || text == "test-based") return DiagramKind::test_based;
  throw ArgumentError("unknown diagram kind '" + std::string(text) + "'");
}

namespace {

// Linear interpolation between order statistics of an ascending sequence.
double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

DiagramSpec build_diagram(const Dataset& dataset, const BinSet& bins,
                          const std::optional<TestConfig>& test, DiagramKind kind) {
  if (kind == DiagramKind::test_based && !test) {
    throw ArgumentError("diagram: a test-based diagram needs a test configuration");
  }
  const BinnedData binned = partition(dataset, bins);

  DiagramSpec spec;
  spec.kind = kind;
  spec.total = binned.total;
  spec.histogram.assign(kHistogramBuckets, 0);
  for (Index i = 0; i < dataset.size(); ++i) {
    const auto bucket = std::min<Index>(
        kHistogramBuckets - 1,
        static_cast<Index>(std::floor(dataset.prediction(i) * kHistogramBuckets)));
    spec.histogram[static_cast<std::size_t>(bucket)] += 1;
  }

  std::optional<MetricReport> report;
  if (kind == DiagramKind::test_based) {
    spec.test = test;
    report = tce(dataset, bins, *test);
  }

  for (std::size_t b = 0; b < binned.stats.size(); ++b) {
    const auto& s = binned.stats[b];
    DiagramBin out;
    out.interval = s.interval;
    out.count = s.count;
    out.p_hat = s.p_hat;
    out.q_bar = s.q_bar;
    if (kind == DiagramKind::test_based) {
      out.density.assign(kDensityBuckets, 0);
      if (!s.empty()) {
        out.rejection_percentage = report->per_bin[b].loss;
        std::vector<double> values;
        values.reserve(s.members.size());
        for (Index i : s.members) values.push_back(dataset.prediction(i));
        // members are already ordered by prediction
        out.quartiles = Quartiles{quantile_sorted(values, 0.25),
                                  quantile_sorted(values, 0.5),
                                  quantile_sorted(values, 0.75)};
        const double width = s.interval.upper - s.interval.lower;
        for (double v : values) {
          const auto k = std::clamp<Index>(
              static_cast<Index>(std::floor((v - s.interval.lower) / width * kDensityBuckets)),
              0, kDensityBuckets - 1);
          out.density[static_cast<std::size_t>(k)] += 1;
        }
      }
    }
    spec.bins.push_back(std::move(out));
  }
  return spec;
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

class SvgWriter {
 public:
  void raw(const std::string& s) { out_ += s; }
  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& cls = {}, const std::string& extra = {}) {
    out_ += "<rect";
    if (!cls.empty()) out_ += " class=\"" + cls + "\"";
    out_ += " x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) +
            "\" height=\"" + num(h) + "\" fill=\"" + fill + "\"" + extra + "/>\n";
  }
  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double width, const std::string& cls = {}, const std::string& extra = {}) {
    out_ += "<line";
    if (!cls.empty()) out_ += " class=\"" + cls + "\"";
    out_ += " x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) +
            "\" y2=\"" + num(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
            num(width) + "\"" + extra + "/>\n";
  }
  void text(double x, double y, const std::string& s, const std::string& anchor,
            int size = 12, const std::string& extra = {}) {
    out_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" +
            std::to_string(size) + "\" text-anchor=\"" + anchor +
            "\" font-family=\"sans-serif\"" + extra + ">" + s + "</text>\n";
  }
  std::string str() && { return std::move(out_); }

 private:
  std::string out_;
};

}  // namespace

std::string render_svg(const DiagramSpec& spec, int width, int height) {
  if (width <= 0 || height <= 0) {
    throw ArgumentError("render_svg: dimensions must be positive");
  }
  const bool test_based = spec.kind == DiagramKind::test_based;

  // Layout: central panel, count panel below it, histogram to the right.
  const double left = 0.10 * width;
  const double top = 0.06 * height;
  const double main_w = 0.66 * width;
  const double main_h = 0.58 * height;
  const double gap = 0.03 * height;
  const double bottom_h = 0.20 * height;
  const double bottom_top = top + main_h + gap;
  const double side_left = left + main_w + 0.03 * width;
  const double side_w = 0.16 * width;

  const auto px = [&](double p) { return left + p * main_w; };
  const auto py = [&](double p) { return top + (1.0 - p) * main_h; };

  SvgWriter svg;
  svg.raw("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
  svg.raw("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
          std::to_string(width) + "\" height=\"" + std::to_string(height) +
          "\" viewBox=\"0 0 " + std::to_string(width) + " " + std::to_string(height) +
          "\">\n");
  svg.rect(0, 0, width, height, "white");
  svg.text(left + main_w / 2, top - 0.02 * height,
           test_based ? "Test-based reliability diagram" : "Reliability diagram",
           "middle", 14);

  // Frames and the diagonal.
  svg.rect(left, top, main_w, main_h, "none", "frame", " stroke=\"black\"");
  svg.rect(left, bottom_top, main_w, bottom_h, "none", "frame", " stroke=\"black\"");
  svg.rect(side_left, top, side_w, main_h, "none", "frame", " stroke=\"black\"");
  svg.line(px(0), py(0), px(1), py(1), "#999999", 1, "diagonal",
           " stroke-dasharray=\"4,3\"");
  for (int t = 0; t <= 4; ++t) {
    const double v = t / 4.0;
    svg.text(px(v), bottom_top + bottom_h + 0.04 * height, num(v), "middle", 10);
    svg.text(left - 6, py(v) + 4, num(v), "end", 10);
  }
  svg.text(px(0.5), height - 0.01 * height, "Model prediction", "middle", 12);

  // Bin boundaries.
  for (std::size_t b = 1; b < spec.bins.size(); ++b) {
    const double x = px(spec.bins[b].interval.lower);
    svg.line(x, top, x, bottom_top + bottom_h, "#bbbbbb", 1, "boundary",
             " stroke-dasharray=\"2,2\"");
  }

  Index max_count = 1;
  for (const auto& b : spec.bins) max_count = std::max(max_count, b.count);

  for (const auto& b : spec.bins) {
    const double x0 = px(b.interval.lower);
    const double x1 = px(b.interval.upper);
    const double bw = x1 - x0;
    const double cx = 0.5 * (x0 + x1);

    if (b.count > 0) {
      if (test_based) {
        // Mirrored density histogram in place of a kernel violin.
        Index peak = 1;
        for (Index c : b.density) peak = std::max(peak, c);
        const double slice = (b.interval.upper - b.interval.lower) / kDensityBuckets;
        for (int k = 0; k < kDensityBuckets; ++k) {
          const Index c = b.density[static_cast<std::size_t>(k)];
          if (c == 0) continue;
          const double half = 0.45 * bw * static_cast<double>(c) / static_cast<double>(peak);
          const double y_hi = py(b.interval.lower + (k + 1) * slice);
          const double y_lo = py(b.interval.lower + k * slice);
          svg.rect(cx - half, y_hi, 2 * half, y_lo - y_hi, "#9ecae1", "violin");
        }
        if (b.quartiles) {
          svg.line(cx, py(b.quartiles->lower), cx, py(b.quartiles->upper), "#08519c", 2,
                   "quartiles");
          svg.line(cx - 3, py(b.quartiles->median), cx + 3, py(b.quartiles->median),
                   "#08519c", 2, "median");
        }
        svg.line(x0 + 0.05 * bw, py(b.p_hat), x1 - 0.05 * bw, py(b.p_hat), "red", 2,
                 "p-hat");
      } else {
        svg.line(cx, py(b.q_bar), cx, py(b.p_hat), "#d62728", 1, "gap");
        svg.raw("<circle class=\"p-hat\" cx=\"" + num(px(b.q_bar)) + "\" cy=\"" +
                num(py(b.p_hat)) + "\" r=\"4\" fill=\"#1f77b4\"/>\n");
      }
    }

    // Counts (grey) and, for test-based diagrams, rejection percentages (red).
    const double h = bottom_h * static_cast<double>(b.count) / static_cast<double>(max_count);
    svg.rect(x0 + 0.1 * bw, bottom_top + bottom_h - h, 0.8 * bw, h, "#aaaaaa", "count");
    if (test_based && b.rejection_percentage) {
      const double rh = bottom_h * *b.rejection_percentage / 100.0;
      svg.rect(x0 + 0.3 * bw, bottom_top + bottom_h - rh, 0.4 * bw, rh, "red", "rejection");
    }
  }

  // Global prediction histogram, drawn sideways against the prediction axis.
  Index max_hist = 1;
  for (Index c : spec.histogram) max_hist = std::max(max_hist, c);
  const auto nh = static_cast<double>(spec.histogram.size());
  for (std::size_t k = 0; k < spec.histogram.size(); ++k) {
    const Index c = spec.histogram[k];
    if (c == 0) continue;
    const double y_hi = py((static_cast<double>(k) + 1) / nh);
    const double y_lo = py(static_cast<double>(k) / nh);
    const double w = side_w * static_cast<double>(c) / static_cast<double>(max_hist);
    svg.rect(side_left, y_hi, w, y_lo - y_hi, "#aaaaaa", "histogram");
  }

  svg.raw("</svg>\n");
  return std::move(svg).str();
}

namespace {

nlohmann::json number_or_null(double v) {
  return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v);
}

}  // namespace

nlohmann::json to_json(const DiagramSpec& spec) {
  nlohmann::json j;
  j["schema"] = "tcal.diagram/1";
  j["kind"] = std::string(to_string(spec.kind));
  j["total"] = spec.total;
  if (spec.test) {
    j["test"] = {{"kind", std::string(to_string(spec.test->kind))},
                 {"alpha", spec.test->alpha}};
  }
  j["histogram"] = spec.histogram;
  auto& bins = j["bins"] = nlohmann::json::array();
  for (const auto& b : spec.bins) {
    nlohmann::json e;
    e["lower"] = b.interval.lower;
    e["upper"] = b.interval.upper;
    e["closed_upper"] = b.interval.closed_upper;
    e["count"] = b.count;
    e["p_hat"] = number_or_null(b.p_hat);
    e["q_bar"] = number_or_null(b.q_bar);
    if (b.rejection_percentage) e["rejection_percentage"] = *b.rejection_percentage;
    if (b.quartiles) {
      e["quartiles"] = {b.quartiles->lower, b.quartiles->median, b.quartiles->upper};
    }
    if (!b.density.empty()) e["density"] = b.density;
    bins.push_back(std::move(e));
  }
  return j;
}

}  // namespace tcal
