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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fixtures.hpp"
#include "tcal/cli.hpp"
#include "tcal/diagram.hpp"
#include "tcal/experiment.hpp"
#include "tcal/io.hpp"
#include "tcal/metrics.hpp"
#include "tcal/stattest.hpp"

namespace {

using namespace tcal;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& check) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s  [%2d] %s (%.2fs): %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(),
              seconds_since(t0), o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// ---- 1 ----

Outcome pava_optimality() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240101);
  double worst = 0.0;
  const int cases = 400;
  for (int c = 0; c < cases; ++c) {
    const int n = 1 + static_cast<int>(rng() % 12);
    const double prevalence = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
    Eigen::VectorXi y(n);
    Eigen::VectorXd p(n);
    for (int i = 0; i < n; ++i) {
      y[i] = std::bernoulli_distribution(prevalence)(rng);
      p[i] = (i + 0.5) / n;
    }
    const double got = total_error(Dataset(p, y), bins_from_fit(pava(y), p));
    worst = std::max(worst, std::abs(got - brute_force_optimal(y).objective));
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-12 && t < 10.0,
          std::to_string(cases) + " sequences, max |diff| " + fmt("%.3g", worst) +
              ", " + fmt("%.2f s", t)};
}

// ---- 2 ----

Outcome binomial_oracle() {
  const auto t0 = Clock::now();
  const double grid[] = {0, 0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 1};
  double worst = 0.0;
  long checked = 0;
  std::vector<long double> f;
  for (int n = 1; n <= 500; ++n) {
    for (double q : grid) {
      f.assign(static_cast<std::size_t>(n) + 1, 0.0L);
      for (int j = 0; j <= n; ++j) {
        if (q == 0.0 || q == 1.0) {
          f[j] = (q == 0.0 ? j == 0 : j == n) ? 1.0L : 0.0L;
        } else {
          f[j] = std::exp(std::lgamma(n + 1.0L) - std::lgamma(j + 1.0L) -
                          std::lgamma(n - j + 1.0L) + j * std::log(static_cast<long double>(q)) +
                          (n - j) * std::log1p(-static_cast<long double>(q)));
        }
      }
      for (int k = 0; k <= n; ++k) {
        long double sum = 0.0L;
        const long double cut = f[k] * (1.0L + kBinomialMassSlack);
        for (int j = 0; j <= n; ++j) {
          if (f[j] <= cut) sum += f[j];
        }
        const double expected = static_cast<double>(std::min(1.0L, sum));
        worst = std::max(worst, std::abs(binom_pvalue(n, k, q) - expected));
        ++checked;
      }
    }
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-12 && t < 60.0,
          std::to_string(checked) + " (n,k,q) triples, max |diff| " + fmt("%.3g", worst)};
}

// ---- 3 ----

Outcome table_reproduction() {
  const auto t0 = Clock::now();
  ExperimentOptions opts;
  opts.seeds = seed_range(20);
  const auto run = [&](double train, double test) {
    Scenario s;
    s.train_prior = train;
    s.test_prior = test;
    s.name = "x";
    return run_scenario(s, opts).mean;
  };
  const auto a = run(0.5, 0.5);
  const auto b = run(0.5, 0.4);
  const auto c = run(0.01, 0.02);
  const double t = seconds_since(t0);

  const bool ok_a = a.tce_p < 25 && a.ece < 0.03;
  const bool ok_b = b.tce_p > 80 && b.ece >= 0.07 && b.ece <= 0.12;
  const bool ok_c = c.tce_p > 70 && c.ece < 0.03;
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "50/50 TCE %.2f ECE %.4f [%s]; 50/40 TCE %.2f ECE %.4f [%s]; "
                "1/2 TCE %.2f ECE %.4f [%s]; 20 seeds, %.1f s",
                a.tce_p, a.ece, ok_a ? "ok" : "miss", b.tce_p, b.ece, ok_b ? "ok" : "miss",
                c.tce_p, c.ece, ok_c ? "ok" : "miss", t);
  return {ok_a && ok_b && ok_c && t < 300.0, buf};
}

// ---- 4 ----

Outcome false_positive_control() {
  const double alpha = 0.05;
  const BinSet bins = equispaced_bins(10);
  const TestConfig cfg{TestKind::binomial, alpha};
  double rejected = 0.0;
  long bins_seen = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GdaConfig gda;
    gda.seed = seed;
    const auto s = sample(gda, 6000, 0);
    Eigen::VectorXd p(s.x.size());
    for (Index i = 0; i < p.size(); ++i) p[i] = true_posterior(gda, s.x[i]);
    const Eigen::VectorXi zeros = Eigen::VectorXi::Zero(p.size());
    const auto base = partition(Dataset(p, zeros), bins);

    // Every prediction in a bin takes the bin's mean, and labels are drawn
    // from exactly that probability: every null hypothesis holds.
    Eigen::VectorXd q(p.size());
    Eigen::VectorXi y(p.size());
    RandomStream rng(seed, 7);
    for (const auto& st : base.stats) {
      for (Index i : st.members) {
        q[i] = st.q_bar;
        y[i] = rng.bernoulli(st.q_bar);
      }
    }
    const auto r = tce(Dataset(q, y), bins, cfg);
    for (const auto& b : r.per_bin) {
      if (b.count == 0) continue;
      rejected += b.loss / 100.0;
      ++bins_seen;
    }
  }
  const double rate = rejected / static_cast<double>(bins_seen);
  return {rate <= alpha + 0.03,
          "mean per-bin rejection rate " + fmt("%.4f", rate) + " over " +
              std::to_string(bins_seen) + " bins (bound " + fmt("%.2f", alpha + 0.03) + ")"};
}

// ---- 5 ----

Outcome pava_bc_structure() {
  std::mt19937_64 rng(5);
  int bad = 0;
  for (int c = 0; c < 500; ++c) {
    const Index n = std::uniform_int_distribution<Index>(40, 5000)(rng);
    GdaConfig gda;
    gda.prior = std::uniform_real_distribution<double>(0.01, 0.5)(rng);
    gda.seed = rng();
    const auto s = sample(gda, n, 0);
    Eigen::VectorXd p(n);
    for (Index i = 0; i < n; ++i) p[i] = true_posterior(gda, s.x[i]);
    const auto view = sorted_view(Dataset(p, s.y));
    const auto [n_min, n_max] = BinStrategy::pava_bc().block_limits(n);
    const auto fit = pava_bc(view.labels, n_min, n_max);
    bool ok = fit.blocks.back().length >= std::min(n_min, n);
    for (const auto& b : fit.blocks) ok = ok && b.length <= n_max;
    ok = ok && pava_bc(view.labels, 0, n).fitted == pava(view.labels).fitted;
    bad += !ok;
  }
  return {bad == 0, std::to_string(500 - bad) + "/500 datasets satisfy all three guarantees"};
}

// ---- 6 ----

Outcome alpha_monotonicity() {
  std::mt19937_64 rng(6);
  const double grid[] = {0.001, 0.005, 0.01, 0.05, 0.1, 0.5};
  int bad = 0;
  for (int c = 0; c < 100; ++c) {
    const Index n = std::uniform_int_distribution<Index>(50, 2000)(rng);
    const double shift = std::uniform_real_distribution<double>(-0.1, 0.1)(rng);
    Eigen::VectorXd p(n);
    Eigen::VectorXi y(n);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (Index i = 0; i < n; ++i) {
      p[i] = u(rng);
      y[i] = u(rng) < std::clamp(p[i] + shift, 0.0, 1.0);
    }
    const Dataset d(p, y);
    const BinStrategy strategies[] = {BinStrategy::pava_bc(), BinStrategy::quantile(10),
                                      BinStrategy::equispaced(10), BinStrategy::pava()};
    const auto bins = make_bins(d, strategies[c % 4]);
    double prev = -1.0;
    for (double a : grid) {
      const double v = tce(d, bins, TestConfig{c % 2 ? TestKind::t_test : TestKind::binomial, a})
                           .value;
      if (v < prev) ++bad;
      prev = v;
    }
  }
  return {bad == 0, std::to_string(bad) + " decreasing steps over 100 (dataset, bins) pairs"};
}

// ---- 7 ----

Outcome fixtures() {
  const Dataset d = testing::four_point_fixture();
  const auto b = partition(d, BinSet::from_boundaries({0.5}));
  const bool stats = b.stats[0].count == 2 && b.stats[1].count == 2 &&
                     b.stats[0].p_hat == 0.5 && b.stats[1].p_hat == 1.0 &&
                     b.stats[0].q_bar == 0.25 && b.stats[1].q_bar == 0.8;
  const double e = ece(d, 2).value;
  return {stats && e == 0.225, "ECE " + fmt("%.17g", e) + (stats ? ", partition exact" : ", partition mismatch")};
}

// ---- 8 ----

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome report_formats() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "tcal_acceptance_reports";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "a.csv") << to_csv(testing::four_point_fixture());
  std::ofstream(dir / "b.csv") << to_csv(testing::golden_dataset());

  RunConfig config;
  config.out = dir / "cmp";
  std::ostringstream out, err;
  if (cli::compute(config, {dir / "a.csv", dir / "b.csv"}, out, err) != cli::kOk) {
    return {false, "compare failed: " + err.str()};
  }
  const auto j = nlohmann::json::parse(slurp(dir / "cmp.json"));
  const char* names[] = {"TCE", "TCE(Q)", "TCE(V)", "ECE", "ACE", "MCE", "MCE(Q)"};
  bool ok = j["schema"] == kReportSchema && j["inputs"].size() == 2;
  for (const auto& in : j["inputs"]) {
    for (const char* m : names) ok = ok && in["metrics"].contains(m);
  }
  const std::string table = slurp(dir / "cmp.txt");
  std::istringstream lines(table);
  std::string header, row1, row2;
  std::getline(lines, header);
  std::getline(lines, row1);
  std::getline(lines, row2);
  std::size_t pos = 0;
  for (const char* m : names) {
    const auto at = header.find(std::string(" ") + m, pos);
    ok = ok && at != std::string::npos;
    pos = at == std::string::npos ? pos : at + 1;
  }
  ok = ok && row1.rfind("a.csv", 0) == 0 && row2.rfind("b.csv", 0) == 0 &&
       row1.find('%') != std::string::npos;

  // same command twice gives byte-identical JSON
  config.out = dir / "cmp2";
  cli::compute(config, {dir / "a.csv", dir / "b.csv"}, out, err);
  ok = ok && slurp(dir / "cmp.json") == slurp(dir / "cmp2.json");
  fs::remove_all(dir);
  return {ok, "compare report: schema, 7 metric columns in order, one row per input, "
              "deterministic JSON"};
}

// ---- 9 ----

Outcome performance() {
  GdaConfig gda;
  gda.seed = 9;
  const Index n = 50000;
  const auto s = sample(gda, n, 0);
  Eigen::VectorXd p(n);
  for (Index i = 0; i < n; ++i) p[i] = sigmoid(true_log_odds(gda, s.x[i]) - 0.3);
  const Dataset d(p, s.y);
  const auto t0 = Clock::now();
  const auto bins = make_bins(d, BinStrategy::pava_bc());
  const auto r = tce(d, bins, TestConfig{});
  const double t = seconds_since(t0);
  return {t < 60.0, "TCE(P) " + fmt("%.2f", r.value) + " on 50000 points in " + fmt("%.2f s", t)};
}

// ---- 10 ----

Outcome diagram_determinism() {
  const Dataset d = testing::golden_dataset();
  const auto bins = make_bins(d, BinStrategy::pava_bc());
  const TestConfig cfg;
  const auto spec = build_diagram(d, bins, cfg, DiagramKind::test_based);
  const auto first = render_svg(spec);
  const auto second = render_svg(build_diagram(d, bins, cfg, DiagramKind::test_based));
  const auto golden = slurp(std::string(TCAL_TEST_DATA) + "/golden_test_based.svg");
  const auto r = tce(d, bins, cfg);
  bool equal = spec.bins.size() == r.per_bin.size();
  for (std::size_t b = 0; equal && b < spec.bins.size(); ++b) {
    if (spec.bins[b].count == 0) continue;
    equal = spec.bins[b].rejection_percentage && *spec.bins[b].rejection_percentage == r.per_bin[b].loss;
  }
  const bool stable = first == second && first == golden;
  return {stable && equal, std::string(stable ? "SVG byte-identical to golden" : "SVG differs") +
                               (equal ? ", rejection percentages equal TCE losses"
                                      : ", rejection percentages differ")};
}

}  // namespace

int main() {
  report(1, "PAVA optimality vs brute force", pava_optimality);
  report(2, "exact binomial p-value vs enumeration", binomial_oracle);
  report(3, "class-imbalance table reproduction", table_reproduction);
  report(4, "false-positive control", false_positive_control);
  report(5, "PAVA-BC structural guarantees", pava_bc_structure);
  report(6, "TCE monotone in alpha", alpha_monotonicity);
  report(7, "hand-computed fixtures", fixtures);
  report(8, "report-format fixtures", report_formats);
  report(9, "TCE on 50000 points under 60 s", performance);
  report(10, "diagram determinism", diagram_determinism);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
