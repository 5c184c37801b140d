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

#include "tcal/cli.hpp"

#include <charconv>
#include <iostream>
#include <map>
#include <memory>

#include <CLI11.hpp>

namespace tcal::cli {

namespace {

namespace fs = std::filesystem;

fs::path with_suffix(const fs::path& stem, const char* ext) {
  return fs::path(stem.string() + ext);
}

int report_exception(std::ostream& err, const std::exception& e) {
  err << "error: " << e.what() << "\n";
  if (dynamic_cast<const IngestError*>(&e)) return kInputError;
  return kUsageError;
}

}  // namespace

int compute(const RunConfig& config, const std::vector<fs::path>& inputs, std::ostream& out,
            std::ostream& err) {
  try {
    config.validate();
    if (inputs.empty()) throw ArgumentError("compute: no input files");
    std::vector<ComputeResult> results;
    for (const auto& path : inputs) {
      Dataset d = [&] {
        try {
          return ingest(path);
        } catch (const IngestError& e) {
          throw IngestError(e.kind(), e.row(), path.string() + ": " + e.what());
        }
      }();
      results.push_back(compute_all(path.filename().string(), d, config));
    }
    const std::string table = compute_table(results);
    write_text(with_suffix(config.out, ".json"), compute_report(results, config).dump(2) + "\n");
    write_text(with_suffix(config.out, ".txt"), table);
    out << table;
    return kOk;
  } catch (const std::exception& e) {
    return report_exception(err, e);
  }
}

int diagram(const RunConfig& config, const fs::path& input, const DiagramOptions& options,
            std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    if (options.kind == DiagramKind::test_based && !options.test) {
      throw ArgumentError("diagram: test-based diagrams need a test configuration "
                          "(--test / --alpha or a config file entry)");
    }
    const fs::path svg_path = with_suffix(config.out, ".svg");
    const fs::path json_path = with_suffix(config.out, ".json");
    for (const auto& p : {svg_path, json_path}) {
      if (fs::exists(p)) {
        err << "error: refusing to overwrite existing '" << p.string() << "'\n";
        return kOutputError;
      }
    }
    const Dataset d = ingest(input);
    const BinSet bins = make_bins(d, config.strategy());
    const DiagramSpec spec = build_diagram(d, bins, options.test, options.kind);
    write_text(svg_path, render_svg(spec, options.width, options.height));
    write_text(json_path, to_json(spec).dump(2) + "\n");
    out << "wrote " << svg_path.string() << " and " << json_path.string() << "\n";
    return kOk;
  } catch (const std::exception& e) {
    return report_exception(err, e);
  }
}

Scenario parse_scenario(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw ArgumentError("scenario must be written train:test, got '" + text + "'");
  }
  const auto parse = [&](std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ArgumentError("bad prevalence in scenario '" + text + "'");
    }
    return v;
  };
  Scenario s;
  s.train_prior = parse(std::string_view(text).substr(0, colon));
  s.test_prior = parse(std::string_view(text).substr(colon + 1));
  const auto pct = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g%%", v * 100.0);
    return std::string(buf);
  };
  s.name = pct(s.train_prior) + " vs " + pct(s.test_prior);
  return s;
}

namespace {

ExperimentOptions experiment_options(const RunConfig& config) {
  ExperimentOptions o;
  o.metrics = config.summary_options();
  o.seeds.clear();
  for (std::uint64_t i = 0; i < config.seeds; ++i) o.seeds.push_back(config.seed + i);
  o.threads = config.threads;
  return o;
}

}  // namespace

int simulate(const RunConfig& config, const SimulateOptions& options, std::ostream& out,
             std::ostream& err) {
  try {
    config.validate();
    std::vector<Scenario> scenarios =
        options.scenarios.empty() ? standard_scenarios() : options.scenarios;
    for (auto& s : scenarios) {
      s.n_train = options.n_train;
      s.n_test = options.n_test;
      s.noise = options.noise;
    }
    const ExperimentOptions exp = experiment_options(config);
    const auto results = run_scenarios(scenarios, exp);

    if (options.emit_csv) {
      std::size_t index = 0;
      for (const auto& s : scenarios) {
        for (auto seed : exp.seeds) {
          const ScenarioData data = simulate_scenario(s, exp, seed);
          const fs::path path = *options.emit_csv / ("scenario" + std::to_string(index) +
                                                     "_seed" + std::to_string(seed) + ".csv");
          write_text(path, to_csv(data.test));
        }
        ++index;
      }
    }

    const std::string table = simulate_table(results);
    write_text(with_suffix(config.out, ".json"),
               simulate_report(results, config, options.n_train, options.n_test).dump(2) +
                   "\n");
    write_text(with_suffix(config.out, ".txt"), table);
    out << table;
    return kOk;
  } catch (const std::exception& e) {
    return report_exception(err, e);
  }
}

int sweep(const RunConfig& config, const SweepOptions& options, std::ostream& out,
          std::ostream& err) {
  try {
    config.validate();
    if (options.grid.empty()) throw ArgumentError("sweep: empty grid");
    Scenario base;
    base.n_train = options.n_train;
    base.n_test = options.n_test;
    const auto entries = run_sweep(options.parameter, options.grid, base,
                                   experiment_options(config));
    const std::string table = sweep_table(options.parameter, entries);
    write_text(with_suffix(config.out, ".json"),
               sweep_report(options.parameter, entries, config).dump(2) + "\n");
    write_text(with_suffix(config.out, ".txt"), table);
    out << table;
    return kOk;
  } catch (const std::exception& e) {
    return report_exception(err, e);
  }
}

namespace {

// Flags shared by every subcommand. Values are kept as text and applied on
// top of the config file so the command line always wins.
struct CommonFlags {
  std::string config_file;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void attach(CLI::App& app) {
    app.add_option("--config", config_file, "Flat key = value configuration file");
    add(app, "--bins", "bins", "Bin strategy: equispaced, quantile, pava, pava-bc");
    add(app, "--B", "B", "Bin count for equispaced and quantile bins (default 10)");
    add(app, "--nmin-frac", "nmin_frac", "PAVA-BC minimum bin size as a fraction of N");
    add(app, "--nmax-frac", "nmax_frac", "PAVA-BC maximum bin size as a fraction of N");
    add(app, "--alpha", "alpha", "Significance level of the test (default 0.05)");
    add(app, "--test", "test", "Test: binomial or t");
    add(app, "--norm", "norm", "Norm: wl1 or sup");
    add(app, "--seed", "seed", "First random seed");
    add(app, "--seeds", "seeds", "Number of seeds (simulate, sweep)");
    add(app, "--threads", "threads", "Worker threads, 0 = all cores");
    add(app, "--out", "out", "Output path prefix");
  }

  void add(CLI::App& app, const std::string& flag, const std::string& key,
           const std::string& help) {
    options[key] = app.add_option(flag, values[key], help);
  }

  bool given(const std::string& key) const { return options.at(key)->count() > 0; }

  RunConfig resolve(std::map<std::string, std::string>* file_values = nullptr) const {
    RunConfig config;
    if (!config_file.empty()) {
      auto file = read_config_file(config_file);
      for (const auto& [k, v] : file) config.apply(k, v);
      if (file_values) *file_values = std::move(file);
    }
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) config.apply(key, values.at(key));
    }
    config.validate();
    return config;
  }
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string::npos ? std::string::npos
                                                                    : comma - start);
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"tcal: calibration error of probabilistic binary classifiers"};
  app.require_subcommand(1);

  CommonFlags compute_flags, compare_flags, diagram_flags, simulate_flags, sweep_flags;

  auto* compute_cmd = app.add_subcommand("compute", "All metrics for one prediction file");
  std::string compute_input;
  compute_cmd->add_option("input", compute_input, "CSV or JSON prediction file")->required();
  compute_flags.attach(*compute_cmd);

  auto* compare_cmd = app.add_subcommand("compare", "Metric table with one row per input");
  std::vector<std::string> compare_inputs;
  compare_cmd->add_option("inputs", compare_inputs, "Prediction files")->required();
  compare_flags.attach(*compare_cmd);

  auto* diagram_cmd = app.add_subcommand("diagram", "Reliability diagram as SVG + JSON");
  std::string diagram_input;
  std::string diagram_kind = "test_based";
  int width = 720;
  int height = 540;
  diagram_cmd->add_option("input", diagram_input, "CSV or JSON prediction file")->required();
  diagram_cmd->add_option("--kind", diagram_kind, "standard or test_based");
  diagram_cmd->add_option("--width", width, "SVG width in px");
  diagram_cmd->add_option("--height", height, "SVG height in px");
  diagram_flags.attach(*diagram_cmd);

  auto* simulate_cmd = app.add_subcommand("simulate", "Controlled class-imbalance study");
  std::vector<std::string> scenario_texts;
  Index n_train = 14000;
  Index n_test = 6000;
  double noise = 0.0;
  std::string emit_csv;
  simulate_cmd->add_option("--scenario", scenario_texts,
                           "train:test prevalence pair, repeatable (default: six pairs)");
  simulate_cmd->add_option("--n-train", n_train, "Training sample size");
  simulate_cmd->add_option("--n-test", n_test, "Test sample size");
  simulate_cmd->add_option("--noise", noise, "Logit-normal noise scale on test predictions");
  simulate_cmd->add_option("--emit-csv", emit_csv, "Directory for per-run prediction CSVs");
  simulate_flags.attach(*simulate_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "Sensitivity sweep over one parameter");
  std::string parameter;
  std::string grid;
  Index sweep_n_train = 14000;
  Index sweep_n_test = 6000;
  sweep_cmd
      ->add_option("--param", parameter,
                   "n_min, n_max, binsize_range, noise, alpha, test_kind, data_size, "
                   "prevalence")
      ->required();
  sweep_cmd->add_option("--grid", grid, "Comma-separated grid values (ranges as lo:hi)")
      ->required();
  sweep_cmd->add_option("--n-train", sweep_n_train, "Training sample size");
  sweep_cmd->add_option("--n-test", sweep_n_test, "Test sample size");
  sweep_flags.attach(*sweep_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  auto& out = std::cout;
  auto& err = std::cerr;
  try {
    if (*compute_cmd) {
      return compute(compute_flags.resolve(), {compute_input}, out, err);
    }
    if (*compare_cmd) {
      std::vector<fs::path> inputs(compare_inputs.begin(), compare_inputs.end());
      return compute(compare_flags.resolve(), inputs, out, err);
    }
    if (*diagram_cmd) {
      std::map<std::string, std::string> file_values;
      const RunConfig config = diagram_flags.resolve(&file_values);
      DiagramOptions options;
      options.kind = parse_diagram_kind(diagram_kind);
      options.width = width;
      options.height = height;
      const bool test_given = diagram_flags.given("test") || diagram_flags.given("alpha") ||
                              file_values.count("test") || file_values.count("alpha");
      if (test_given) options.test = config.test_config();
      return diagram(config, diagram_input, options, out, err);
    }
    if (*simulate_cmd) {
      SimulateOptions options;
      for (const auto& s : scenario_texts) options.scenarios.push_back(parse_scenario(s));
      options.n_train = n_train;
      options.n_test = n_test;
      options.noise = noise;
      if (!emit_csv.empty()) options.emit_csv = emit_csv;
      return simulate(simulate_flags.resolve(), options, out, err);
    }
    if (*sweep_cmd) {
      SweepOptions options;
      options.parameter = parse_sweep_parameter(parameter);
      options.grid = split_list(grid);
      options.n_train = sweep_n_train;
      options.n_test = sweep_n_test;
      return sweep(sweep_flags.resolve(), options, out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace tcal::cli
