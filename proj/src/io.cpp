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

#include "tcal/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tcal {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string row_prefix(Index row) { return "row " + std::to_string(row) + ": "; }

void check_prediction(double p, Index row, std::string_view text) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw IngestError(IngestError::Kind::prediction_range, row,
                      row_prefix(row) + "prediction " + std::string(text) +
                          " outside [0,1]");
  }
}

struct Columns {
  std::vector<double> predictions;
  std::vector<int> labels;

  Dataset finish() && {
    if (predictions.empty()) {
      throw IngestError(IngestError::Kind::empty_input, 0, "input has no data rows");
    }
    Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(
        predictions.data(), static_cast<Index>(predictions.size()));
    Eigen::VectorXi y =
        Eigen::Map<const Eigen::VectorXi>(labels.data(), static_cast<Index>(labels.size()));
    return Dataset(std::move(p), std::move(y));
  }
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IngestError(IngestError::Kind::unreadable, 0,
                      "cannot open '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

Dataset parse_csv(std::string_view text) {
  Columns cols;
  bool header_seen = false;
  Index row = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    const auto raw = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                    : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    const auto line = trim(raw);
    if (line.empty()) continue;

    if (!header_seen) {
      header_seen = true;
      std::string header(line);
      header.erase(std::remove(header.begin(), header.end(), ' '), header.end());
      if (header != "prediction,label") {
        throw IngestError(IngestError::Kind::malformed_row, 0,
                          "expected header 'prediction,label', got '" +
                              std::string(line) + "'");
      }
      continue;
    }

    ++row;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
      throw IngestError(IngestError::Kind::malformed_row, row,
                        row_prefix(row) + "expected two fields, got '" +
                            std::string(line) + "'");
    }
    const auto pred_text = trim(line.substr(0, comma));
    const auto label_text = trim(line.substr(comma + 1));

    double p = 0.0;
    const auto [pend, perr] =
        std::from_chars(pred_text.data(), pred_text.data() + pred_text.size(), p);
    if (pred_text.empty() || perr != std::errc() ||
        pend != pred_text.data() + pred_text.size()) {
      throw IngestError(IngestError::Kind::malformed_row, row,
                        row_prefix(row) + "prediction '" + std::string(pred_text) +
                            "' is not a number");
    }
    check_prediction(p, row, pred_text);

    long label = 0;
    const auto [lend, lerr] =
        std::from_chars(label_text.data(), label_text.data() + label_text.size(), label);
    if (label_text.empty() || lerr != std::errc() ||
        lend != label_text.data() + label_text.size()) {
      throw IngestError(IngestError::Kind::malformed_row, row,
                        row_prefix(row) + "label '" + std::string(label_text) +
                            "' is not an integer");
    }
    if (label != 0 && label != 1) {
      throw IngestError(IngestError::Kind::label_value, row,
                        row_prefix(row) + "label " + std::string(label_text) +
                            " not in {0,1}");
    }
    cols.predictions.push_back(p);
    cols.labels.push_back(static_cast<int>(label));
  }
  if (!header_seen) {
    throw IngestError(IngestError::Kind::empty_input, 0, "input is empty");
  }
  return std::move(cols).finish();
}

Dataset parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    if (trim(text).empty()) {
      throw IngestError(IngestError::Kind::empty_input, 0, "input is empty");
    }
    throw IngestError(IngestError::Kind::malformed_row, 0,
                      std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array()) {
    throw IngestError(IngestError::Kind::malformed_row, 0,
                      "expected a JSON array of {prediction, label} records");
  }
  Columns cols;
  Index row = 0;
  for (const auto& rec : doc) {
    ++row;
    if (!rec.is_object() || !rec.contains("prediction") || !rec.contains("label") ||
        !rec["prediction"].is_number() || !rec["label"].is_number()) {
      throw IngestError(IngestError::Kind::malformed_row, row,
                        row_prefix(row) + "expected {\"prediction\": number, \"label\": 0|1}");
    }
    const double p = rec["prediction"].get<double>();
    check_prediction(p, row, rec["prediction"].dump());
    const auto& l = rec["label"];
    if (!l.is_number_integer() || (l.get<long>() != 0 && l.get<long>() != 1)) {
      throw IngestError(IngestError::Kind::label_value, row,
                        row_prefix(row) + "label " + l.dump() + " not in {0,1}");
    }
    cols.predictions.push_back(p);
    cols.labels.push_back(l.get<int>());
  }
  return std::move(cols).finish();
}

Dataset ingest(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  if (path.extension() == ".json") return parse_json(text);
  return parse_csv(text);
}

std::string to_csv(const Dataset& dataset) {
  std::string out = "prediction,label\n";
  char buf[64];
  for (Index i = 0; i < dataset.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%d\n", dataset.prediction(i), dataset.label(i));
    out += buf;
  }
  return out;
}

void RunConfig::validate() const {
  if (count < 1) throw ArgumentError("config: B must be >= 1");
  if (!(n_min_frac >= 0.0 && n_min_frac <= 1.0) ||
      !(n_max_frac > 0.0 && n_max_frac <= 1.0) || n_min_frac > n_max_frac) {
    throw ArgumentError("config: need 0 <= nmin_frac <= nmax_frac <= 1 and nmax_frac > 0");
  }
  test_config().validate();
  if (seeds < 1) throw ArgumentError("config: seeds must be >= 1");
}

BinStrategy RunConfig::strategy() const {
  BinStrategy s;
  s.kind = bins;
  s.count = count;
  s.n_min_frac = n_min_frac;
  s.n_max_frac = n_max_frac;
  return s;
}

SummaryOptions RunConfig::summary_options() const {
  SummaryOptions o;
  o.test = test_config();
  o.tce_strategy = strategy();
  o.count = count;
  o.norm = norm;
  return o;
}

namespace {

double to_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ArgumentError("config: " + key + " expects a number, got '" + value + "'");
  }
  return v;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ArgumentError("config: " + key + " expects a non-negative integer, got '" +
                        value + "'");
  }
  return v;
}

}  // namespace

void RunConfig::apply(const std::string& key, const std::string& value) {
  if (key == "bins") {
    bins = parse_bin_kind(value);
  } else if (key == "B") {
    count = static_cast<Index>(to_unsigned(key, value));
  } else if (key == "nmin_frac" || key == "nmin-frac") {
    n_min_frac = to_double(key, value);
  } else if (key == "nmax_frac" || key == "nmax-frac") {
    n_max_frac = to_double(key, value);
  } else if (key == "alpha") {
    alpha = to_double(key, value);
  } else if (key == "test") {
    test = parse_test_kind(value);
  } else if (key == "norm") {
    norm = parse_norm_kind(value);
  } else if (key == "seed") {
    seed = to_unsigned(key, value);
  } else if (key == "seeds") {
    seeds = to_unsigned(key, value);
  } else if (key == "threads") {
    threads = static_cast<unsigned>(to_unsigned(key, value));
  } else if (key == "out") {
    out = value;
  } else {
    throw ArgumentError("config: unknown key '" + key + "'");
  }
}

nlohmann::json RunConfig::to_json() const {
  return {{"bins", std::string(to_string(bins))},
          {"B", count},
          {"nmin_frac", n_min_frac},
          {"nmax_frac", n_max_frac},
          {"alpha", alpha},
          {"test", std::string(to_string(test))},
          {"norm", std::string(to_string(norm))},
          {"seed", seed}};
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open config file '" + path.string() + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const auto body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ArgumentError("config file line " + std::to_string(lineno) +
                          ": expected key = value");
    }
    out[std::string(trim(body.substr(0, eq)))] = std::string(trim(body.substr(eq + 1)));
  }
  return out;
}

namespace {

nlohmann::json number_or_null(double v) {
  return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v);
}

}  // namespace

nlohmann::json to_json(const MetricReport& report) {
  nlohmann::json j;
  j["metric"] = report.metric;
  j["value"] = report.value;
  j["norm"] = std::string(to_string(report.norm));
  j["config"] = report.config;
  auto& bins = j["per_bin"] = nlohmann::json::array();
  for (const auto& b : report.per_bin) {
    bins.push_back({{"lower", b.interval.lower},
                    {"upper", b.interval.upper},
                    {"count", b.count},
                    {"weight", b.weight},
                    {"p_hat", number_or_null(b.p_hat)},
                    {"q_bar", number_or_null(b.q_bar)},
                    {"loss", b.count > 0 ? nlohmann::json(b.loss) : nlohmann::json(nullptr)}});
  }
  return j;
}

ComputeResult compute_all(const std::string& name, const Dataset& dataset,
                          const RunConfig& config) {
  config.validate();
  const TestConfig test = config.test_config();
  ComputeResult r;
  r.name = name;
  r.size = dataset.size();
  r.positives = dataset.positives();

  const BinStrategy strategy = config.strategy();
  auto main = tce(dataset, make_bins(dataset, strategy), test, config.norm);
  main.config["strategy"] = strategy.describe(dataset.size());
  r.metrics.push_back(std::move(main));

  auto q = tce(dataset, quantile_bins(dataset, config.count), test, config.norm);
  q.metric = "TCE(Q)";
  q.config["strategy"] = BinStrategy::quantile(config.count).describe(dataset.size());
  r.metrics.push_back(std::move(q));

  auto v = tce(dataset, make_bins(dataset, BinStrategy::pava()), test, config.norm);
  v.metric = "TCE(V)";
  v.config["strategy"] = "pava";
  r.metrics.push_back(std::move(v));

  r.metrics.push_back(ece(dataset, config.count));
  r.metrics.push_back(ace(dataset, config.count));
  r.metrics.push_back(mce(dataset, config.count, BinKind::equispaced));
  r.metrics.push_back(mce(dataset, config.count, BinKind::quantile));
  return r;
}

nlohmann::json compute_report(const std::vector<ComputeResult>& results,
                              const RunConfig& config) {
  nlohmann::json j;
  j["schema"] = kReportSchema;
  j["command"] = "compute";
  j["config"] = config.to_json();
  auto& inputs = j["inputs"] = nlohmann::json::array();
  for (const auto& r : results) {
    nlohmann::json e;
    e["name"] = r.name;
    e["size"] = r.size;
    e["positives"] = r.positives;
    auto& metrics = e["metrics"] = nlohmann::json::object();
    for (const auto& m : r.metrics) metrics[m.metric] = to_json(m);
    inputs.push_back(std::move(e));
  }
  return j;
}

namespace {

constexpr const char* kColumns[] = {"TCE", "TCE(Q)", "TCE(V)", "ECE", "ACE", "MCE", "MCE(Q)"};

std::string format_row(const std::string& name, std::size_t name_width,
                       const std::array<double, 7>& values) {
  std::string line = name;
  line.resize(std::max(name_width, name.size()), ' ');
  char buf[32];
  for (std::size_t c = 0; c < 7; ++c) {
    if (c < 3) {
      std::snprintf(buf, sizeof buf, "%9.2f%%", values[c]);
    } else {
      std::snprintf(buf, sizeof buf, "%9.4f", values[c]);
    }
    line += buf;
  }
  return line + "\n";
}

std::string format_header(std::size_t name_width, const std::string& first) {
  std::string line = first;
  line.resize(std::max(name_width, first.size()), ' ');
  char buf[32];
  for (std::size_t c = 0; c < 7; ++c) {
    std::snprintf(buf, sizeof buf, c < 3 ? "%10s" : "%9s", kColumns[c]);
    line += buf;
  }
  return line + "\n";
}

std::array<double, 7> as_row(const MetricSummary& s) {
  return {s.tce_p, s.tce_q, s.tce_v, s.ece, s.ace, s.mce, s.mce_q};
}

}  // namespace

std::string compute_table(const std::vector<ComputeResult>& results) {
  std::size_t width = 8;
  for (const auto& r : results) width = std::max(width, r.name.size() + 2);
  std::string out = format_header(width, "");
  for (const auto& r : results) {
    std::array<double, 7> row{};
    for (std::size_t c = 0; c < 7; ++c) row[c] = r.metrics[c].value;
    out += format_row(r.name, width, row);
  }
  return out;
}

namespace {

nlohmann::json summary_json(const MetricSummary& s) {
  return {{"TCE", s.tce_p}, {"TCE(Q)", s.tce_q}, {"TCE(V)", s.tce_v},
          {"ECE", s.ece},      {"ACE", s.ace},      {"MCE", s.mce},
          {"MCE(Q)", s.mce_q}};
}

nlohmann::json scenario_json(const ScenarioResult& r) {
  nlohmann::json e;
  e["name"] = r.scenario.name;
  e["train_prevalence"] = r.scenario.train_prior;
  e["test_prevalence"] = r.scenario.test_prior;
  e["n_train"] = r.scenario.n_train;
  e["n_test"] = r.scenario.n_test;
  e["noise"] = r.scenario.noise;
  e["seeds"] = r.seeds;
  e["mean"] = summary_json(r.mean);
  e["stddev"] = summary_json(r.stddev);
  auto& runs = e["runs"] = nlohmann::json::array();
  for (const auto& run : r.runs) runs.push_back(summary_json(run));
  return e;
}

}  // namespace

nlohmann::json simulate_report(const std::vector<ScenarioResult>& results,
                               const RunConfig& config, Index n_train, Index n_test) {
  nlohmann::json j;
  j["schema"] = kReportSchema;
  j["command"] = "simulate";
  j["config"] = config.to_json();
  j["n_train"] = n_train;
  j["n_test"] = n_test;
  auto& scenarios = j["scenarios"] = nlohmann::json::array();
  for (const auto& r : results) scenarios.push_back(scenario_json(r));
  return j;
}

std::string simulate_table(const std::vector<ScenarioResult>& results) {
  std::size_t width = 14;
  for (const auto& r : results) width = std::max(width, r.scenario.name.size() + 2);
  std::string out = format_header(width, "Prevalence");
  for (const auto& r : results) {
    out += format_row(r.scenario.name, width, as_row(r.mean));
    out += format_row("  (sd)", width, as_row(r.stddev));
  }
  return out;
}

nlohmann::json sweep_report(SweepParameter parameter, const std::vector<SweepEntry>& entries,
                            const RunConfig& config) {
  nlohmann::json j;
  j["schema"] = kReportSchema;
  j["command"] = "sweep";
  j["parameter"] = std::string(to_string(parameter));
  j["config"] = config.to_json();
  auto& rows = j["points"] = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json row;
    row["scenario"] = e.scenario;
    row["value"] = e.point.label;
    if (e.result) {
      row["result"] = scenario_json(*e.result);
    } else {
      row["error"] = e.error;
    }
    rows.push_back(std::move(row));
  }
  return j;
}

std::string sweep_table(SweepParameter parameter, const std::vector<SweepEntry>& entries) {
  std::string out;
  std::string current;
  const std::size_t width = 16;
  for (const auto& e : entries) {
    if (e.scenario != current) {
      current = e.scenario;
      if (!out.empty()) out += "\n";
      out += "[" + current + "]\n";
      out += format_header(width, std::string(to_string(parameter)));
    }
    if (e.result) {
      out += format_row(e.point.label, width, as_row(e.result->mean));
    } else {
      std::string line = e.point.label;
      line.resize(std::max(width, line.size()), ' ');
      out += line + "  error: " + e.error + "\n";
    }
  }
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace tcal
