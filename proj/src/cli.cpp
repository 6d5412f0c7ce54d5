#include "regerr/cli.hpp"

#include "regerr/csv.hpp"
#include "regerr/fusion.hpp"
#include "regerr/pairwise_stats.hpp"
#include "regerr/report_json.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

namespace regerr::cli {

namespace fs = std::filesystem;

namespace {

enum class Format { kTable, kJson, kCsv };

Format format_from_string(const std::string& name) {
  if (name == "table") return Format::kTable;
  if (name == "json") return Format::kJson;
  if (name == "csv") return Format::kCsv;
  throw ArgumentError("unknown format '" + name + "'");
}

// Options shared by the subcommands; unused ones are simply not registered.
struct Options {
  std::string input;
  std::string output;
  std::string format = "table";
  std::string mode = "diagonal";
  std::string noise_budget = "auto";
  double tolerance = 1e-8;
  int max_iter = 50000;
  std::optional<std::uint64_t> seed;
  std::string moments;
  std::string report;
  std::string weighting = "inverse-variance";
  std::string plot;
  std::string config;
  int width = 64;
  int height = 64;
  int regressors = 3;
};

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string to_text(const Json& doc) { return doc.dump(2) + "\n"; }

// Writes to `path`, or to `out` when `path` is empty.
void emit(const std::string& path, std::ostream& out, const std::string& text) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write '" + path + "'");
  file << text;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write '" + path.string() + "'");
  file << text;
}

std::string num(double v) { return format_number(v); }

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string table(const std::vector<std::string>& header,
                  const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c)
      os << (c ? "  " : "") << std::left << std::setw(static_cast<int>(width[c])) << cells[c];
    os << '\n';
  };
  line(header);
  for (const auto& row : rows) line(row);
  return os.str();
}

L1SolverConfig solver_config(const Options& opt, bool& auto_budget) {
  L1SolverConfig cfg;
  cfg.tolerance = opt.tolerance;
  cfg.max_iter = opt.max_iter;
  auto_budget = opt.noise_budget == "auto";
  if (!auto_budget) {
    try {
      std::size_t used = 0;
      cfg.noise_budget = std::stod(opt.noise_budget, &used);
      if (used != opt.noise_budget.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ArgumentError("--noise-budget must be a number or 'auto', got '" + opt.noise_budget +
                          "'");
    }
    if (!(cfg.noise_budget >= 0.0)) throw ArgumentError("--noise-budget must be non-negative");
  }
  return cfg;
}

RecoveryReport estimate_moments(const PairwiseStats& stats, MomentMode mode, L1SolverConfig cfg,
                                bool auto_budget) {
  if (mode == MomentMode::kDiagonal) return recover_moments_diagonal(stats);
  if (auto_budget) cfg.noise_budget = default_noise_budget(stats);
  return recover_moments_full(stats, cfg);
}

std::vector<std::vector<std::string>> labelled_rows(const std::vector<std::string>& labels,
                                                    const Vector& values) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < labels.size(); ++k)
    rows.push_back({std::to_string(k), labels[k], num(values(static_cast<Index>(k)))});
  return rows;
}

std::vector<std::string> estimate_labels(const RecoveryReport& report,
                                         const std::vector<std::string>& names) {
  if (report.mode == RecoveryMode::kFullBasisPursuit)
    return pair_labels(report.regressors, PairMode::kDiagonalInclusive, names);
  std::vector<std::string> out;
  for (int r = 0; r < report.regressors; ++r)
    out.push_back(names.empty() ? std::to_string(r) : names[static_cast<std::size_t>(r)]);
  return out;
}

std::string render_report(const RecoveryReport& report, const std::vector<std::string>& names,
                          Format format, std::string_view kind) {
  const auto labels = estimate_labels(report, names);
  switch (format) {
    case Format::kJson: {
      Json doc = make_document(kind);
      doc["labels"] = labels;
      doc["report"] = report;
      return to_text(doc);
    }
    case Format::kCsv: {
      std::ostringstream os;
      os << "index,label,value\n";
      for (std::size_t k = 0; k < labels.size(); ++k)
        os << k << ',' << csv_cell(labels[k]) << ',' << num(report.estimate(static_cast<Index>(k))) << '\n';
      return os.str();
    }
    case Format::kTable: {
      std::ostringstream os;
      os << "mode: " << to_string(report.mode) << "  regressors: " << report.regressors
         << "  residual_norm: " << num(report.residual_norm) << '\n';
      if (report.mode == RecoveryMode::kFullBasisPursuit) {
        os << "solver: " << report.solver.method << "  status: " << to_string(report.solver.status)
           << "  iterations: " << report.solver.iterations
           << "  noise_budget: " << num(report.noise_budget)
           << "  duality_gap: " << num(report.solver.duality_gap) << '\n';
      }
      if (report.mode == RecoveryMode::kBiasL1)
        os << "null_space_dimension: " << report.null_space_dimension << '\n';
      os << table({"index", report.mode == RecoveryMode::kFullBasisPursuit ? "pair" : "regressor",
                   report.mode == RecoveryMode::kBiasL1 ? "bias" : "moment"},
                  labelled_rows(labels, report.estimate));
      for (const auto& w : report.warnings) os << "warning: " << w << '\n';
      return os.str();
    }
  }
  return {};
}

// ---------------------------------------------------------------- stats

int cmd_stats(const Options& opt, std::ostream& out) {
  const PredictionMatrix m = read_prediction_csv(fs::path(opt.input));
  const PairwiseStats stats = compute_pairwise_stats(m);
  const auto labels = pair_labels(stats.regressors, PairMode::kStrict, m.names());
  std::string text;
  switch (format_from_string(opt.format)) {
    case Format::kJson: {
      Json doc = make_document("pairwise-stats");
      doc["labels"] = labels;
      doc["stats"] = stats;
      text = to_text(doc);
      break;
    }
    case Format::kCsv: {
      std::ostringstream os;
      os << "pair,delta,delta_sq\n";
      for (std::size_t k = 0; k < labels.size(); ++k)
        os << csv_cell(labels[k]) << ',' << num(stats.delta(static_cast<Index>(k))) << ','
           << num(stats.delta_sq(static_cast<Index>(k))) << '\n';
      text = os.str();
      break;
    }
    case Format::kTable: {
      std::vector<std::vector<std::string>> rows;
      for (std::size_t k = 0; k < labels.size(); ++k)
        rows.push_back({labels[k], num(stats.delta(static_cast<Index>(k))),
                        num(stats.delta_sq(static_cast<Index>(k)))});
      text = "items: " + std::to_string(stats.items) + "\n" +
             table({"pair", "delta", "delta_sq"}, rows);
      break;
    }
  }
  emit(opt.output, out, text);
  return kSuccess;
}

// ---------------------------------------------------------------- estimate

int cmd_estimate(const Options& opt, std::ostream& out, std::ostream& err) {
  const MomentMode mode = moment_mode_from_string(opt.mode);
  bool auto_budget = true;
  const L1SolverConfig cfg = solver_config(opt, auto_budget);
  const PredictionMatrix m = read_prediction_csv(fs::path(opt.input));
  const PairwiseStats stats = compute_pairwise_stats(m);
  const RecoveryReport report = estimate_moments(stats, mode, cfg, auto_budget);

  emit(opt.output, out, render_report(report, m.names(), format_from_string(opt.format),
                                      "moment-estimate"));
  if (!opt.plot.empty()) {
    std::ostringstream os;
    write_component_csv(os, report.moments().values(), "recovered");
    write_file(opt.plot, os.str());
  }
  if (!report.ok()) {
    err << "error: solver did not converge within " << cfg.max_iter << " iterations\n";
    return kSolverFailure;
  }
  return kSuccess;
}

// ---------------------------------------------------------------- bias

int cmd_bias(const Options& opt, std::ostream& out, std::ostream& err) {
  const PredictionMatrix m = read_prediction_csv(fs::path(opt.input));
  const RecoveryReport report = recover_bias(compute_pairwise_stats(m));
  const Format format = format_from_string(opt.format);
  emit(opt.output, out, render_report(report, m.names(), format, "bias-estimate"));
  // A table on stdout already carries the warnings.
  if (format != Format::kTable || !opt.output.empty())
    for (const auto& w : report.warnings) err << "warning: " << w << '\n';
  return kSuccess;
}

// ---------------------------------------------------------------- fuse

int cmd_fuse(const Options& opt, std::ostream& out, std::ostream& err) {
  const PredictionMatrix m = read_prediction_csv(fs::path(opt.input));
  RecoveryReport report;
  if (!opt.moments.empty()) {
    const Json doc = read_json_file(opt.moments);
    check_document(doc);
    try {
      report = doc.at("report").get<RecoveryReport>();
    } catch (const Json::exception& e) {
      throw ParseError("'" + opt.moments + "' is not a moment report: " + e.what());
    }
    if (report.regressors != m.regressors())
      throw ArgumentError("moment report is for " + std::to_string(report.regressors) +
                          " regressors, CSV has " + std::to_string(m.regressors()));
  } else {
    bool auto_budget = true;
    const L1SolverConfig cfg = solver_config(opt, auto_budget);
    report = estimate_moments(compute_pairwise_stats(m), moment_mode_from_string(opt.mode), cfg,
                              auto_budget);
  }
  if (!report.ok()) {
    err << "error: moment recovery did not converge\n";
    return kSolverFailure;
  }

  const MomentVector moments = report.moments();
  FusionWeights weights;
  if (opt.weighting == "inverse-variance")
    weights = inverse_variance_weights(moments);
  else if (opt.weighting == "moment-matrix")
    weights = moment_matrix_weights(moments);
  else
    throw ArgumentError("unknown weighting '" + opt.weighting + "'");

  const Vector fused = fuse(m, weights);
  std::ostringstream csv;
  write_csv(csv, {"fused"}, fused);
  emit(opt.output, out, csv.str());

  if (!opt.report.empty()) {
    std::string text;
    const Format format = format_from_string(opt.format);
    if (format == Format::kJson) {
      Json doc = make_document("fusion-weights");
      doc["weighting"] = opt.weighting;
      std::vector<std::string> names;
      for (int r = 0; r < m.regressors(); ++r) names.push_back(m.name(r));
      doc["regressors"] = names;
      doc["weights"] = std::vector<double>(weights.weights.data(),
                                           weights.weights.data() + weights.weights.size());
      doc["moments"] = report;
      text = to_text(doc);
    } else {
      std::vector<std::vector<std::string>> rows;
      for (int r = 0; r < m.regressors(); ++r)
        rows.push_back({m.name(r), num(moments.at(r, r)), num(weights.weights(r))});
      if (format == Format::kCsv) {
        std::ostringstream os;
        os << "regressor,moment,weight\n";
        for (const auto& row : rows)
          os << csv_cell(row[0]) << ',' << row[1] << ',' << row[2] << '\n';
        text = os.str();
      } else {
        text = table({"regressor", "moment", "weight"}, rows);
      }
    }
    write_file(opt.report, text);
  }
  return kSuccess;
}

// ---------------------------------------------------------------- simulate

TruthSource truth_from_json(const Json& j) {
  const auto kind = j.value("kind", std::string("ramp"));
  if (kind == "constant") return TruthSource::constant(j.value("value", 0.0));
  if (kind == "ramp") return TruthSource::ramp(j.value("first", 0.0), j.value("last", 1.0));
  if (kind == "user") {
    const auto values = j.at("values").get<std::vector<double>>();
    return TruthSource::user(Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size())));
  }
  throw ArgumentError("unknown truth kind '" + kind + "' (expected constant, ramp or user)");
}

void solver_from_json(const Json& j, L1SolverConfig& cfg, bool& auto_budget) {
  if (!j.is_object()) return;
  cfg.tolerance = j.value("tolerance", cfg.tolerance);
  cfg.max_iter = j.value("max_iter", cfg.max_iter);
  if (j.contains("noise_budget")) {
    const auto& nb = j.at("noise_budget");
    auto_budget = nb.is_string() && nb.get<std::string>() == "auto";
    if (!auto_budget) cfg.noise_budget = nb.get<double>();
  }
}

template <typename Fn>
auto config_guard(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw ParseError("bad config '" + path + "': " + e.what());
  }
}

std::string render_simulation_summary(const Json& summary, Format format) {
  if (format == Format::kJson) return to_text(summary);
  const auto& s = summary.at("moment_score");
  const auto& f = summary.at("fusion");
  std::vector<std::vector<std::string>> rows = {
      {"moment_max_abs_error", num(s.at("max_abs_error").get<double>())},
      {"moment_rmse", num(s.at("rmse").get<double>())},
      {"support_precision", num(s.at("support_precision").get<double>())},
      {"support_recall", num(s.at("support_recall").get<double>())},
      {"bias_max_abs_error", num(summary.at("bias_score").at("max_abs_error").get<double>())},
      {"weighted_mse", num(f.at("weighted_mse").get<double>())},
      {"average_mse", num(f.at("average_mse").get<double>())},
  };
  if (format == Format::kCsv) {
    std::ostringstream os;
    os << "metric,value\n";
    for (const auto& r : rows) os << r[0] << ',' << r[1] << '\n';
    return os.str();
  }
  return table({"metric", "value"}, rows);
}

int cmd_simulate(const Options& opt, std::ostream& out) {
  SimulationConfig cfg = load_simulation_config(opt.config);
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.output.empty()) throw ArgumentError("simulate needs --output DIR");
  const fs::path dir(opt.output);
  fs::create_directories(dir);

  const Simulation sim = generate(cfg.truth, cfg.noise, cfg.items, cfg.seed);
  const PairwiseStats stats = compute_pairwise_stats(sim.predictions);
  const RecoveryReport moments = estimate_moments(stats, cfg.mode, cfg.solver, cfg.auto_noise_budget);
  const RecoveryReport bias = recover_bias(stats);
  const Vector fused = fuse(sim.predictions, inverse_variance_weights(moments.moments()));

  {
    std::ostringstream os;
    write_prediction_csv(os, sim.predictions);
    write_file(dir / "predictions.csv", os.str());
  }
  {
    const int n = sim.predictions.regressors();
    Matrix table(cfg.items, n + 1);
    table.col(0) = sim.bundle.truth;
    table.rightCols(n) = sim.bundle.deltas;
    std::vector<std::string> header{"truth"};
    for (int r = 0; r < n; ++r) header.push_back("delta_" + std::to_string(r));
    std::ostringstream os;
    write_csv(os, header, table);
    write_file(dir / "truth.csv", os.str());
  }
  {
    Json doc = make_document("ground-truth");
    doc["seed"] = cfg.seed;
    doc["items"] = cfg.items;
    doc["noise"] = cfg.noise;
    const auto& tm = sim.bundle.true_moments.values();
    const auto& em = sim.bundle.expected_moments.values();
    const auto& tb = sim.bundle.true_biases.values;
    doc["true_moments"] = std::vector<double>(tm.data(), tm.data() + tm.size());
    doc["expected_moments"] = std::vector<double>(em.data(), em.data() + em.size());
    doc["true_biases"] = std::vector<double>(tb.data(), tb.data() + tb.size());
    write_file(dir / "bundle.json", to_text(doc));
  }
  {
    std::ostringstream rec;
    write_component_csv(rec, moments.moments().values(), "recovered");
    write_file(dir / "moments_recovered.csv", rec.str());
    std::ostringstream tru;
    write_component_csv(tru, sim.bundle.true_moments.values(), "true");
    write_file(dir / "moments_true.csv", tru.str());
  }

  Json summary = make_document("simulation");
  summary["seed"] = cfg.seed;
  summary["items"] = cfg.items;
  summary["regressors"] = sim.predictions.regressors();
  summary["moment_report"] = moments;
  summary["moment_score"] = score(moments, sim.bundle);
  summary["bias_report"] = bias;
  summary["bias_score"] = score(bias, sim.bundle);
  summary["fusion"] = evaluate_fusion(fused, sim.bundle);
  write_file(dir / "report.json", to_text(summary));

  out << render_simulation_summary(summary, format_from_string(opt.format));
  return moments.ok() ? kSuccess : kSolverFailure;
}

// ---------------------------------------------------------------- image-demo

int cmd_image_demo(const Options& opt, std::ostream& out) {
  ImageDemoConfig cfg = opt.config.empty() ? default_image_demo_config(opt.regressors)
                                           : load_image_demo_config(opt.config);
  if (opt.config.empty()) {
    cfg.width = opt.width;
    cfg.height = opt.height;
    cfg.mode = moment_mode_from_string(opt.mode);
    cfg.solver = solver_config(opt, cfg.auto_noise_budget);
  }
  if (opt.output.empty()) throw ArgumentError("image-demo needs --output DIR");
  const Image clean =
      opt.input.empty() ? gradient_image(cfg.width, cfg.height) : read_ppm(fs::path(opt.input));
  const std::uint64_t seed = opt.seed.value_or(42);
  const ImageDemoResult result = run_image_demo(clean, cfg, seed);

  const fs::path dir(opt.output);
  fs::create_directories(dir);
  write_ppm(dir / "clean.ppm", result.clean);
  for (std::size_t r = 0; r < result.noisy.size(); ++r)
    write_ppm(dir / ("noisy_" + std::to_string(r) + ".ppm"), result.noisy[r]);
  write_ppm(dir / "fused.ppm", result.fused);
  write_ppm(dir / "average.ppm", result.averaged);

  Json doc = make_document("image-demo");
  doc["seed"] = seed;
  doc["width"] = clean.width;
  doc["height"] = clean.height;
  doc["mode"] = to_string(cfg.mode);
  Json channels = Json::array();
  for (std::size_t c = 0; c < 3; ++c) {
    const Vector& w = result.weights[c];
    channels.push_back({{"report", result.reports[c]},
                        {"weights", std::vector<double>(w.data(), w.data() + w.size())}});
  }
  doc["channels"] = std::move(channels);
  doc["noisy_mse"] = result.noisy_mse;
  doc["fused_mse"] = result.fused_mse;
  doc["average_mse"] = result.average_mse;
  write_file(dir / "report.json", to_text(doc));

  std::vector<std::vector<std::string>> rows;
  for (std::size_t r = 0; r < result.noisy_mse.size(); ++r)
    rows.push_back({"noisy_" + std::to_string(r), num(result.noisy_mse[r])});
  rows.push_back({"fused", num(result.fused_mse)});
  rows.push_back({"average", num(result.average_mse)});
  const Format format = format_from_string(opt.format);
  if (format == Format::kJson) {
    out << to_text(doc);
  } else if (format == Format::kCsv) {
    out << "image,mse\n";
    for (const auto& r : rows) out << r[0] << ',' << r[1] << '\n';
  } else {
    out << table({"image", "mse"}, rows);
  }
  for (const auto& report : result.reports)
    if (!report.ok()) return kSolverFailure;
  return kSuccess;
}

void add_solver_options(CLI::App* cmd, Options& opt) {
  cmd->add_option("--mode", opt.mode, "Moment recovery mode: diagonal or full")
      ->check(CLI::IsMember({"diagonal", "full"}));
  cmd->add_option("--tolerance", opt.tolerance, "Relative feasibility tolerance of the l1 solver")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", opt.max_iter, "Iteration cap of the l1 solver")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--noise-budget", opt.noise_budget,
                  "Residual budget for full mode: a number or 'auto' (data-driven)");
}

void add_format_option(CLI::App* cmd, Options& opt) {
  cmd->add_option("--format", opt.format, "Output format: table, json or csv")
      ->check(CLI::IsMember({"table", "json", "csv"}));
}

}  // namespace

SimulationConfig load_simulation_config(const std::string& path) {
  const Json j = read_json_file(path);
  check_document(j);
  return config_guard(path, [&] {
    SimulationConfig cfg;
    cfg.items = j.value("items", cfg.items);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("truth")) cfg.truth = truth_from_json(j.at("truth"));
    cfg.noise = j.at("noise").get<NoiseSpec>();
    cfg.mode = moment_mode_from_string(j.value("mode", std::string("diagonal")));
    if (j.contains("solver")) solver_from_json(j.at("solver"), cfg.solver, cfg.auto_noise_budget);
    if (cfg.items < 1) throw ArgumentError("config items must be positive");
    return cfg;
  });
}

ImageDemoConfig default_image_demo_config(int regressors, double low, double high) {
  if (regressors < 2) throw ArgumentError("image demo needs at least two regressors");
  ImageDemoConfig cfg;
  for (int c = 0; c < 3; ++c) {
    NoiseSpec& spec = cfg.channels[static_cast<std::size_t>(c)];
    for (int r = 0; r < regressors; ++r)
      spec.regressors.push_back({NoiseKind::kUniform, r % 3 == c ? high : low, 0.0});
  }
  return cfg;
}

ImageDemoConfig load_image_demo_config(const std::string& path) {
  const Json j = read_json_file(path);
  check_document(j);
  return config_guard(path, [&] {
    ImageDemoConfig cfg;
    const auto& channels = j.at("channels");
    if (!channels.is_array() || channels.size() != 3)
      throw ParseError("bad config '" + path + "': channels must list three noise specs");
    for (std::size_t c = 0; c < 3; ++c) cfg.channels[c] = channels.at(c).get<NoiseSpec>();
    for (std::size_t c = 1; c < 3; ++c)
      if (cfg.channels[c].size() != cfg.channels[0].size())
        throw ParseError("bad config '" + path + "': channels disagree on regressor count");
    cfg.mode = moment_mode_from_string(j.value("mode", std::string("diagonal")));
    cfg.width = j.value("width", cfg.width);
    cfg.height = j.value("height", cfg.height);
    if (j.contains("solver")) solver_from_json(j.at("solver"), cfg.solver, cfg.auto_noise_budget);
    return cfg;
  });
}

ImageDemoResult run_image_demo(const Image& clean, const ImageDemoConfig& cfg, std::uint64_t seed) {
  const int n = cfg.channels[0].size();
  ImageDemoResult result;
  result.clean = clean;
  result.noisy.assign(static_cast<std::size_t>(n), Image::blank(clean.width, clean.height));
  result.fused = Image::blank(clean.width, clean.height);
  result.averaged = Image::blank(clean.width, clean.height);

  for (std::size_t c = 0; c < 3; ++c) {
    if (cfg.channels[c].size() != n)
      throw ArgumentError("image demo channels disagree on regressor count");
    const Simulation sim = generate(TruthSource::image_channel(clean.channels[c]), cfg.channels[c],
                                    clean.pixels(), splitmix64(seed + c));
    const PairwiseStats stats = compute_pairwise_stats(sim.predictions);
    result.reports[c] = estimate_moments(stats, cfg.mode, cfg.solver, cfg.auto_noise_budget);
    const FusionWeights w = inverse_variance_weights(result.reports[c].moments());
    result.weights[c] = w.weights;
    result.fused.channels[c] = fuse(sim.predictions, w);
    result.averaged.channels[c] = average(sim.predictions);
    for (int r = 0; r < n; ++r)
      result.noisy[static_cast<std::size_t>(r)].channels[c] = sim.predictions.data().col(r);
  }

  auto image_mse = [&](const Image& img) {
    double total = 0.0;
    for (std::size_t c = 0; c < 3; ++c) total += mean_squared_error(img.channels[c], clean.channels[c]);
    return total / 3.0;
  };
  for (const auto& img : result.noisy) result.noisy_mse.push_back(image_mse(img));
  result.fused_mse = image_mse(result.fused);
  result.average_mse = image_mse(result.averaged);
  return result;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ground-truth-free error moment recovery for regressor ensembles", "regerr"};
  app.require_subcommand(1);
  Options opt;

  auto* stats = app.add_subcommand("stats", "Pairwise difference statistics of a prediction CSV");
  stats->add_option("input", opt.input, "Prediction CSV")->required()->check(CLI::ExistingFile);
  stats->add_option("--output,-o", opt.output, "Output file (default stdout)");
  add_format_option(stats, opt);

  auto* estimate = app.add_subcommand("estimate", "Recover second error moments");
  estimate->add_option("input", opt.input, "Prediction CSV")->required()->check(CLI::ExistingFile);
  estimate->add_option("--output,-o", opt.output, "Output file (default stdout)");
  estimate->add_option("--plot", opt.plot, "Write recovered components as two-column CSV");
  add_solver_options(estimate, opt);
  add_format_option(estimate, opt);

  auto* bias = app.add_subcommand("bias", "Recover relative biases (l1 representative)");
  bias->add_option("input", opt.input, "Prediction CSV")->required()->check(CLI::ExistingFile);
  bias->add_option("--output,-o", opt.output, "Output file (default stdout)");
  add_format_option(bias, opt);

  auto* fusecmd = app.add_subcommand("fuse", "Precision-weighted fusion of the regressors");
  fusecmd->add_option("input", opt.input, "Prediction CSV")->required()->check(CLI::ExistingFile);
  fusecmd->add_option("--output,-o", opt.output, "Fused column CSV (default stdout)");
  fusecmd->add_option("--moments", opt.moments, "Moment report JSON from 'estimate'")
      ->check(CLI::ExistingFile);
  fusecmd->add_option("--report", opt.report, "Write the weight report here");
  fusecmd->add_option("--weighting", opt.weighting, "inverse-variance or moment-matrix")
      ->check(CLI::IsMember({"inverse-variance", "moment-matrix"}));
  add_solver_options(fusecmd, opt);
  add_format_option(fusecmd, opt);

  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic ensemble and score recovery");
  simulate->add_option("config", opt.config, "Simulation config JSON")
      ->required()
      ->check(CLI::ExistingFile);
  simulate->add_option("--seed", opt.seed, "Override the config seed");
  simulate->add_option("--output,-o", opt.output, "Output directory")->required();
  add_format_option(simulate, opt);

  auto* demo = app.add_subcommand("image-demo", "Noisy-channel image reconstruction demo");
  demo->add_option("--input,-i", opt.input, "Clean P6 PPM image (default: generated gradient)")
      ->check(CLI::ExistingFile);
  demo->add_option("--config", opt.config, "Image demo noise config JSON")
      ->check(CLI::ExistingFile);
  demo->add_option("--seed", opt.seed, "Random seed (default 42)");
  demo->add_option("--output,-o", opt.output, "Output directory")->required();
  demo->add_option("--width", opt.width, "Generated image width")->check(CLI::PositiveNumber);
  demo->add_option("--height", opt.height, "Generated image height")->check(CLI::PositiveNumber);
  demo->add_option("--regressors", opt.regressors, "Regressor count without --config")
      ->check(CLI::Range(2, 64));
  add_solver_options(demo, opt);
  add_format_option(demo, opt);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (stats->parsed()) return cmd_stats(opt, out);
    if (estimate->parsed()) return cmd_estimate(opt, out, err);
    if (bias->parsed()) return cmd_bias(opt, out, err);
    if (fusecmd->parsed()) return cmd_fuse(opt, out, err);
    if (simulate->parsed()) return cmd_simulate(opt, out);
    if (demo->parsed()) return cmd_image_demo(opt, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsageError;
}

}  // namespace regerr::cli
