#include "regerr/report_json.hpp"

namespace regerr {

namespace {

Json vector_to_json(const Vector& v) {
  Json a = Json::array();
  for (Index k = 0; k < v.size(); ++k) a.push_back(v(k));
  return a;
}

Vector vector_from_json(const Json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

std::string label(const std::vector<std::string>& names, int r) {
  return names.empty() ? std::to_string(r) : names[static_cast<std::size_t>(r)];
}

}  // namespace

Json make_document(std::string_view kind) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = kind;
  return doc;
}

void check_document(const Json& doc) {
  if (!doc.is_object() || !doc.contains("schema_version"))
    throw ParseError("report is missing schema_version");
  if (doc.at("schema_version").get<int>() != kSchemaVersion)
    throw ParseError("unsupported report schema_version " + doc.at("schema_version").dump());
}

std::vector<std::string> pair_labels(int regressors, PairMode mode,
                                     const std::vector<std::string>& names) {
  std::vector<std::string> out;
  const PairIndexMap map(regressors, mode);
  for (const auto& [a, b] : map.pairs())
    out.push_back("(" + label(names, a) + "," + label(names, b) + ")");
  return out;
}

void to_json(Json& j, const PairwiseStats& stats) {
  j = Json::object();
  j["regressors"] = stats.regressors;
  j["items"] = stats.items;
  Json pairs = Json::array();
  const PairIndexMap map(stats.regressors, PairMode::kStrict);
  for (const auto& [a, b] : map.pairs())
    pairs.push_back({a, b});
  j["pairs"] = std::move(pairs);
  j["delta"] = vector_to_json(stats.delta);
  j["delta_sq"] = vector_to_json(stats.delta_sq);
}

void from_json(const Json& j, PairwiseStats& stats) {
  stats.regressors = j.at("regressors").get<int>();
  stats.items = j.at("items").get<Index>();
  stats.delta = vector_from_json(j.at("delta"));
  stats.delta_sq = vector_from_json(j.at("delta_sq"));
}

void to_json(Json& j, const SolverInfo& info) {
  j = Json::object();
  j["method"] = info.method;
  j["status"] = to_string(info.status);
  j["iterations"] = info.iterations;
  j["primal_residual"] = info.primal_residual;
  j["dual_residual"] = info.dual_residual;
  j["duality_gap"] = info.duality_gap;
  j["tolerance"] = info.tolerance;
  j["polished"] = info.polished;
}

void from_json(const Json& j, SolverInfo& info) {
  info.method = j.at("method").get<std::string>();
  const auto status = j.at("status").get<std::string>();
  info.status = status == to_string(SolverStatus::kConverged) ? SolverStatus::kConverged
                                                              : SolverStatus::kMaxIterations;
  info.iterations = j.at("iterations").get<int>();
  info.primal_residual = j.at("primal_residual").get<double>();
  info.dual_residual = j.at("dual_residual").get<double>();
  info.duality_gap = j.at("duality_gap").get<double>();
  info.tolerance = j.at("tolerance").get<double>();
  info.polished = j.at("polished").get<bool>();
}

void to_json(Json& j, const RecoveryReport& report) {
  j = Json::object();
  j["mode"] = to_string(report.mode);
  j["regressors"] = report.regressors;
  j["estimate"] = vector_to_json(report.estimate);
  j["residual_norm"] = report.residual_norm;
  j["noise_budget"] = report.noise_budget;
  j["solver"] = report.solver;
  j["clamped"] = report.clamped;
  j["null_space_dimension"] = report.null_space_dimension;
  j["warnings"] = report.warnings;
}

void from_json(const Json& j, RecoveryReport& report) {
  report.mode = recovery_mode_from_string(j.at("mode").get<std::string>());
  report.regressors = j.at("regressors").get<int>();
  report.estimate = vector_from_json(j.at("estimate"));
  report.residual_norm = j.at("residual_norm").get<double>();
  report.noise_budget = j.at("noise_budget").get<double>();
  report.solver = j.at("solver").get<SolverInfo>();
  report.clamped = j.at("clamped").get<std::vector<int>>();
  report.null_space_dimension = j.at("null_space_dimension").get<int>();
  report.warnings = j.at("warnings").get<std::vector<std::string>>();
}

void to_json(Json& j, const NoiseSpec& spec) {
  j = Json::object();
  Json regs = Json::array();
  for (const auto& r : spec.regressors)
    regs.push_back({{"distribution", to_string(r.kind)}, {"scale", r.scale}, {"bias", r.bias}});
  j["regressors"] = std::move(regs);
  Json pairs = Json::array();
  for (const auto& p : spec.correlated_pairs)
    pairs.push_back({{"first", p.first},
                     {"second", p.second},
                     {"distribution", to_string(p.kind)},
                     {"scale", p.scale}});
  j["correlated_pairs"] = std::move(pairs);
}

void from_json(const Json& j, NoiseSpec& spec) {
  spec = {};
  for (const auto& r : j.at("regressors")) {
    RegressorNoise noise;
    noise.kind = noise_kind_from_string(r.value("distribution", std::string("gaussian")));
    noise.scale = r.value("scale", 0.0);
    noise.bias = r.value("bias", 0.0);
    spec.regressors.push_back(noise);
  }
  if (j.contains("correlated_pairs")) {
    for (const auto& p : j.at("correlated_pairs")) {
      SharedNoise shared;
      shared.first = p.at("first").get<int>();
      shared.second = p.at("second").get<int>();
      shared.kind = noise_kind_from_string(p.value("distribution", std::string("gaussian")));
      shared.scale = p.value("scale", 0.0);
      spec.correlated_pairs.push_back(shared);
    }
  }
  spec.validate();
}

void to_json(Json& j, const Score& score) {
  j = Json::object();
  j["max_abs_error"] = score.max_abs_error;
  j["rmse"] = score.rmse;
  j["support_threshold"] = score.threshold;
  j["support_precision"] = score.precision;
  j["support_recall"] = score.recall;
  j["true_support"] = score.true_support;
  j["recovered_support"] = score.recovered_support;
}

void to_json(Json& j, const FusionEvaluation& eval) {
  j = Json::object();
  j["weighted_mse"] = eval.mse;
  j["average_mse"] = eval.average_mse;
}

}  // namespace regerr
