#include "regerr/cli.hpp"
#include "regerr/csv.hpp"
#include "regerr/fusion.hpp"
#include "regerr/pairwise_stats.hpp"
#include "regerr/recovery.hpp"
#include "regerr/synth.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace regerr;

namespace {

PredictionMatrix to_predictions(const Matrix& data, std::vector<std::string> names) {
  PredictionMatrix m(data, std::move(names));
  require_valid(m);
  return m;
}

MomentVector moments_from_array(const Eigen::Ref<const Matrix>& values) {
  if (values.cols() == 1) return MomentVector::from_diagonal(values.col(0));
  if (values.rows() == 1) return MomentVector::from_diagonal(values.row(0).transpose());
  return MomentVector::from_matrix(values);
}

}  // namespace

PYBIND11_MODULE(_regerr, mod) {
  mod.doc() = "Ground-truth-free error moment recovery for regressor ensembles";

  py::register_exception<ParseError>(mod, "ParseError", PyExc_ValueError);

  py::class_<PairwiseStats>(mod, "PairwiseStats")
      .def_readonly("regressors", &PairwiseStats::regressors)
      .def_readonly("items", &PairwiseStats::items)
      .def_readonly("delta", &PairwiseStats::delta)
      .def_readonly("delta_sq", &PairwiseStats::delta_sq)
      .def("mean_difference", &PairwiseStats::mean_difference, py::arg("r1"), py::arg("r2"))
      .def("mean_square_difference", &PairwiseStats::mean_square_difference, py::arg("r1"),
           py::arg("r2"))
      .def("__repr__", [](const PairwiseStats& s) {
        return "PairwiseStats(regressors=" + std::to_string(s.regressors) +
               ", items=" + std::to_string(s.items) + ")";
      });

  py::class_<RecoveryReport>(mod, "RecoveryReport")
      .def_property_readonly("mode", [](const RecoveryReport& r) { return std::string(to_string(r.mode)); })
      .def_readonly("regressors", &RecoveryReport::regressors)
      .def_readonly("estimate", &RecoveryReport::estimate)
      .def_readonly("residual_norm", &RecoveryReport::residual_norm)
      .def_readonly("noise_budget", &RecoveryReport::noise_budget)
      .def_readonly("clamped", &RecoveryReport::clamped)
      .def_readonly("null_space_dimension", &RecoveryReport::null_space_dimension)
      .def_readonly("warnings", &RecoveryReport::warnings)
      .def_property_readonly("ok", &RecoveryReport::ok)
      .def_property_readonly("status",
                             [](const RecoveryReport& r) { return std::string(to_string(r.solver.status)); })
      .def_property_readonly("iterations", [](const RecoveryReport& r) { return r.solver.iterations; })
      .def_property_readonly("duality_gap", [](const RecoveryReport& r) { return r.solver.duality_gap; })
      .def("moment_matrix", [](const RecoveryReport& r) { return r.moments().to_matrix(); },
           "Symmetric R x R second-moment matrix (moment reports only).")
      .def("__repr__", [](const RecoveryReport& r) {
        return "RecoveryReport(mode='" + std::string(to_string(r.mode)) +
               "', regressors=" + std::to_string(r.regressors) + ")";
      });

  mod.def(
      "compute_pairwise_stats",
      [](const Matrix& predictions, unsigned threads) {
        return compute_pairwise_stats(to_predictions(predictions, {}), threads);
      },
      py::arg("predictions"), py::arg("threads") = 1,
      "Mean and mean-square pairwise differences of a (items x regressors) array.");

  mod.def("recover_moments_diagonal", &recover_moments_diagonal, py::arg("stats"),
          "Per-regressor error variances by least squares (needs R >= 3).");

  mod.def(
      "recover_moments_full",
      [](const PairwiseStats& stats, py::object noise_budget, double tolerance, int max_iter) {
        L1SolverConfig cfg;
        cfg.tolerance = tolerance;
        cfg.max_iter = max_iter;
        if (py::isinstance<py::str>(noise_budget)) {
          if (noise_budget.cast<std::string>() != "auto")
            throw ArgumentError("noise_budget must be a number or 'auto'");
          cfg.noise_budget = default_noise_budget(stats);
        } else {
          cfg.noise_budget = noise_budget.cast<double>();
        }
        py::gil_scoped_release release;
        return recover_moments_full(stats, cfg);
      },
      py::arg("stats"), py::arg("noise_budget") = 0.0, py::arg("tolerance") = 1e-8,
      py::arg("max_iter") = 50000,
      "Sparse full second-moment matrix by weighted basis pursuit. noise_budget may be 'auto'.");

  mod.def("default_noise_budget", &default_noise_budget, py::arg("stats"));
  mod.def("recover_bias", &recover_bias, py::arg("stats"),
          "Relative biases: the l1-minimal solution, i.e. measured against the median regressor.");

  mod.def(
      "inverse_variance_weights",
      [](const Eigen::Ref<const Matrix>& moments) {
        return inverse_variance_weights(moments_from_array(moments)).weights;
      },
      py::arg("moments"), "Weights from a vector of variances or a moment matrix.");
  mod.def(
      "moment_matrix_weights",
      [](const Eigen::Ref<const Matrix>& moments) {
        return moment_matrix_weights(moments_from_array(moments)).weights;
      },
      py::arg("moments"));
  mod.def(
      "fuse",
      [](const Matrix& predictions, const Vector& weights) {
        return fuse(to_predictions(predictions, {}), FusionWeights{weights});
      },
      py::arg("predictions"), py::arg("weights"));

  mod.def(
      "generate",
      [](const std::vector<double>& scales, Index items, std::uint64_t seed,
         const std::string& distribution, std::vector<double> biases,
         const std::vector<std::tuple<int, int, double>>& correlated_pairs,
         std::optional<Vector> truth) {
        NoiseSpec spec;
        const NoiseKind kind = noise_kind_from_string(distribution);
        if (!biases.empty() && biases.size() != scales.size())
          throw ArgumentError("biases must match scales in length");
        biases.resize(scales.size(), 0.0);
        for (std::size_t r = 0; r < scales.size(); ++r) spec.regressors.push_back({kind, scales[r], biases[r]});
        for (const auto& [a, b, s] : correlated_pairs) spec.correlated_pairs.push_back({a, b, s, kind});
        const TruthSource source = truth ? TruthSource::user(*truth) : TruthSource::ramp(0.0, 1.0);
        Simulation sim = generate(source, spec, items, seed);
        py::dict bundle;
        bundle["truth"] = sim.bundle.truth;
        bundle["deltas"] = sim.bundle.deltas;
        bundle["true_moments"] = sim.bundle.true_moments.to_matrix();
        bundle["expected_moments"] = sim.bundle.expected_moments.to_matrix();
        bundle["true_biases"] = sim.bundle.true_biases.values;
        return py::make_tuple(sim.predictions.data(), bundle);
      },
      py::arg("scales"), py::arg("items"), py::arg("seed"), py::arg("distribution") = "gaussian",
      py::arg("biases") = std::vector<double>{},
      py::arg("correlated_pairs") = std::vector<std::tuple<int, int, double>>{},
      py::arg("truth") = py::none(),
      "Synthetic ensemble. Returns (predictions, bundle) with the hidden truth in bundle.");

  mod.def(
      "read_prediction_csv",
      [](const std::string& path) {
        const PredictionMatrix m = read_prediction_csv(std::filesystem::path(path));
        return py::make_tuple(m.data(), m.names());
      },
      py::arg("path"), "Returns (predictions, column names).");

  mod.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line in-process. Returns (exit code, stdout, stderr).");
}
