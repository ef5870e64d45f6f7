// python/spdot_py.cpp

// Copyright 2026  The spdot Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Python bindings. Matrices cross the boundary as float64 numpy arrays and
// are validated into SpdMatrix on the C++ side.

#include <optional>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spdot/adapt.hpp"
#include "spdot/errors.hpp"
#include "spdot/experiments.hpp"
#include "spdot/manifold.hpp"
#include "spdot/transport.hpp"

namespace py = pybind11;
using namespace spdot;

namespace {

std::vector<SpdMatrix> to_points(const std::vector<Matrix>& ms) {
  std::vector<SpdMatrix> out;
  out.reserve(ms.size());
  for (const Matrix& m : ms) out.emplace_back(m);
  return out;
}

std::vector<Matrix> to_arrays(const std::vector<SpdMatrix>& ps) {
  std::vector<Matrix> out;
  out.reserve(ps.size());
  for (const SpdMatrix& p : ps) out.push_back(p.matrix());
  return out;
}

Metric parse_metric(const std::string& s) {
  if (s == "riemannian") return Metric::kRiemannian;
  if (s == "euclidean") return Metric::kEuclidean;
  throw InvalidInput("unknown metric '" + s + "'");
}

Solver parse_solver(const std::string& s) {
  if (s == "exact") return Solver::kExact;
  if (s == "sinkhorn") return Solver::kSinkhorn;
  if (s == "sinkhorn-labels") return Solver::kSinkhornLabels;
  throw InvalidInput("unknown solver '" + s + "'");
}

MassVector masses(const std::optional<std::vector<double>>& w, Eigen::Index n) {
  return w ? MassVector(*w) : MassVector::uniform(static_cast<std::size_t>(n));
}

}  // namespace

PYBIND11_MODULE(_spdot, m) {
  m.doc() = "Optimal transport on the SPD manifold";
  m.attr("__version__") = SPDOT_VERSION;

  static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
  static py::exception<InvalidInput> invalid(m, "InvalidInput", base.ptr());
  static py::exception<NotPositiveDefinite> not_pd(m, "NotPositiveDefinite", invalid.ptr());
  static py::exception<NumericalFailure> numerical(m, "NumericalFailure", base.ptr());
  static py::exception<ConvergenceFailure> convergence(m, "ConvergenceFailure", base.ptr());
  static py::exception<UnsupportedInstance> unsupported(m, "UnsupportedInstance", base.ptr());
  static py::exception<DegeneratePlan> degenerate(m, "DegeneratePlan", base.ptr());
  // Most derived first; PipelineError keeps the kind of its cause.
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const NotPositiveDefinite& e) {
      py::set_error(not_pd, e.what());
    } catch (const Error& e) {
      switch (e.kind()) {
        case ErrorKind::kInvalidInput: py::set_error(invalid, e.what()); break;
        case ErrorKind::kNotPositiveDefinite: py::set_error(not_pd, e.what()); break;
        case ErrorKind::kNumericalFailure: py::set_error(numerical, e.what()); break;
        case ErrorKind::kConvergenceFailure: py::set_error(convergence, e.what()); break;
        case ErrorKind::kUnsupportedInstance: py::set_error(unsupported, e.what()); break;
        case ErrorKind::kDegeneratePlan: py::set_error(degenerate, e.what()); break;
      }
    }
  });

  // manifold
  m.def("distance", [](const Matrix& p, const Matrix& q) {
    return riemannian_distance(SpdMatrix(p), SpdMatrix(q));
  }, py::arg("p"), py::arg("q"));
  m.def("geodesic", [](const Matrix& p, const Matrix& q, double t) {
    return geodesic(SpdMatrix(p), SpdMatrix(q), t).matrix();
  }, py::arg("p"), py::arg("q"), py::arg("t"));
  m.def("exp_map", [](const Matrix& p, const Matrix& a) {
    return exp_map(SpdMatrix(p), TangentVector(a)).matrix();
  }, py::arg("p"), py::arg("a"));
  m.def("log_map", [](const Matrix& p, const Matrix& q) {
    return log_map(SpdMatrix(p), SpdMatrix(q)).matrix();
  }, py::arg("p"), py::arg("q"));
  m.def("frechet_mean", [](const std::vector<Matrix>& points,
                           std::optional<std::vector<double>> weights) {
    const auto pts = to_points(points);
    if (!weights) return frechet_mean(pts).mean.matrix();
    return frechet_mean(pts, *weights).mean.matrix();
  }, py::arg("points"), py::arg("weights") = py::none());

  // transport
  m.def("exact_ot", [](const Matrix& c) {
    const CostMatrix cost(c, Metric::kEuclidean);
    return exact_ot(cost, MassVector::uniform(static_cast<std::size_t>(c.rows())),
                    MassVector::uniform(static_cast<std::size_t>(c.cols()))).gamma();
  }, py::arg("cost"));
  m.def("sinkhorn", [](const Matrix& c, double lambda, std::optional<std::vector<double>> p,
                       std::optional<std::vector<double>> q, double tol, int max_iter) {
    const CostMatrix cost(c, Metric::kEuclidean);
    return sinkhorn(cost, masses(p, c.rows()), masses(q, c.cols()), lambda,
                    SinkhornOptions{tol, max_iter}).gamma();
  }, py::arg("cost"), py::arg("lam"), py::arg("p") = py::none(), py::arg("q") = py::none(),
     py::arg("tol") = 1e-9, py::arg("max_iter") = 10000);
  m.def("adaptive_lambda", [](const Matrix& c) {
    return adaptive_lambda(CostMatrix(c, Metric::kEuclidean));
  }, py::arg("cost"));

  // adaptation
  m.def("adapt", [](const std::vector<Matrix>& source, const std::vector<Matrix>& target,
                    const std::string& metric, const std::string& solver,
                    std::optional<double> lambda, std::optional<double> eta,
                    std::optional<std::vector<int>> labels, bool kde) {
    AdaptationConfig cfg;
    cfg.metric = parse_metric(metric);
    cfg.solver = parse_solver(solver);
    cfg.lambda = lambda;
    cfg.eta = eta;
    cfg.mass_policy = kde ? MassPolicy::kKde : MassPolicy::kUniform;
    std::optional<LabelSet> ls;
    if (labels) ls.emplace(*labels);
    const AdaptationResult r = adapt(to_points(source), to_points(target), ls, cfg);
    py::dict out;
    out["adapted"] = to_arrays(r.adapted_source);
    out["plan"] = r.plan.gamma();
    out["lambda_used"] = r.lambda_used;
    out["eta_used"] = r.eta_used;
    return out;
  }, py::arg("source"), py::arg("target"), py::arg("metric") = "riemannian",
     py::arg("solver") = "exact", py::arg("lam") = py::none(), py::arg("eta") = py::none(),
     py::arg("labels") = py::none(), py::arg("kde") = false);

  // experiments
  m.def("random_spd", [](int dim, int count, double scale, std::uint64_t seed) {
    return to_arrays(random_spd(dim, count, scale, seed));
  }, py::arg("dim"), py::arg("count"), py::arg("scale") = 1.0, py::arg("seed") = 0);
  m.def("covariance", [](const Matrix& x) { return covariance(x).covariance.matrix(); },
        py::arg("data"));
}
