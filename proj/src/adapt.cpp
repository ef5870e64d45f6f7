// src/adapt.cpp

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

#include "spdot/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "spdot/errors.hpp"

namespace spdot {
namespace {

void require_uniform_dim(std::span<const SpdMatrix> a, std::span<const SpdMatrix> b,
                         const char* what) {
  if (a.empty() || b.empty()) {
    throw InvalidInput(std::string(what) + ": empty point set");
  }
  const int dim = a.front().dim();
  auto mismatch = [dim](const SpdMatrix& m) { return m.dim() != dim; };
  if (std::any_of(a.begin(), a.end(), mismatch) ||
      std::any_of(b.begin(), b.end(), mismatch)) {
    throw InvalidInput(std::string(what) + ": matrices of different dimensions");
  }
}

// Runs one pipeline step and tags any library error with its name.
template <typename F>
auto step(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const PipelineError&) {
    throw;
  } catch (const Error& e) {
    throw PipelineError(name, e);
  }
}

MassVector mass_for(std::span<const SpdMatrix> points, const AdaptationConfig& config) {
  if (config.mass_policy == MassPolicy::kUniform) return MassVector::uniform(points.size());
  const double sigma2 = config.kde_sigma2 ? *config.kde_sigma2 : median_kde_sigma2(points);
  return kde_weights(points, sigma2);
}

}  // namespace

std::string to_string(Metric metric) {
  return metric == Metric::kRiemannian ? "riemannian" : "euclidean";
}

std::string to_string(Solver solver) {
  switch (solver) {
    case Solver::kExact:
      return "exact";
    case Solver::kSinkhorn:
      return "sinkhorn";
    case Solver::kSinkhornLabels:
      return "sinkhorn-labels";
  }
  return "unknown";
}

std::string to_string(MassPolicy policy) {
  return policy == MassPolicy::kUniform ? "uniform" : "kde";
}

MassVector kde_weights(std::span<const SpdMatrix> points, double sigma2) {
  if (points.empty()) throw InvalidInput("kde_weights: empty point set");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw InvalidInput("kde_weights: sigma^2 must be positive and finite");
  }
  const std::size_t n = points.size();
  Matrix d2 = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = squared_riemannian_distance(points[i], points[j]);
      d2(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      d2(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  }
  const Vector density = (-d2 / (2.0 * sigma2)).array().exp().rowwise().sum();
  const double z = density.sum();
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = density(static_cast<Eigen::Index>(i)) / z;
  // Absorb the rounding of the normalization into the largest weight.
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  *std::max_element(w.begin(), w.end()) += 1.0 - total;
  return MassVector(std::move(w));
}

double median_kde_sigma2(std::span<const SpdMatrix> points) {
  std::vector<double> d2;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      d2.push_back(squared_riemannian_distance(points[i], points[j]));
    }
  }
  if (d2.empty()) return 1.0;
  const double med = median(d2);
  return med > 0.0 ? med : 1.0;
}

CostMatrix build_cost(std::span<const SpdMatrix> source, std::span<const SpdMatrix> target,
                      Metric metric) {
  require_uniform_dim(source, target, "build_cost");
  Matrix c(static_cast<Eigen::Index>(source.size()), static_cast<Eigen::Index>(target.size()));
  for (std::size_t i = 0; i < source.size(); ++i) {
    for (std::size_t j = 0; j < target.size(); ++j) {
      c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          metric == Metric::kRiemannian
              ? squared_riemannian_distance(source[i], target[j])
              : (source[i].matrix() - target[j].matrix()).squaredNorm();
    }
  }
  return CostMatrix(std::move(c), metric);
}

BarycentricResult barycentric_map(std::span<const SpdMatrix> source,
                                  std::span<const SpdMatrix> target,
                                  const TransportPlan& plan, std::optional<int> top_k,
                                  const MeanOptions& mean) {
  if (static_cast<std::size_t>(plan.rows()) != source.size() ||
      static_cast<std::size_t>(plan.cols()) != target.size()) {
    throw InvalidInput("barycentric_map: plan shape does not match the point sets");
  }
  if (top_k && (*top_k < 1 || *top_k > plan.cols())) {
    std::ostringstream os;
    os << "barycentric_map: top_k = " << *top_k << " must lie in [1, " << plan.cols() << "]";
    throw InvalidInput(os.str());
  }
  const std::size_t n2 = target.size();
  BarycentricResult out;
  out.points.reserve(source.size());
  out.diagnostics.reserve(source.size());
  std::vector<double> row(n2);
  std::vector<std::size_t> order(n2);
  for (Eigen::Index i = 0; i < plan.rows(); ++i) {
    for (std::size_t j = 0; j < n2; ++j) row[j] = plan(i, static_cast<Eigen::Index>(j));
    if (top_k && static_cast<std::size_t>(*top_k) < n2) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return row[a] > row[b]; });
      for (std::size_t r = static_cast<std::size_t>(*top_k); r < n2; ++r) row[order[r]] = 0.0;
    }
    const double total = std::accumulate(row.begin(), row.end(), 0.0);
    if (!(total > 0.0)) {
      std::ostringstream os;
      os << "barycentric_map: plan row " << i << " carries no mass";
      throw DegeneratePlan(os.str());
    }
    for (double& w : row) w /= total;
    const double drift = 1.0 - std::accumulate(row.begin(), row.end(), 0.0);
    *std::max_element(row.begin(), row.end()) += drift;

    FrechetMean m = frechet_mean(target, row, mean);
    out.diagnostics.push_back({m.iterations, m.residual});
    out.points.push_back(std::move(m.mean));
  }
  return out;
}

AdaptationResult adapt(std::span<const SpdMatrix> source, std::span<const SpdMatrix> target,
                       const std::optional<LabelSet>& source_labels,
                       const AdaptationConfig& config) {
  step("input", [&] {
    require_uniform_dim(source, target, "adapt");
    if (config.solver == Solver::kSinkhornLabels) {
      if (!source_labels) {
        throw InvalidInput("the sinkhorn-labels solver needs source labels");
      }
      if (source_labels->size() != source.size()) {
        throw InvalidInput("source label count does not match the source set");
      }
    }
    if (config.top_k && (*config.top_k < 1 || static_cast<std::size_t>(*config.top_k) >
                                                  target.size())) {
      throw InvalidInput("top_k must lie in [1, N2]");
    }
    return 0;
  });

  MassVector p = step("mass", [&] { return mass_for(source, config); });
  MassVector q = step("mass", [&] { return mass_for(target, config); });
  CostMatrix cost = step("cost", [&] { return build_cost(source, target, config.metric); });

  double lambda_used = 0.0;
  double eta_used = 0.0;
  TransportPlan plan = step("plan", [&] {
    if (config.solver == Solver::kExact) return exact_ot(cost, p, q);
    lambda_used = config.lambda ? *config.lambda : adaptive_lambda(cost);
    if (config.solver == Solver::kSinkhorn) {
      return sinkhorn(cost, p, q, lambda_used, config.sinkhorn);
    }
    eta_used = config.eta ? *config.eta : 2.0 * median_entry(cost.entries());
    LabelSinkhornOptions options = config.label_sinkhorn;
    options.inner = config.sinkhorn;
    return sinkhorn_with_labels(cost, p, q, *source_labels, lambda_used, eta_used, options);
  });

  BarycentricResult mapped = step("barycentric", [&] {
    return barycentric_map(source, target, plan, config.top_k, config.mean);
  });

  return AdaptationResult{std::move(mapped.points),
                          std::move(plan),
                          std::move(cost),
                          lambda_used,
                          eta_used,
                          std::move(p),
                          std::move(q),
                          std::move(mapped.diagnostics)};
}

MdmModel mdm_fit(std::span<const SpdMatrix> train, const LabelSet& labels,
                 const MeanOptions& mean) {
  if (train.size() != labels.size()) {
    throw InvalidInput("mdm_fit: label count does not match the training set");
  }
  MdmModel model;
  for (std::size_t k = 0; k < labels.classes().size(); ++k) {
    std::vector<SpdMatrix> members;
    for (int i : labels.groups()[k]) members.push_back(train[static_cast<std::size_t>(i)]);
    model.emplace(labels.classes()[k], frechet_mean(members, mean).mean);
  }
  return model;
}

int mdm_classify(const SpdMatrix& query, const MdmModel& model) {
  if (model.empty()) throw InvalidInput("mdm_classify: no class means");
  int best_label = model.begin()->first;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [label, center] : model) {
    const double d = riemannian_distance(query, center);
    if (d < best) {
      best = d;
      best_label = label;
    }
  }
  return best_label;
}

}  // namespace spdot
