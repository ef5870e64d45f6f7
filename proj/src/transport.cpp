// src/transport.cpp

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

#include "spdot/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "spdot/errors.hpp"

namespace spdot {
namespace {

constexpr double kMarginalTol = 1e-6;
constexpr double kKernelFloor = 1e-300;

void require_shape(const CostMatrix& cost, const MassVector& p, const MassVector& q,
                   const char* what) {
  if (static_cast<std::size_t>(cost.rows()) != p.size() ||
      static_cast<std::size_t>(cost.cols()) != q.size()) {
    std::ostringstream os;
    os << what << ": cost is " << cost.rows() << "x" << cost.cols()
       << " but marginals have sizes " << p.size() << " and " << q.size();
    throw InvalidInput(os.str());
  }
}

double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

MassVector::MassVector(std::vector<double> weights) : w_(std::move(weights)) {
  if (w_.empty()) throw InvalidInput("MassVector: empty weight vector");
  double total = 0.0;
  for (double w : w_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InvalidInput("MassVector: weights must be finite and nonnegative");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "MassVector: weights sum to " << total << ", expected 1";
    throw InvalidInput(os.str());
  }
}

MassVector MassVector::uniform(std::size_t n) {
  if (n == 0) throw InvalidInput("MassVector: empty weight vector");
  return MassVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Vector MassVector::as_vector() const {
  return Eigen::Map<const Vector>(w_.data(), static_cast<Eigen::Index>(w_.size()));
}

bool MassVector::is_uniform(double tol) const {
  const double expected = 1.0 / static_cast<double>(w_.size());
  return std::all_of(w_.begin(), w_.end(),
                     [&](double w) { return std::abs(w - expected) <= tol; });
}

CostMatrix::CostMatrix(Matrix entries, Metric metric)
    : c_(std::move(entries)), metric_(metric) {
  if (c_.size() == 0) throw InvalidInput("CostMatrix: empty matrix");
  if (!c_.allFinite()) throw InvalidInput("CostMatrix: entries must be finite");
  if (c_.minCoeff() < 0.0) throw InvalidInput("CostMatrix: entries must be nonnegative");
}

TransportPlan::TransportPlan(Matrix gamma, MassVector source, MassVector target)
    : gamma_(std::move(gamma)), source_(std::move(source)), target_(std::move(target)) {
  if (static_cast<std::size_t>(gamma_.rows()) != source_.size() ||
      static_cast<std::size_t>(gamma_.cols()) != target_.size()) {
    throw InvalidInput("TransportPlan: shape does not match the marginals");
  }
  if (!gamma_.allFinite() || gamma_.minCoeff() < 0.0) {
    throw InvalidInput("TransportPlan: entries must be finite and nonnegative");
  }
  const double rs = source_residual();
  const double cs = target_residual();
  if (rs > kMarginalTol || cs > kMarginalTol) {
    std::ostringstream os;
    os << "TransportPlan: marginal residuals " << rs << " / " << cs << " exceed "
       << kMarginalTol;
    throw InvalidInput(os.str());
  }
}

double TransportPlan::objective(const CostMatrix& cost) const {
  if (cost.rows() != rows() || cost.cols() != cols()) {
    throw InvalidInput("TransportPlan::objective: shape mismatch");
  }
  return gamma_.cwiseProduct(cost.entries()).sum();
}

double TransportPlan::source_residual() const {
  return max_abs(gamma_.rowwise().sum() - source_.as_vector());
}

double TransportPlan::target_residual() const {
  return max_abs(gamma_.colwise().sum().transpose() - target_.as_vector());
}

LabelSet::LabelSet(std::vector<int> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw InvalidInput("LabelSet: no labels");
  classes_ = labels_;
  std::sort(classes_.begin(), classes_.end());
  classes_.erase(std::unique(classes_.begin(), classes_.end()), classes_.end());
  groups_.resize(classes_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const auto it = std::lower_bound(classes_.begin(), classes_.end(), labels_[i]);
    groups_[static_cast<std::size_t>(it - classes_.begin())].push_back(static_cast<int>(i));
  }
}

TransportPlan exact_ot(const CostMatrix& cost, const MassVector& p, const MassVector& q) {
  require_shape(cost, p, q, "exact_ot");
  if (p.size() != q.size() || !p.is_uniform() || !q.is_uniform()) {
    throw UnsupportedInstance(
        "exact_ot: only uniform marginals of equal size are supported; use sinkhorn");
  }
  const std::vector<int> perm = solve_assignment(cost.entries());
  const double mass = 1.0 / static_cast<double>(p.size());
  Matrix gamma = Matrix::Zero(cost.rows(), cost.cols());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    gamma(static_cast<Eigen::Index>(i), perm[i]) = mass;
  }
  return TransportPlan(std::move(gamma), p, q);
}

TransportPlan sinkhorn(const CostMatrix& cost, const MassVector& p, const MassVector& q,
                       double lambda, const SinkhornOptions& options) {
  require_shape(cost, p, q, "sinkhorn");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidInput("sinkhorn: lambda must be positive and finite");
  }
  const Eigen::Index n1 = cost.rows();
  const Eigen::Index n2 = cost.cols();

  Matrix kernel = (-lambda * cost.entries()).array().exp().matrix();
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> clamped =
      kernel.array() < kKernelFloor;
  kernel = kernel.cwiseMax(kKernelFloor);
  for (Eigen::Index i = 0; i < n1; ++i) {
    if (clamped.row(i).all()) {
      std::ostringstream os;
      os << "sinkhorn: kernel row " << i << " underflows entirely; lower lambda";
      throw NumericalFailure(os.str());
    }
  }
  for (Eigen::Index j = 0; j < n2; ++j) {
    if (clamped.col(j).all()) {
      std::ostringstream os;
      os << "sinkhorn: kernel column " << j << " underflows entirely; lower lambda";
      throw NumericalFailure(os.str());
    }
  }

  const Vector c = p.as_vector();
  const Vector r = q.as_vector();
  // u = 1 / (K~ z) with K~ = diag(1/c) K, written as c / (K z) so that zero
  // source weights stay finite.
  Vector u = Vector::Constant(n1, 1.0 / static_cast<double>(n1));
  Vector z(n2);
  int iter = 0;
  for (;; ++iter) {
    z = r.cwiseQuotient(kernel.transpose() * u);
    Vector next = c.cwiseQuotient(kernel * z);
    if (!next.allFinite() || !z.allFinite()) {
      throw NumericalFailure("sinkhorn: scaling vectors became non-finite; lower lambda");
    }
    const double change = max_abs(next - u) / max_abs(next);
    u = std::move(next);
    if (change <= options.tol) break;
    if (iter + 1 >= options.max_iter) {
      Matrix last = u.asDiagonal() * kernel * r.cwiseQuotient(kernel.transpose() * u).asDiagonal();
      std::ostringstream os;
      os << "sinkhorn: no convergence after " << options.max_iter
         << " iterations (relative change " << change << ")";
      throw ConvergenceFailure(os.str(), std::move(last), change, iter + 1);
    }
  }
  const Vector v = r.cwiseQuotient(kernel.transpose() * u);
  Matrix gamma = u.asDiagonal() * kernel * v.asDiagonal();
  if (!gamma.allFinite()) throw NumericalFailure("sinkhorn: plan is not finite");

  const double rs = max_abs(gamma.rowwise().sum() - c);
  const double cs = max_abs(gamma.colwise().sum().transpose() - r);
  if (rs > kMarginalTol || cs > kMarginalTol) {
    std::ostringstream os;
    os << "sinkhorn: converged plan misses the marginals (" << rs << ", " << cs
       << "); lower lambda or tighten tol";
    throw NumericalFailure(os.str());
  }
  return TransportPlan(std::move(gamma), p, q);
}

double median(std::span<const double> values) {
  if (values.empty()) throw InvalidInput("median: empty input");
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower =
      *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double median_entry(const Matrix& m) {
  return median(std::span<const double>(m.data(), static_cast<std::size_t>(m.size())));
}

double adaptive_lambda(const CostMatrix& cost) {
  if (cost.entries().maxCoeff() <= 0.0) {
    throw InvalidInput("adaptive_lambda: cost matrix is identically zero");
  }
  const double med = median_entry(cost.entries());
  if (!(med > 0.0)) {
    throw InvalidInput("adaptive_lambda: median cost is zero");
  }
  const double m = 0.05 * med;
  return 1.0 / (2.0 * m * m);
}

double group_lasso_penalty(const Matrix& gamma, const LabelSet& labels) {
  if (static_cast<std::size_t>(gamma.rows()) != labels.size()) {
    throw InvalidInput("group_lasso_penalty: label count does not match plan rows");
  }
  double total = 0.0;
  for (Eigen::Index j = 0; j < gamma.cols(); ++j) {
    for (const auto& group : labels.groups()) {
      double l1 = 0.0;
      for (int i : group) l1 += std::abs(gamma(i, j));
      total += l1 * l1;
    }
  }
  return total;
}

TransportPlan sinkhorn_with_labels(const CostMatrix& cost0, const MassVector& p,
                                   const MassVector& q, const LabelSet& labels,
                                   double lambda, double eta,
                                   const LabelSinkhornOptions& options) {
  require_shape(cost0, p, q, "sinkhorn_with_labels");
  if (labels.size() != p.size()) {
    throw InvalidInput("sinkhorn_with_labels: label count does not match source size");
  }
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw InvalidInput("sinkhorn_with_labels: eta must be finite and nonnegative");
  }

  Matrix penalty_grad = Matrix::Zero(cost0.rows(), cost0.cols());
  Matrix previous;
  double change = 0.0;
  for (int outer = 0; outer < options.max_outer; ++outer) {
    const CostMatrix cost(cost0.entries() + penalty_grad, cost0.metric());
    TransportPlan plan = sinkhorn(cost, p, q, lambda, options.inner);
    if (outer > 0) {
      change = (plan.gamma() - previous).cwiseAbs().maxCoeff();
      if (change <= options.outer_tol) return plan;
    }
    for (Eigen::Index j = 0; j < cost0.cols(); ++j) {
      for (const auto& group : labels.groups()) {
        double l1 = 0.0;
        for (int i : group) l1 += plan(i, j);
        const double g =
            eta * options.exponent * std::pow(l1 + options.eps_reg, options.exponent - 1.0);
        for (int i : group) penalty_grad(i, j) = g;
      }
    }
    previous = plan.gamma();
  }
  std::ostringstream os;
  os << "sinkhorn_with_labels: plan still changing by " << change << " after "
     << options.max_outer << " outer iterations";
  throw ConvergenceFailure(os.str(), previous, change, options.max_outer);
}

}  // namespace spdot
