// include/spdot/transport.hpp

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

#pragma once

// Discrete optimal transport between weighted point clouds: exact
// assignment for uniform square instances, entropic Sinkhorn scaling, and
// Sinkhorn with a class-group penalty on the source labels.

#include <span>
#include <vector>

#include <Eigen/Core>

#include "spdot/manifold.hpp"

namespace spdot {

enum class Metric { kRiemannian, kEuclidean };

/// Nonnegative weights summing to one (within 1e-12).
class MassVector {
 public:
  explicit MassVector(std::vector<double> weights);

  static MassVector uniform(std::size_t n);

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  const std::vector<double>& weights() const { return w_; }
  Vector as_vector() const;
  bool is_uniform(double tol = 1e-12) const;

 private:
  std::vector<double> w_;
};

/// Pairwise squared-distance matrix between a source and a target set.
class CostMatrix {
 public:
  CostMatrix(Matrix entries, Metric metric);

  Eigen::Index rows() const { return c_.rows(); }
  Eigen::Index cols() const { return c_.cols(); }
  const Matrix& entries() const { return c_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return c_(i, j); }
  Metric metric() const { return metric_; }

 private:
  Matrix c_;
  Metric metric_;
};

/// Coupling with the given marginals. Construction enforces nonnegativity
/// and both marginal constraints within 1e-6 in the max norm.
class TransportPlan {
 public:
  TransportPlan(Matrix gamma, MassVector source, MassVector target);

  Eigen::Index rows() const { return gamma_.rows(); }
  Eigen::Index cols() const { return gamma_.cols(); }
  const Matrix& gamma() const { return gamma_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return gamma_(i, j); }
  const MassVector& source_marginal() const { return source_; }
  const MassVector& target_marginal() const { return target_; }

  /// <Gamma, C>
  double objective(const CostMatrix& cost) const;
  /// Max-norm residuals of the row and column sums against the marginals.
  double source_residual() const;
  double target_residual() const;

 private:
  Matrix gamma_;
  MassVector source_;
  MassVector target_;
};

/// Source labels and the index groups I_y they induce.
class LabelSet {
 public:
  explicit LabelSet(std::vector<int> labels);

  std::size_t size() const { return labels_.size(); }
  const std::vector<int>& labels() const { return labels_; }
  /// Distinct labels, ascending.
  const std::vector<int>& classes() const { return classes_; }
  /// groups()[k] holds the indices whose label is classes()[k].
  const std::vector<std::vector<int>>& groups() const { return groups_; }

 private:
  std::vector<int> labels_;
  std::vector<int> classes_;
  std::vector<std::vector<int>> groups_;
};

struct SinkhornOptions {
  double tol = 1e-9;  // on ||u_new - u||_inf / ||u_new||_inf
  int max_iter = 10000;
};

struct LabelSinkhornOptions {
  SinkhornOptions inner;
  double outer_tol = 1e-8;  // on ||Gamma_new - Gamma||_inf
  int max_outer = 50;
  double eps_reg = 1e-12;
  double exponent = 2.0;  // p in ||.||_1^p
};

/// Minimum-cost assignment for a square cost matrix: result[i] is the
/// column assigned to row i.
std::vector<int> solve_assignment(const Matrix& cost);

/// Exact OT for uniform marginals of equal size, where the optimum is a
/// scaled permutation. Anything else throws UnsupportedInstance.
TransportPlan exact_ot(const CostMatrix& cost, const MassVector& p, const MassVector& q);

/// Entropic OT by alternating diagonal scaling of K = exp(-lambda C).
TransportPlan sinkhorn(const CostMatrix& cost, const MassVector& p, const MassVector& q,
                       double lambda, const SinkhornOptions& options = {});

/// lambda = 1 / (2 m^2) with m = 0.05 * median(C).
double adaptive_lambda(const CostMatrix& cost);

/// Median over every entry; even counts average the two central values.
double median(std::span<const double> values);
double median_entry(const Matrix& m);

/// Sinkhorn with the penalty eta * sum_j sum_y ||Gamma(I_y, j)||_1^p, solved
/// by re-linearizing the penalty into the cost and re-running sinkhorn.
TransportPlan sinkhorn_with_labels(const CostMatrix& cost0, const MassVector& p,
                                   const MassVector& q, const LabelSet& labels,
                                   double lambda, double eta,
                                   const LabelSinkhornOptions& options = {});

/// sum_j sum_y ||Gamma(I_y, j)||_1^2
double group_lasso_penalty(const Matrix& gamma, const LabelSet& labels);

}  // namespace spdot
