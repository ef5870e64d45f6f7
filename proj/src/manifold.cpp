// src/manifold.cpp

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

#include "spdot/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "spdot/errors.hpp"

namespace spdot {
namespace {

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

void require_square(const Matrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a nonempty square matrix, got " << m.rows() << "x"
       << m.cols();
    throw InvalidInput(os.str());
  }
}

void require_same_dim(const SpdMatrix& p, const SpdMatrix& q, const char* what) {
  if (p.dim() != q.dim()) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << p.dim() << " vs " << q.dim() << ")";
    throw InvalidInput(os.str());
  }
}

double apply_scalar(double x, const ScalarMap& f, double eps_pd) {
  using K = ScalarMap::Kind;
  if (f.kind != K::kExp && !(x > eps_pd)) {
    std::ostringstream os;
    os << "matrix_function: eigenvalue " << x << " is not above " << eps_pd;
    throw NotPositiveDefinite(os.str());
  }
  switch (f.kind) {
    case K::kLog:
      return std::log(x);
    case K::kExp:
      return std::exp(x);
    case K::kSqrt:
      return std::sqrt(x);
    case K::kInvSqrt:
      return 1.0 / std::sqrt(x);
    case K::kPower:
      return std::pow(x, f.exponent);
  }
  return x;
}

Matrix assemble(const SymEig& eig, const Vector& mapped) {
  return symmetrized(eig.vectors * mapped.asDiagonal() * eig.vectors.transpose());
}

Matrix apply_to_eig(const SymEig& eig, ScalarMap f, double eps_pd) {
  Vector mapped(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    mapped(i) = apply_scalar(eig.values(i), f, eps_pd);
  }
  return assemble(eig, mapped);
}

// Square root and inverse square root of P from a single decomposition.
struct SqrtPair {
  Matrix sqrt;
  Matrix inv_sqrt;
};

SqrtPair sqrt_pair(const SpdMatrix& p) {
  const SymEig eig = sym_eig(p.matrix());
  const Vector s = eig.values.cwiseSqrt();
  return {assemble(eig, s), assemble(eig, s.cwiseInverse())};
}

}  // namespace

bool is_symmetric(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      const double a = m(i, j);
      if (!std::isfinite(a) || !std::isfinite(m(j, i))) return false;
      if (std::abs(a - m(j, i)) > 1e-12 * std::max(1.0, std::abs(a))) return false;
    }
  }
  return m.diagonal().allFinite();
}

SpdMatrix::SpdMatrix(const Matrix& m, double eps_pd) {
  require_square(m, "SpdMatrix");
  if (!is_symmetric(m)) throw InvalidInput("SpdMatrix: input is not symmetric");
  m_ = symmetrized(m);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m_, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("SpdMatrix: eigenvalue computation did not converge");
  }
  const double smallest = solver.eigenvalues()(0);
  if (!(smallest > eps_pd)) {
    std::ostringstream os;
    os << "SpdMatrix: smallest eigenvalue " << smallest << " is not above " << eps_pd;
    throw NotPositiveDefinite(os.str());
  }
}

SpdMatrix SpdMatrix::identity(int dim) {
  return SpdMatrix(Matrix::Identity(dim, dim));
}

SpdMatrix SpdMatrix::diagonal(const Vector& diag) {
  return SpdMatrix(Matrix(diag.asDiagonal()));
}

SpdMatrix SpdMatrix::inverse() const {
  const SymEig eig = sym_eig(m_);
  return SpdMatrix(assemble(eig, eig.values.cwiseInverse()));
}

TangentVector::TangentVector(const Matrix& m, std::optional<SpdMatrix> base_point)
    : base_(std::move(base_point)) {
  require_square(m, "TangentVector");
  if (!is_symmetric(m)) throw InvalidInput("TangentVector: input is not symmetric");
  if (base_ && base_->dim() != m.rows()) {
    throw InvalidInput("TangentVector: base point dimension mismatch");
  }
  m_ = symmetrized(m);
}

TangentVector TangentVector::zero(int dim) {
  return TangentVector(Matrix::Zero(dim, dim));
}

SymEig sym_eig(const Matrix& m) {
  require_square(m, "sym_eig");
  if (!is_symmetric(m)) throw InvalidInput("sym_eig: input is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(m));
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("sym_eig: eigensolver did not converge");
  }
  // Eigen returns ascending order.
  SymEig out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

Matrix matrix_function(const Matrix& m, ScalarMap f, double eps_pd) {
  return apply_to_eig(sym_eig(m), f, eps_pd);
}

Matrix matrix_function(const SpdMatrix& p, ScalarMap f) {
  return matrix_function(p.matrix(), f, kDefaultEpsPd);
}

Matrix spd_log(const SpdMatrix& p) { return matrix_function(p, ScalarMap::log()); }

SpdMatrix sym_exp(const Matrix& a) {
  return SpdMatrix(matrix_function(a, ScalarMap::exp()));
}

double squared_riemannian_distance(const SpdMatrix& p, const SpdMatrix& q) {
  require_same_dim(p, q, "riemannian_distance");
  if (p.matrix() == q.matrix()) return 0.0;
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(
      p.matrix(), q.matrix(), Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("riemannian_distance: generalized eigensolver failed");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double lambda = solver.eigenvalues()(i);
    if (!(lambda > 0.0)) {
      throw NumericalFailure("riemannian_distance: nonpositive generalized eigenvalue");
    }
    const double l = std::log(lambda);
    sum += l * l;
  }
  return sum;
}

double riemannian_distance(const SpdMatrix& p, const SpdMatrix& q) {
  return std::sqrt(squared_riemannian_distance(p, q));
}

double riemannian_distance_logm(const SpdMatrix& p, const SpdMatrix& q) {
  require_same_dim(p, q, "riemannian_distance_logm");
  const Matrix p_inv_sqrt = matrix_function(p, ScalarMap::inv_sqrt());
  const Matrix w = symmetrized(p_inv_sqrt * q.matrix() * p_inv_sqrt);
  return matrix_function(w, ScalarMap::log(), 0.0).norm();
}

SpdMatrix geodesic(const SpdMatrix& p, const SpdMatrix& q, double t) {
  require_same_dim(p, q, "geodesic");
  if (!(t >= 0.0 && t <= 1.0)) {
    std::ostringstream os;
    os << "geodesic: t = " << t << " is outside [0, 1]";
    throw InvalidInput(os.str());
  }
  if (t == 0.0) return p;
  if (t == 1.0) return q;
  const SqrtPair s = sqrt_pair(p);
  const Matrix w = symmetrized(s.inv_sqrt * q.matrix() * s.inv_sqrt);
  const Matrix wt = matrix_function(w, ScalarMap::power(t), 0.0);
  return SpdMatrix(symmetrized(s.sqrt * wt * s.sqrt));
}

SpdMatrix exp_map(const SpdMatrix& p, const TangentVector& a) {
  if (p.dim() != a.dim()) throw InvalidInput("exp_map: dimension mismatch");
  const SqrtPair s = sqrt_pair(p);
  const Matrix inner = symmetrized(s.inv_sqrt * a.matrix() * s.inv_sqrt);
  const Matrix e = matrix_function(inner, ScalarMap::exp());
  return SpdMatrix(symmetrized(s.sqrt * e * s.sqrt));
}

TangentVector log_map(const SpdMatrix& p, const SpdMatrix& q) {
  require_same_dim(p, q, "log_map");
  const SqrtPair s = sqrt_pair(p);
  const Matrix w = symmetrized(s.inv_sqrt * q.matrix() * s.inv_sqrt);
  const Matrix l = matrix_function(w, ScalarMap::log(), 0.0);
  return TangentVector(symmetrized(s.sqrt * l * s.sqrt), p);
}

double tangent_norm(const SpdMatrix& p, const TangentVector& a) {
  if (p.dim() != a.dim()) throw InvalidInput("tangent_norm: dimension mismatch");
  const Matrix p_inv_sqrt = matrix_function(p, ScalarMap::inv_sqrt());
  return (p_inv_sqrt * a.matrix() * p_inv_sqrt).norm();
}

FrechetMean frechet_mean(std::span<const SpdMatrix> points,
                         std::span<const double> weights,
                         const MeanOptions& options) {
  if (points.empty()) throw InvalidInput("frechet_mean: empty point set");
  if (points.size() != weights.size()) {
    throw InvalidInput("frechet_mean: weights and points differ in length");
  }
  const int dim = points.front().dim();
  double total = 0.0;
  std::size_t positive = 0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].dim() != dim) throw InvalidInput("frechet_mean: mixed dimensions");
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
      throw InvalidInput("frechet_mean: weights must be finite and nonnegative");
    }
    total += weights[i];
    if (weights[i] > 0.0) {
      ++positive;
      last_positive = i;
    }
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "frechet_mean: weights sum to " << total << ", expected 1";
    throw InvalidInput(os.str());
  }
  if (positive == 1) return {points[last_positive], 0, 0.0};

  // Start from the weighted arithmetic mean.
  Matrix current = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < points.size(); ++i) {
    current += weights[i] * points[i].matrix();
  }
  SpdMatrix mean(symmetrized(current));

  double residual = 0.0;
  for (int iter = 0;; ++iter) {
    const SqrtPair s = sqrt_pair(mean);
    // Whitened tangent average; S = mean^{1/2} * inner * mean^{1/2}.
    Matrix inner = Matrix::Zero(dim, dim);
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (weights[i] == 0.0) continue;
      const Matrix w = symmetrized(s.inv_sqrt * points[i].matrix() * s.inv_sqrt);
      inner += weights[i] * matrix_function(w, ScalarMap::log(), 0.0);
    }
    inner = symmetrized(inner);
    residual = (s.sqrt * inner * s.sqrt).norm();
    if (residual <= options.tol) return {mean, iter, residual};
    if (iter >= options.max_iter) {
      std::ostringstream os;
      os << "frechet_mean: no convergence after " << options.max_iter
         << " iterations (residual " << residual << ", tol " << options.tol << ")";
      throw ConvergenceFailure(os.str(), mean.matrix(), residual, iter);
    }
    const Matrix e = matrix_function(inner, ScalarMap::exp());
    mean = SpdMatrix(symmetrized(s.sqrt * e * s.sqrt));
  }
}

FrechetMean frechet_mean(std::span<const SpdMatrix> points, const MeanOptions& options) {
  const std::vector<double> weights(points.size(),
                                    points.empty() ? 0.0 : 1.0 / points.size());
  return frechet_mean(points, weights, options);
}

std::vector<TangentVector> tangent_coordinates(std::span<const SpdMatrix> points,
                                               const SpdMatrix& base) {
  const Matrix base_inv_sqrt = matrix_function(base, ScalarMap::inv_sqrt());
  std::vector<TangentVector> out;
  out.reserve(points.size());
  for (const SpdMatrix& p : points) {
    require_same_dim(base, p, "tangent_coordinates");
    const Matrix w = symmetrized(base_inv_sqrt * p.matrix() * base_inv_sqrt);
    out.emplace_back(matrix_function(w, ScalarMap::log()), base);
  }
  return out;
}

}  // namespace spdot
