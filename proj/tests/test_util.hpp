// tests/test_util.hpp

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

// Helpers shared by the unit tests. The oracles here go straight to Eigen so
// that they do not share code paths with the library under test.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "spdot/manifold.hpp"

namespace spdot::testing {

inline Matrix random_symmetric(std::mt19937_64& rng, int dim, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = nd(rng);
  }
  return a;
}

/// exp of a random symmetric matrix, so log-eigenvalues are O(scale).
inline Matrix random_spd_matrix(std::mt19937_64& rng, int dim, double scale = 0.5) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(random_symmetric(rng, dim, scale));
  return es.eigenvectors() * es.eigenvalues().array().exp().matrix().asDiagonal() *
         es.eigenvectors().transpose();
}

inline SpdMatrix random_point(std::mt19937_64& rng, int dim, double scale = 0.5) {
  return SpdMatrix(random_spd_matrix(rng, dim, scale));
}

inline Matrix random_invertible(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> nd;
  Matrix a(dim, dim);
  do {
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) a(i, j) = nd(rng);
    }
  } while (std::abs(a.determinant()) < 0.1 ||
           Eigen::JacobiSVD<Matrix>(a).singularValues().array().maxCoeff() >
               100.0 * Eigen::JacobiSVD<Matrix>(a).singularValues().array().minCoeff());
  return a;
}

inline Matrix oracle_logm(const Matrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  return es.eigenvectors() * es.eigenvalues().array().log().matrix().asDiagonal() *
         es.eigenvectors().transpose();
}

/// ||log(P^{-1/2} Q P^{-1/2})||_F through Eigen's own inverse square root.
inline double oracle_distance(const Matrix& p, const Matrix& q) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(p);
  const Matrix w = es.operatorInverseSqrt();
  const Matrix m = w * q * w;
  return oracle_logm(0.5 * (m + m.transpose())).norm();
}

inline std::vector<double> random_weights(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<double> w(static_cast<std::size_t>(n));
  double s = 0.0;
  for (double& x : w) s += (x = u(rng));
  for (double& x : w) x /= s;
  // Push the rounding error into one entry so the sum is 1 to the last bit.
  double t = 0.0;
  for (std::size_t i = 1; i < w.size(); ++i) t += w[i];
  w[0] = 1.0 - t;
  return w;
}

inline Matrix cost_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix c(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) c(i, j) = u(rng);
  }
  return c;
}

// Minimises sum_i w_i d^2(exp(S), P_i) over symmetric S by gradient descent
// with central differences and a backtracking step.
inline Matrix descent_mean(const std::vector<SpdMatrix>& points, const std::vector<double>& w) {
  const int dim = points[0].dim();
  auto objective = [&](const Matrix& s) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    const Matrix x = es.eigenvectors() * es.eigenvalues().array().exp().matrix().asDiagonal() *
                     es.eigenvectors().transpose();
    double f = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double d = oracle_distance(x, points[i].matrix());
      f += w[i] * d * d;
    }
    return f;
  };
  Matrix s = Matrix::Zero(dim, dim);
  double step = 0.5;
  double f = objective(s);
  for (int iter = 0; iter < 5000; ++iter) {
    Matrix g = Matrix::Zero(dim, dim);
    const double h = 1e-6;
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j <= i; ++j) {
        Matrix e = Matrix::Zero(dim, dim);
        e(i, j) = e(j, i) = h;
        const double dd = (objective(s + e) - objective(s - e)) / (2 * h);
        g(i, j) = g(j, i) = (i == j) ? dd : dd / 2;
      }
    }
    if (g.norm() < 1e-10) break;
    while (step > 1e-12) {
      const Matrix trial = s - step * g;
      const double ft = objective(trial);
      if (ft < f) {
        s = trial;
        f = ft;
        step *= 1.5;
        break;
      }
      step *= 0.5;
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  return es.eigenvectors() * es.eigenvalues().array().exp().matrix().asDiagonal() *
         es.eigenvectors().transpose();
}

}  // namespace spdot::testing
