// include/spdot/manifold.hpp

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

// Affine-invariant geometry of the cone of symmetric positive-definite
// matrices. Every matrix function is computed from one symmetric
// eigendecomposition.

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace spdot {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kDefaultEpsPd = 1e-10;

/// True when |m(i,j) - m(j,i)| <= 1e-12 * max(1, |m(i,j)|) for all entries.
bool is_symmetric(const Matrix& m);

/// A point of the SPD cone. Construction validates symmetry and the
/// eigenvalue floor and stores the exactly symmetrized matrix.
class SpdMatrix {
 public:
  explicit SpdMatrix(const Matrix& m, double eps_pd = kDefaultEpsPd);

  static SpdMatrix identity(int dim);
  static SpdMatrix diagonal(const Vector& diag);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  SpdMatrix inverse() const;

 private:
  Matrix m_;
};

/// A symmetric matrix living in the tangent space at `base_point` (when one
/// is recorded).
class TangentVector {
 public:
  explicit TangentVector(const Matrix& m,
                         std::optional<SpdMatrix> base_point = std::nullopt);

  static TangentVector zero(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  const std::optional<SpdMatrix>& base_point() const { return base_; }

 private:
  Matrix m_;
  std::optional<SpdMatrix> base_;
};

struct SymEig {
  Vector values;   // descending
  Matrix vectors;  // columns are orthonormal eigenvectors
};

SymEig sym_eig(const Matrix& m);

/// Scalar map applied to the spectrum by matrix_function.
struct ScalarMap {
  enum class Kind { kLog, kExp, kSqrt, kInvSqrt, kPower };
  Kind kind;
  double exponent = 1.0;

  static ScalarMap log() { return {Kind::kLog}; }
  static ScalarMap exp() { return {Kind::kExp}; }
  static ScalarMap sqrt() { return {Kind::kSqrt}; }
  static ScalarMap inv_sqrt() { return {Kind::kInvSqrt}; }
  static ScalarMap power(double t) { return {Kind::kPower, t}; }
};

/// V f(L) V^T, symmetrized. exp accepts any symmetric matrix; the other maps
/// require eigenvalues above eps_pd.
Matrix matrix_function(const Matrix& m, ScalarMap f,
                       double eps_pd = kDefaultEpsPd);
Matrix matrix_function(const SpdMatrix& p, ScalarMap f);

Matrix spd_log(const SpdMatrix& p);
SpdMatrix sym_exp(const Matrix& a);

/// Riemannian distance from the generalized eigenvalues of the pair (P, Q):
/// d^2 = sum_i log^2 lambda_i(Q^{-1} P).
double riemannian_distance(const SpdMatrix& p, const SpdMatrix& q);
double squared_riemannian_distance(const SpdMatrix& p, const SpdMatrix& q);

/// The same distance evaluated as ||log(P^{-1/2} Q P^{-1/2})||_F. Slower;
/// kept as an independent cross-check.
double riemannian_distance_logm(const SpdMatrix& p, const SpdMatrix& q);

/// Point at parameter t in [0, 1] on the geodesic from P to Q.
SpdMatrix geodesic(const SpdMatrix& p, const SpdMatrix& q, double t);

SpdMatrix exp_map(const SpdMatrix& p, const TangentVector& a);
TangentVector log_map(const SpdMatrix& p, const SpdMatrix& q);

/// Norm of a tangent vector at P in the affine-invariant metric,
/// sqrt(tr(P^{-1} A P^{-1} A)).
double tangent_norm(const SpdMatrix& p, const TangentVector& a);

struct MeanOptions {
  double tol = 1e-10;
  int max_iter = 200;
};

struct FrechetMean {
  SpdMatrix mean;
  int iterations = 0;
  double residual = 0.0;  // ||sum_i w_i Log_mean(P_i)||_F
};

/// Weighted Riemannian mean by the tangent-average fixed point. Weights must
/// be nonnegative and sum to one. Throws ConvergenceFailure (carrying the
/// last iterate) when max_iter runs out.
FrechetMean frechet_mean(std::span<const SpdMatrix> points,
                         std::span<const double> weights,
                         const MeanOptions& options = {});

/// Unweighted overload.
FrechetMean frechet_mean(std::span<const SpdMatrix> points,
                         const MeanOptions& options = {});

/// Whitened log coordinates log(B^{-1/2} P_i B^{-1/2}) at base B. Their
/// Frobenius norms equal d_R(B, P_i).
std::vector<TangentVector> tangent_coordinates(std::span<const SpdMatrix> points,
                                               const SpdMatrix& base);

}  // namespace spdot
