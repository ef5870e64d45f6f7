// include/spdot/adapt.hpp

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

// Domain adaptation of SPD samples by optimal transport followed by a
// barycentric (weighted Frechet mean) map, and the minimum-distance-to-mean
// classifier used to evaluate it.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spdot/manifold.hpp"
#include "spdot/transport.hpp"

namespace spdot {

enum class Solver { kExact, kSinkhorn, kSinkhornLabels };
enum class MassPolicy { kUniform, kKde };

struct AdaptationConfig {
  Metric metric = Metric::kRiemannian;
  Solver solver = Solver::kSinkhorn;
  /// nullopt: adaptive_lambda on the cost matrix.
  std::optional<double> lambda;
  /// nullopt: 2 * median(C0).
  std::optional<double> eta;
  MassPolicy mass_policy = MassPolicy::kUniform;
  /// nullopt: median of the pairwise squared distances within each set.
  std::optional<double> kde_sigma2;
  /// Keep only the k largest entries of each plan row before the mean.
  std::optional<int> top_k;
  MeanOptions mean;
  SinkhornOptions sinkhorn;
  LabelSinkhornOptions label_sinkhorn;
  /// Recorded for reproducibility; the pipeline itself draws no random numbers.
  std::optional<long long> seed;
};

struct RowDiagnostics {
  int iterations = 0;
  double residual = 0.0;
};

struct AdaptationResult {
  std::vector<SpdMatrix> adapted_source;
  TransportPlan plan;
  CostMatrix cost;
  double lambda_used = 0.0;  // 0 for the exact solver
  double eta_used = 0.0;     // 0 unless the label solver ran
  MassVector source_mass;
  MassVector target_mass;
  std::vector<RowDiagnostics> diagnostics;
};

std::string to_string(Metric metric);
std::string to_string(Solver solver);
std::string to_string(MassPolicy policy);

/// p[i] proportional to sum_j exp(-d_R^2(P_i, P_j) / (2 sigma^2)), self-term
/// included.
MassVector kde_weights(std::span<const SpdMatrix> points, double sigma2);

/// median{d_R^2(P_i, P_j) : i < j}, or 1 when that median is zero or the set
/// has fewer than two points.
double median_kde_sigma2(std::span<const SpdMatrix> points);

CostMatrix build_cost(std::span<const SpdMatrix> source, std::span<const SpdMatrix> target,
                      Metric metric);

struct BarycentricResult {
  std::vector<SpdMatrix> points;
  std::vector<RowDiagnostics> diagnostics;
};

/// Maps row i of the plan to the Frechet mean of the target set weighted by
/// that row (normalized, optionally truncated to its top_k entries).
BarycentricResult barycentric_map(std::span<const SpdMatrix> source,
                                  std::span<const SpdMatrix> target,
                                  const TransportPlan& plan,
                                  std::optional<int> top_k = std::nullopt,
                                  const MeanOptions& mean = {});

AdaptationResult adapt(std::span<const SpdMatrix> source, std::span<const SpdMatrix> target,
                       const std::optional<LabelSet>& source_labels,
                       const AdaptationConfig& config);

/// Per-class Riemannian means, keyed by label.
using MdmModel = std::map<int, SpdMatrix>;

MdmModel mdm_fit(std::span<const SpdMatrix> train, const LabelSet& labels,
                 const MeanOptions& mean = {});

/// argmin_y d_R(query, mean_y); ties go to the smallest label.
int mdm_classify(const SpdMatrix& query, const MdmModel& model);

}  // namespace spdot
