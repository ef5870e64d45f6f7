// include/spdot/experiments.hpp

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

// Small reproducible experiments on synthetic data: recovery of congruence
// maps by exact OT, a rotation grid search, and a comparison of OT on raw
// signals versus on their covariances.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spdot/adapt.hpp"
#include "spdot/manifold.hpp"
#include "spdot/transport.hpp"

namespace spdot {

/// Planar rotation [[cos t, sin t], [-sin t, cos t]].
Matrix rotation(double theta);

/// The positive part [[0.5, -0.25], [-0.25, 1]] used by the toy maps.
SpdMatrix toy_positive_part();

/// s(P) = S P S^T with S = T U_theta.
struct CongruenceMap {
  SpdMatrix positive_part;
  double theta = 0.0;

  Matrix matrix() const;
};

/// Each draw is G G^T / dim + 0.1 I with G = scale * standard normal.
std::vector<SpdMatrix> random_spd(int dim, int count, double scale, std::uint64_t seed);

/// Draw scale used for the toy sources.
inline constexpr double kToySourceScale = 0.3;

std::vector<SpdMatrix> apply_congruence(const CongruenceMap& map,
                                        std::span<const SpdMatrix> points);
std::vector<SpdMatrix> apply_congruence(const Matrix& s, std::span<const SpdMatrix> points);

/// `count` points evenly spaced over [lo, hi] (inclusive) or [lo, hi).
std::vector<double> uniform_grid(int count, double lo, double hi, bool include_end);

struct MatchReport {
  double diagonal_mass = 0.0;   // plan mass on the true correspondence i -> i
  double recovery_error = 0.0;  // sqrt(mean_i d_R^2(mapped_i, truth_i))
  double objective = 0.0;       // <Gamma, C>
};

double diagonal_mass(const TransportPlan& plan);

/// sqrt((1/N) sum_i d_R^2(a_i, b_i))
double recovery_error(std::span<const SpdMatrix> a, std::span<const SpdMatrix> b);

struct SweepPoint {
  double theta = 0.0;
  MatchReport report;
};

/// Adapts `source` onto s_theta(source) with exact OT and reports how well
/// the known correspondence is recovered.
MatchReport toy_a_point(std::span<const SpdMatrix> source, double theta);

std::vector<SweepPoint> toy_a_sweep(int n, std::span<const double> theta_grid,
                                    std::uint64_t seed);

struct ToyBResult {
  double best_theta = 0.0;
  std::size_t best_index = 0;
  std::vector<SweepPoint> curve;
  TransportPlan best_plan;
};

/// Grid search over rotations U_theta of the source before solving the inner
/// exact OT problem against the target. Target i is the true image of
/// source i, which the per-theta reports use.
ToyBResult toy_b_search(std::span<const SpdMatrix> source, std::span<const SpdMatrix> target,
                        std::span<const double> theta_grid);

struct TimeSeriesTrial {
  Matrix data;  // channels x samples
  std::vector<double> amplitudes;
  std::vector<double> frequencies;  // Hz
  std::vector<double> phases;

  int channels() const { return static_cast<int>(data.rows()); }
  int samples() const { return static_cast<int>(data.cols()); }
};

struct CosineOptions {
  int n = 40;
  int channels = 5;
  int samples = 101;
  double sample_period = 0.01;
  bool noise = true;
};

struct CosineTrials {
  std::vector<TimeSeriesTrial> source;
  std::vector<TimeSeriesTrial> target;
};

/// Channel j of a trial is a_j cos(2 pi f_j t + phase_j) plus noise. Pair i
/// shares amplitude and frequency per channel; phases and unit-variance noise
/// are drawn independently for the two sides.
CosineTrials cosine_trials(const CosineOptions& options, std::uint64_t seed);

struct CovarianceResult {
  SpdMatrix covariance;
  double ridge = 0.0;  // added to the diagonal, 0 when none was needed
};

/// Row-centered sample covariance X X^T / (M - 1). Near-singular results get
/// a ridge of 1e-8 * trace / d, reported in the result.
CovarianceResult covariance(const Matrix& data);

struct ConfigReport {
  std::string name;
  MatchReport report;
};

/// Exact OT under three setups: raw signals with Euclidean cost, covariances
/// with Euclidean cost, covariances with Riemannian cost.
std::array<ConfigReport, 3> three_config_comparison(const CosineTrials& trials);
std::array<ConfigReport, 3> three_config_comparison(std::uint64_t seed,
                                                    const CosineOptions& options = {});

}  // namespace spdot
