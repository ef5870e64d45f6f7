// src/experiments.cpp

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

#include "spdot/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "spdot/errors.hpp"

namespace spdot {
namespace {

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

MatchReport report_for(const TransportPlan& plan, const CostMatrix& cost,
                       std::span<const SpdMatrix> mapped_from,
                       std::span<const SpdMatrix> target) {
  const BarycentricResult mapped = barycentric_map(mapped_from, target, plan);
  return {diagonal_mass(plan), recovery_error(mapped.points, target), plan.objective(cost)};
}

}  // namespace

Matrix rotation(double theta) {
  Matrix u(2, 2);
  u << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  return u;
}

SpdMatrix toy_positive_part() {
  Matrix t(2, 2);
  t << 0.5, -0.25, -0.25, 1.0;
  return SpdMatrix(t);
}

Matrix CongruenceMap::matrix() const {
  if (positive_part.dim() != 2) {
    throw InvalidInput("CongruenceMap: the rotation parameterization is 2x2 only");
  }
  return positive_part.matrix() * rotation(theta);
}

std::vector<SpdMatrix> random_spd(int dim, int count, double scale, std::uint64_t seed) {
  if (dim < 1 || count < 1) throw InvalidInput("random_spd: dim and count must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<SpdMatrix> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) g(i, j) = scale * normal(rng);
    }
    Matrix m = g * g.transpose() / static_cast<double>(dim);
    m.diagonal().array() += 0.1;
    out.emplace_back(symmetrized(m));
  }
  return out;
}

std::vector<SpdMatrix> apply_congruence(const Matrix& s, std::span<const SpdMatrix> points) {
  std::vector<SpdMatrix> out;
  out.reserve(points.size());
  for (const SpdMatrix& p : points) {
    if (p.dim() != s.rows() || s.rows() != s.cols()) {
      throw InvalidInput("apply_congruence: dimension mismatch");
    }
    out.emplace_back(symmetrized(s * p.matrix() * s.transpose()));
  }
  return out;
}

std::vector<SpdMatrix> apply_congruence(const CongruenceMap& map,
                                        std::span<const SpdMatrix> points) {
  return apply_congruence(map.matrix(), points);
}

std::vector<double> uniform_grid(int count, double lo, double hi, bool include_end) {
  if (count < 1) throw InvalidInput("uniform_grid: count must be positive");
  std::vector<double> grid(static_cast<std::size_t>(count));
  if (count == 1) {
    grid[0] = lo;
    return grid;
  }
  const double step = (hi - lo) / static_cast<double>(include_end ? count - 1 : count);
  for (int k = 0; k < count; ++k) grid[static_cast<std::size_t>(k)] = lo + step * k;
  if (include_end) grid.back() = hi;
  return grid;
}

double diagonal_mass(const TransportPlan& plan) {
  if (plan.rows() != plan.cols()) {
    throw InvalidInput("diagonal_mass: plan must be square");
  }
  // Both sums run in the same order, so a plan with no off-diagonal mass
  // gives exactly 1.
  const Matrix& g = plan.gamma();
  double diag = 0.0, total = 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    diag += g(i, i);
    for (Eigen::Index j = 0; j < g.cols(); ++j) total += g(i, j);
  }
  if (total <= 0.0) return 0.0;
  return std::clamp(diag / total, 0.0, 1.0);
}

double recovery_error(std::span<const SpdMatrix> a, std::span<const SpdMatrix> b) {
  if (a.size() != b.size() || a.empty()) {
    throw InvalidInput("recovery_error: sets must be nonempty and of equal size");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += squared_riemannian_distance(a[i], b[i]);
  return std::sqrt(sum / static_cast<double>(a.size()));
}

MatchReport toy_a_point(std::span<const SpdMatrix> source, double theta) {
  const std::vector<SpdMatrix> target =
      apply_congruence(CongruenceMap{toy_positive_part(), theta}, source);
  AdaptationConfig config;
  config.metric = Metric::kRiemannian;
  config.solver = Solver::kExact;
  config.mass_policy = MassPolicy::kUniform;
  const AdaptationResult result = adapt(source, target, std::nullopt, config);
  return {diagonal_mass(result.plan), recovery_error(result.adapted_source, target),
          result.plan.objective(result.cost)};
}

std::vector<SweepPoint> toy_a_sweep(int n, std::span<const double> theta_grid,
                                    std::uint64_t seed) {
  const std::vector<SpdMatrix> source = random_spd(2, n, kToySourceScale, seed);
  std::vector<SweepPoint> out;
  out.reserve(theta_grid.size());
  for (double theta : theta_grid) out.push_back({theta, toy_a_point(source, theta)});
  return out;
}

ToyBResult toy_b_search(std::span<const SpdMatrix> source, std::span<const SpdMatrix> target,
                        std::span<const double> theta_grid) {
  if (theta_grid.empty()) throw InvalidInput("toy_b_search: empty theta grid");
  if (source.size() != target.size()) {
    throw InvalidInput("toy_b_search: source and target must correspond one to one");
  }
  for (const SpdMatrix& p : source) {
    if (p.dim() != 2) throw InvalidInput("toy_b_search: only 2x2 matrices are supported");
  }
  const MassVector p = MassVector::uniform(source.size());
  const MassVector q = MassVector::uniform(target.size());

  std::vector<SweepPoint> curve;
  curve.reserve(theta_grid.size());
  std::optional<TransportPlan> best_plan;
  std::size_t best_index = 0;
  for (std::size_t k = 0; k < theta_grid.size(); ++k) {
    const std::vector<SpdMatrix> rotated = apply_congruence(rotation(theta_grid[k]), source);
    const CostMatrix cost = build_cost(rotated, target, Metric::kRiemannian);
    TransportPlan plan = exact_ot(cost, p, q);
    curve.push_back({theta_grid[k], report_for(plan, cost, rotated, target)});
    if (!best_plan || curve[k].report.objective < curve[best_index].report.objective) {
      best_index = k;
      best_plan = std::move(plan);
    }
  }
  return ToyBResult{theta_grid[best_index], best_index, std::move(curve),
                    std::move(*best_plan)};
}

CosineTrials cosine_trials(const CosineOptions& options, std::uint64_t seed) {
  if (options.n < 1 || options.channels < 1 || options.samples < 2 ||
      !(options.sample_period > 0.0)) {
    throw InvalidInput("cosine_trials: invalid shape or sample period");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp_freq(0.0, 20.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> noise(0.0, 1.0);

  const int d = options.channels;
  const int m = options.samples;
  auto make_trial = [&](const std::vector<double>& a, const std::vector<double>& f,
                        std::vector<double> phi) {
    TimeSeriesTrial trial{Matrix(d, m), a, f, std::move(phi)};
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < m; ++k) {
        const double t = k * options.sample_period;
        const double clean =
            a[j] * std::cos(2.0 * std::numbers::pi * f[j] * t + trial.phases[j]);
        trial.data(j, k) = options.noise ? clean + noise(rng) : clean;
      }
    }
    return trial;
  };

  CosineTrials out;
  out.source.reserve(static_cast<std::size_t>(options.n));
  out.target.reserve(static_cast<std::size_t>(options.n));
  for (int i = 0; i < options.n; ++i) {
    std::vector<double> a(d), f(d), theta(d), phi(d);
    for (int j = 0; j < d; ++j) {
      a[j] = amp_freq(rng);
      f[j] = amp_freq(rng);
      theta[j] = phase(rng);
      phi[j] = phase(rng);
    }
    out.source.push_back(make_trial(a, f, std::move(theta)));
    out.target.push_back(make_trial(a, f, std::move(phi)));
  }
  return out;
}

CovarianceResult covariance(const Matrix& data) {
  const Eigen::Index d = data.rows();
  const Eigen::Index m = data.cols();
  if (d < 1 || m < 2) throw InvalidInput("covariance: need at least one channel and two samples");
  if (!data.allFinite()) throw InvalidInput("covariance: non-finite samples");
  const Matrix centered = data.colwise() - data.rowwise().mean();
  Matrix cov = symmetrized(centered * centered.transpose() / static_cast<double>(m - 1));

  double ridge = 0.0;
  const double smallest = sym_eig(cov).values.minCoeff();
  if (!(smallest > kDefaultEpsPd)) {
    ridge = 1e-8 * cov.trace() / static_cast<double>(d);
    cov.diagonal().array() += ridge;
  }
  try {
    return {SpdMatrix(cov), ridge};
  } catch (const NotPositiveDefinite& e) {
    std::ostringstream os;
    os << "covariance: rank deficient even after a ridge of " << ridge << " (" << e.what()
       << ")";
    throw NotPositiveDefinite(os.str());
  }
}

std::array<ConfigReport, 3> three_config_comparison(const CosineTrials& trials) {
  const std::size_t n = trials.source.size();
  if (n == 0 || trials.target.size() != n) {
    throw InvalidInput("three_config_comparison: need equally many source and target trials");
  }
  std::vector<SpdMatrix> p_cov, q_cov;
  p_cov.reserve(n);
  q_cov.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    p_cov.push_back(covariance(trials.source[i].data).covariance);
    q_cov.push_back(covariance(trials.target[i].data).covariance);
  }
  const MassVector uniform = MassVector::uniform(n);

  Matrix raw(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      raw(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          (trials.source[i].data - trials.target[j].data).squaredNorm();
    }
  }
  const CostMatrix raw_cost(std::move(raw), Metric::kEuclidean);
  const CostMatrix cov_euclid = build_cost(p_cov, q_cov, Metric::kEuclidean);
  const CostMatrix cov_riemann = build_cost(p_cov, q_cov, Metric::kRiemannian);

  auto run = [&](const char* name, const CostMatrix& cost) {
    const TransportPlan plan = exact_ot(cost, uniform, uniform);
    return ConfigReport{name, report_for(plan, cost, p_cov, q_cov)};
  };
  return {run("raw-euclidean", raw_cost), run("cov-euclidean", cov_euclid),
          run("cov-riemannian", cov_riemann)};
}

std::array<ConfigReport, 3> three_config_comparison(std::uint64_t seed,
                                                    const CosineOptions& options) {
  return three_config_comparison(cosine_trials(options, seed));
}

}  // namespace spdot
