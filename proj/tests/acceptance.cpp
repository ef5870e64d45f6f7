// tests/acceptance.cpp

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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "commands.hpp"
#include "json.hpp"
#include "spdot/adapt.hpp"
#include "spdot/errors.hpp"
#include "spdot/experiments.hpp"
#include "spdot/io.hpp"
#include "spdot/manifold.hpp"
#include "spdot/transport.hpp"
#include "test_util.hpp"

namespace {

using namespace spdot;
namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit;
  std::function<Outcome()> body;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome toy_a_endpoint() {
  const std::vector<double> grid{0.0};
  const MatchReport r = toy_a_sweep(50, grid, 7)[0].report;
  return {r.recovery_error <= 1e-6 && r.diagonal_mass == 1.0,
          "recovery_error " + fmt("%.3g", r.recovery_error) + ", diagonal_mass " +
              fmt("%.6g", r.diagonal_mass)};
}

Outcome toy_a_rotation() {
  std::vector<double> grid = uniform_grid(64, 0.0, kPi, true);
  grid.push_back(kPi / 2);
  int good = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto sweep = toy_a_sweep(50, grid, seed);
    const MatchReport& r0 = sweep.front().report;
    const MatchReport& r90 = sweep.back().report;
    if (r90.diagonal_mass < 1.0 && r90.recovery_error > 10 * r0.recovery_error + 1e-6) ++good;
  }
  return {good >= 9, std::to_string(good) + "/10 seeds"};
}

Outcome toy_b_argmin() {
  const auto grid = uniform_grid(256, 0.0, 2 * kPi, false);
  int good = 0;
  std::string thetas;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto src = random_spd(2, 20, kToySourceScale, seed);
    const auto tgt = apply_congruence(CongruenceMap{toy_positive_part(), 1.0}, src);
    const ToyBResult r = toy_b_search(src, tgt, grid);
    const bool ok = r.curve[r.best_index].report.objective <= r.curve[0].report.objective &&
                    diagonal_mass(r.best_plan) == 1.0;
    good += ok;
    thetas += (thetas.empty() ? "" : " ") + fmt("%.3f", r.best_theta) + (ok ? "" : "*");
  }
  return {good >= 9, std::to_string(good) + "/10 seeds; argmin theta " + thetas +
                         " (* = plan off the diagonal)"};
}

Outcome cosine_ordering() {
  int good = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto r = three_config_comparison(seed);
    const double a = r[0].report.diagonal_mass;
    const double b = r[1].report.diagonal_mass;
    const double c = r[2].report.diagonal_mass;
    if (c >= 0.9 && c >= b && b >= a) ++good;
  }
  return {good >= 8, std::to_string(good) + "/10 seeds"};
}

Outcome sinkhorn_vs_exact() {
  std::mt19937_64 rng(505);
  const MassVector u = MassVector::uniform(8);
  double worst_ratio = 0.0, worst_residual = 0.0;
  int converged = 0, numerical = 0;
  for (int k = 0; k < 20; ++k) {
    const CostMatrix c(testing::cost_matrix(rng, 8, 8), Metric::kEuclidean);
    const double lambda = 200.0 / median_entry(c.entries());
    Matrix g;
    try {
      g = sinkhorn(c, u, u, lambda).gamma();
      ++converged;
    } catch (const ConvergenceFailure& e) {
      g = e.last_iterate();
    } catch (const NumericalFailure&) {
      ++numerical;
      continue;
    }
    const double obj = (g.array() * c.entries().array()).sum();
    worst_ratio = std::max(worst_ratio, obj / exact_ot(c, u, u).objective(c));
    worst_residual = std::max({worst_residual,
                               (g.rowwise().sum() - u.as_vector()).cwiseAbs().maxCoeff(),
                               (g.colwise().sum().transpose() - u.as_vector()).cwiseAbs().maxCoeff()});
  }
  return {converged == 20 && worst_ratio <= 1.01 && worst_residual <= 1e-6,
          std::to_string(converged) + "/20 converged, " + std::to_string(numerical) +
              " numerical failures; worst ratio among the rest " + fmt("%.5f", worst_ratio) +
              ", worst residual " + fmt("%.2g", worst_residual)};
}

Outcome geometry_suite() {
  std::mt19937_64 rng(606);
  double round_trip = 0.0, congruence = 0.0, inversion = 0.0, gen_vs_log = 0.0;
  double first_order = 0.0, on_geodesic = 0.0, norm_identity = 0.0;
  for (int k = 0; k < 200; ++k) {
    const int dim = 2 + k % 5;
    const SpdMatrix p = testing::random_point(rng, dim);
    const SpdMatrix q = testing::random_point(rng, dim);
    // Tangent vector at p with Riemannian norm at most 4.9.
    Matrix s0 = testing::random_symmetric(rng, dim);
    s0 *= 4.9 / std::max(1.0, s0.norm());
    const Matrix root = Eigen::SelfAdjointEigenSolver<Matrix>(p.matrix()).operatorSqrt();
    const Matrix a = root * s0 * root;
    const TangentVector v(a);
    round_trip = std::max(round_trip, (log_map(p, exp_map(p, v)).matrix() - a).norm() /
                                          std::max(1.0, a.norm()));
    round_trip = std::max(round_trip, (exp_map(p, log_map(p, q)).matrix() - q.matrix()).norm() /
                                          q.matrix().norm());

    const double d = riemannian_distance(p, q);
    const Matrix g = testing::random_invertible(rng, dim);
    const double dc = riemannian_distance(SpdMatrix(Matrix(g * p.matrix() * g.transpose())),
                                          SpdMatrix(Matrix(g * q.matrix() * g.transpose())));
    congruence = std::max(congruence, std::abs(dc - d) / d);
    inversion = std::max(inversion, std::abs(riemannian_distance(p.inverse(), q.inverse()) - d) / d);
    gen_vs_log = std::max(gen_vs_log, std::abs(riemannian_distance_logm(p, q) - d) / d);

    const int n = 2 + k % 6;
    std::vector<SpdMatrix> pts;
    for (int i = 0; i < n; ++i) pts.push_back(testing::random_point(rng, dim));
    const std::vector<double> w = testing::random_weights(rng, n);
    const FrechetMean m = frechet_mean(pts, w);
    Matrix s = Matrix::Zero(dim, dim);
    for (int i = 0; i < n; ++i) s += w[static_cast<std::size_t>(i)] * log_map(m.mean, pts[static_cast<std::size_t>(i)]).matrix();
    first_order = std::max(first_order, s.norm());

    const double w2 = 0.05 + 0.9 * (k % 17) / 16.0;
    const std::vector<SpdMatrix> two{p, q};
    const std::vector<double> tw{1.0 - w2, w2};
    on_geodesic = std::max(on_geodesic, riemannian_distance(frechet_mean(two, tw).mean,
                                                            geodesic(p, q, w2)));

    const auto coords = tangent_coordinates(pts, m.mean);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double di = riemannian_distance(m.mean, pts[i]);
      norm_identity =
          std::max(norm_identity, std::abs(coords[i].matrix().norm() - di) / std::max(1.0, di));
    }
  }
  const bool ok = round_trip <= 1e-8 && congruence <= 1e-8 && inversion <= 1e-8 &&
                  gen_vs_log <= 1e-9 && first_order <= 1e-10 && on_geodesic <= 1e-7 &&
                  norm_identity <= 1e-9;
  std::ostringstream os;
  os << "round trip " << round_trip << ", congruence " << congruence << ", inversion "
     << inversion << ", gen-eig vs logm " << gen_vs_log << ", first order " << first_order
     << ", on geodesic " << on_geodesic << ", tangent norm " << norm_identity;
  return {ok, os.str()};
}

Outcome label_reduction() {
  std::mt19937_64 rng(707);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const int n1 = 4 + k % 5;
    const int n2 = 3 + k % 4;
    const CostMatrix c(testing::cost_matrix(rng, n1, n2), Metric::kEuclidean);
    const MassVector p(testing::random_weights(rng, n1));
    const MassVector q(testing::random_weights(rng, n2));
    std::vector<int> labels;
    for (int i = 0; i < n1; ++i) labels.push_back(i % 3);
    const double lambda = 20.0;
    const Matrix a = sinkhorn_with_labels(c, p, q, LabelSet(labels), lambda, 0.0).gamma();
    const Matrix b = sinkhorn(c, p, q, lambda).gamma();
    worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
  }
  Matrix c0(4, 2);
  c0 << 0, 1, 0, 1, 1, 0, 1, 0;
  const CostMatrix c(c0, Metric::kEuclidean);
  const LabelSet labels({0, 0, 1, 1});
  const MassVector p = MassVector::uniform(4);
  const MassVector q = MassVector::uniform(2);
  const double eta = 2.0 * median_entry(c0);
  const double pen0 = group_lasso_penalty(sinkhorn_with_labels(c, p, q, labels, 1.0, 0.0).gamma(), labels);
  const double pen1 = group_lasso_penalty(sinkhorn_with_labels(c, p, q, labels, 1.0, eta).gamma(), labels);
  return {worst <= 1e-10 && pen1 <= pen0,
          "eta=0 gap " + fmt("%.2g", worst) + "; penalty " + fmt("%.6f", pen0) + " -> " +
              fmt("%.6f", pen1)};
}

Outcome pipeline_identity() {
  std::mt19937_64 rng(808);
  double worst = 0.0;
  AdaptationConfig cfg;
  cfg.solver = Solver::kExact;
  for (int n : {1, 2, 5, 10, 20, 30}) {
    for (int dim = 2; dim <= 5; ++dim) {
      std::vector<SpdMatrix> pts;
      for (int i = 0; i < n; ++i) pts.push_back(testing::random_point(rng, dim, 1.0));
      const AdaptationResult r = adapt(pts, pts, std::nullopt, cfg);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        worst = std::max(worst, riemannian_distance(r.adapted_source[i], pts[i]));
      }
    }
  }
  return {worst <= 1e-8, "worst d_R " + fmt("%.2g", worst)};
}

int run_cli(std::vector<std::string> args, std::string* err_text = nullptr) {
  args.insert(args.begin(), "spdot");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files[e.path().string()] = io::read_file(e.path());
  }
  return files;
}

Outcome cli_round_trip() {
  std::random_device rd;
  const fs::path dir = fs::temp_directory_path() / ("spdot_acceptance_" + std::to_string(rd()));
  fs::create_directories(dir);
  const auto p = [&](const char* name) { return (dir / name).string(); };
  Outcome result;
  std::map<std::string, std::string> first;
  for (int pass = 0; pass < 2 && result.ok; ++pass) {
    std::string err;
    const std::vector<std::vector<std::string>> steps{
        {"cosine", "--seed", "5", "--out", p("cos")},
        {"covariance", p("cos/source.json"), "--out", p("source_cov.json")},
        {"covariance", p("cos/target.json"), "--out", p("target_cov.json")},
        {"adapt", p("source_cov.json"), p("target_cov.json"), "--out", p("adapt")},
    };
    for (const auto& s : steps) {
      const int code = run_cli(s, &err);
      if (code != 0) {
        result = {false, s[0] + " exited " + std::to_string(code) + ": " + err};
        break;
      }
    }
    if (!result.ok) break;
    try {
      for (const char* f : {"cos/source.json", "cos/target.json", "source_cov.json",
                            "target_cov.json", "adapt/adapted.json"}) {
        io::load_dataset(p(f));
      }
      io::parse_csv(io::read_file(p("cos/cosine.csv")), "cosine.csv", true);
      io::parse_csv_matrix(io::read_file(p("adapt/plan.csv")), "plan.csv");
      for (const char* f : {"cos/report.json", "adapt/report.json"}) {
        if (!nlohmann::json::accept(io::read_file(p(f)))) throw std::runtime_error(f);
      }
    } catch (const std::exception& e) {
      result = {false, std::string("re-parse failed: ") + e.what()};
      break;
    }
    if (pass == 0) {
      first = snapshot(dir);
    } else if (snapshot(dir) != first) {
      result = {false, "second invocation differs"};
    }
  }
  if (result.ok) result.detail = std::to_string(first.size()) + " files re-parse, byte-identical";
  std::error_code ec;
  fs::remove_all(dir, ec);
  return result;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "toy A exact recovery at theta=0", 5, toy_a_endpoint},
      {2, "toy A failure at theta=pi/2", 30, toy_a_rotation},
      {3, "toy B argmin plan is the true matching", 60, toy_b_argmin},
      {4, "cosine configuration ordering", 60, cosine_ordering},
      {5, "sinkhorn vs exact oracle", 5, sinkhorn_vs_exact},
      {6, "geometry property suite", 30, geometry_suite},
      {7, "label regularization reduction", 5, label_reduction},
      {8, "pipeline identity", 10, pipeline_identity},
      {9, "CLI round trip", 30, cli_round_trip},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = o.ok && secs < c.time_limit;
    failures += !ok;
    std::printf("%s %d %s: %s; %.2f s (limit %.0f s)\n", ok ? "PASS" : "FAIL", c.id,
                c.name.c_str(), o.detail.c_str(), secs, c.time_limit);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
