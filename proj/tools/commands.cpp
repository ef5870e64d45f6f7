// tools/commands.cpp

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

#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "spdot/adapt.hpp"
#include "spdot/errors.hpp"
#include "spdot/experiments.hpp"
#include "spdot/io.hpp"

namespace spdot::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kInvalidInput:
    case ErrorKind::kUnsupportedInstance:
      return kInputError;
    default:
      return kSolverError;
  }
}

// "auto" or a positive number.
std::optional<double> parse_auto_or_number(const std::string& text, const char* flag) {
  if (text == "auto") return std::nullopt;
  double v = 0.0;
  std::istringstream is(text);
  if (!(is >> v) || !is.eof() || !(v > 0.0) || !std::isfinite(v)) {
    throw InvalidInput(std::string(flag) + ": expected \"auto\" or a positive number, got \"" +
                       text + "\"");
  }
  return v;
}

Json file_entry(const std::string& path) {
  return Json{{"path", path}, {"sha256", io::sha256_hex(io::read_file(path))}};
}

Json base_report(const std::string& command) {
  return Json{{"tool", "spdot"}, {"version", SPDOT_VERSION}, {"command", command}};
}

void write_report(const fs::path& dir, const Json& report) {
  io::write_file(dir / "report.json", report.dump(2) + "\n");
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::string csv = "theta,recovery_error,diagonal_mass,objective\n";
  for (const SweepPoint& p : points) {
    csv += io::format_double(p.theta) + "," + io::format_double(p.report.recovery_error) +
           "," + io::format_double(p.report.diagonal_mass) + "," +
           io::format_double(p.report.objective) + "\n";
  }
  return csv;
}

Json match_json(const MatchReport& r) {
  return Json{{"diagonal_mass", r.diagonal_mass},
              {"recovery_error", r.recovery_error},
              {"objective", r.objective}};
}

struct AdaptArgs {
  std::string source;
  std::string target;
  std::string metric = "riemannian";
  std::string solver = "sinkhorn";
  std::string lambda = "auto";
  std::optional<double> eta;
  std::string mass = "uniform";
  std::string kde_sigma = "auto";
  std::optional<int> top_k;
  std::optional<long long> seed;
  std::string out;
  bool timings = false;
};

int cmd_adapt(const AdaptArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  AdaptationConfig config;
  config.metric = a.metric == "euclidean" ? Metric::kEuclidean : Metric::kRiemannian;
  config.solver = a.solver == "exact"      ? Solver::kExact
                  : a.solver == "sinkhorn" ? Solver::kSinkhorn
                                           : Solver::kSinkhornLabels;
  config.lambda = parse_auto_or_number(a.lambda, "--lambda");
  config.eta = a.eta;
  config.mass_policy = a.mass == "kde" ? MassPolicy::kKde : MassPolicy::kUniform;
  if (const auto sigma = parse_auto_or_number(a.kde_sigma, "--kde-sigma")) {
    config.kde_sigma2 = *sigma * *sigma;
  }
  config.top_k = a.top_k;
  config.seed = a.seed;

  const io::DatasetFile source = io::load_dataset(a.source);
  const io::DatasetFile target = io::load_dataset(a.target);
  if (source.kind != io::DatasetKind::kSpd) throw io::InputError(a.source + ": kind must be \"spd\"");
  if (target.kind != io::DatasetKind::kSpd) throw io::InputError(a.target + ": kind must be \"spd\"");
  if (source.dim != target.dim) {
    throw io::InputError(a.target + ": dim " + std::to_string(target.dim) +
                         " differs from source dim " + std::to_string(source.dim));
  }
  std::optional<LabelSet> labels;
  if (source.labels) labels.emplace(*source.labels);

  const auto solve_start = Clock::now();
  const AdaptationResult result = adapt(source.matrices, target.matrices, labels, config);
  const double solve_seconds = seconds_since(solve_start);

  fs::create_directories(a.out);
  const fs::path dir(a.out);
  io::DatasetFile adapted;
  adapted.kind = io::DatasetKind::kSpd;
  adapted.dim = source.dim;
  adapted.matrices = result.adapted_source;
  adapted.labels = source.labels;
  io::save_dataset(dir / "adapted.json", adapted);
  io::write_file(dir / "plan.csv", io::plan_to_csv(result.plan.gamma()));

  Json report = base_report("adapt");
  report["inputs"] = Json{{"source", file_entry(a.source)}, {"target", file_entry(a.target)}};
  Json cfg{{"metric", to_string(config.metric)},
           {"solver", to_string(config.solver)},
           {"lambda", a.lambda},
           {"eta", a.eta ? Json(*a.eta) : Json("auto")},
           {"mass", to_string(config.mass_policy)},
           {"kde_sigma", a.kde_sigma},
           {"top_k", a.top_k ? Json(*a.top_k) : Json(nullptr)},
           {"seed", a.seed ? Json(*a.seed) : Json(nullptr)},
           {"mean_tol", config.mean.tol},
           {"mean_max_iter", config.mean.max_iter},
           {"out", a.out}};
  report["config"] = cfg;
  report["lambda_used"] = result.lambda_used;
  report["eta_used"] = result.eta_used;
  Json plan{{"rows", result.plan.rows()},
            {"cols", result.plan.cols()},
            {"objective", result.plan.objective(result.cost)},
            {"source_residual", result.plan.source_residual()},
            {"target_residual", result.plan.target_residual()}};
  if (result.plan.rows() == result.plan.cols()) plan["diagonal_mass"] = diagonal_mass(result.plan);
  report["plan"] = plan;
  Json iterations = Json::array();
  Json residuals = Json::array();
  for (const RowDiagnostics& d : result.diagnostics) {
    iterations.push_back(d.iterations);
    residuals.push_back(d.residual);
  }
  report["mean_diagnostics"] = Json{{"iterations", iterations}, {"residuals", residuals}};
  if (a.timings) {
    report["timings"] = Json{{"solve_seconds", solve_seconds},
                             {"total_seconds", seconds_since(start)}};
  }
  write_report(dir, report);
  out << "adapted " << source.matrices.size() << " matrices onto " << target.matrices.size()
      << " targets; wrote " << (dir / "adapted.json").string() << "\n";
  return kOk;
}

struct ToyArgs {
  int n = 50;
  int grid = 64;
  long long seed = 7;
  double theta_star = 1.0;
  std::string out;
  bool timings = false;
};

int cmd_toy_a(const ToyArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  if (a.n < 1 || a.grid < 1) throw InvalidInput("--n and --grid must be positive");
  const std::vector<double> grid = uniform_grid(a.grid, 0.0, std::numbers::pi, true);
  const std::vector<SweepPoint> sweep =
      toy_a_sweep(a.n, grid, static_cast<std::uint64_t>(a.seed));

  fs::create_directories(a.out);
  const fs::path dir(a.out);
  io::write_file(dir / "toy_a.csv", sweep_csv(sweep));
  Json report = base_report("toy-a");
  report["config"] = Json{{"n", a.n}, {"grid", a.grid}, {"seed", a.seed}, {"out", a.out}};
  report["theta0"] = match_json(sweep.front().report);
  if (a.timings) report["timings"] = Json{{"total_seconds", seconds_since(start)}};
  write_report(dir, report);
  out << "toy-a: " << sweep.size() << " grid points, recovery error at theta=0: "
      << sweep.front().report.recovery_error << "\n";
  return kOk;
}

int cmd_toy_b(const ToyArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  if (a.n < 1 || a.grid < 1) throw InvalidInput("--n and --grid must be positive");
  const std::vector<SpdMatrix> source =
      random_spd(2, a.n, kToySourceScale, static_cast<std::uint64_t>(a.seed));
  const std::vector<SpdMatrix> target =
      apply_congruence(CongruenceMap{toy_positive_part(), a.theta_star}, source);
  const std::vector<double> grid = uniform_grid(a.grid, 0.0, 2.0 * std::numbers::pi, false);
  const ToyBResult result = toy_b_search(source, target, grid);

  fs::create_directories(a.out);
  const fs::path dir(a.out);
  io::write_file(dir / "toy_b.csv", sweep_csv(result.curve));
  Json report = base_report("toy-b");
  report["config"] = Json{{"n", a.n},         {"grid", a.grid}, {"seed", a.seed},
                          {"theta_star", a.theta_star}, {"out", a.out}};
  report["best_theta"] = result.best_theta;
  report["best"] = match_json(result.curve[result.best_index].report);
  report["theta0"] = match_json(result.curve.front().report);
  if (a.timings) report["timings"] = Json{{"total_seconds", seconds_since(start)}};
  write_report(dir, report);
  out << "toy-b: best theta " << result.best_theta << " (diagonal mass "
      << result.curve[result.best_index].report.diagonal_mass << ")\n";
  return kOk;
}

struct CosineArgs {
  CosineOptions options;
  long long seed = 7;
  std::string out;
  bool timings = false;
};

int cmd_cosine(const CosineArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  const CosineTrials trials = cosine_trials(a.options, static_cast<std::uint64_t>(a.seed));
  const std::array<ConfigReport, 3> configs = three_config_comparison(trials);

  fs::create_directories(a.out);
  const fs::path dir(a.out);
  std::string csv = "config,diagonal_mass,objective\n";
  Json per_config = Json::object();
  for (const ConfigReport& c : configs) {
    csv += c.name + "," + io::format_double(c.report.diagonal_mass) + "," +
           io::format_double(c.report.objective) + "\n";
    per_config[c.name] = match_json(c.report);
  }
  io::write_file(dir / "cosine.csv", csv);

  auto dataset = [&](const std::vector<TimeSeriesTrial>& side) {
    io::DatasetFile ds;
    ds.kind = io::DatasetKind::kTimeseries;
    ds.dim = a.options.channels;
    ds.samples = a.options.samples;
    for (const TimeSeriesTrial& t : side) ds.trials.push_back(t.data);
    return ds;
  };
  io::save_dataset(dir / "source.json", dataset(trials.source));
  io::save_dataset(dir / "target.json", dataset(trials.target));

  Json report = base_report("cosine");
  report["config"] = Json{{"n", a.options.n},
                          {"channels", a.options.channels},
                          {"samples", a.options.samples},
                          {"sample_period", a.options.sample_period},
                          {"noise", a.options.noise},
                          {"seed", a.seed},
                          {"out", a.out}};
  report["configs"] = per_config;
  if (a.timings) report["timings"] = Json{{"total_seconds", seconds_since(start)}};
  write_report(dir, report);
  for (const ConfigReport& c : configs) {
    out << c.name << ": diagonal mass " << c.report.diagonal_mass << "\n";
  }
  return kOk;
}

struct CovarianceArgs {
  std::string input;
  std::string out;
};

int cmd_covariance(const CovarianceArgs& a, std::ostream& out, std::ostream& err) {
  const io::DatasetFile in = io::load_dataset(a.input);
  if (in.kind != io::DatasetKind::kTimeseries) {
    throw io::InputError(a.input + ": kind must be \"timeseries\"");
  }
  io::DatasetFile result;
  result.kind = io::DatasetKind::kSpd;
  result.dim = in.dim;
  result.labels = in.labels;
  for (std::size_t i = 0; i < in.trials.size(); ++i) {
    try {
      CovarianceResult c = covariance(in.trials[i]);
      if (c.ridge > 0.0) {
        err << "trial " << i << ": near-singular covariance, added ridge " << c.ridge << "\n";
      }
      result.matrices.push_back(std::move(c.covariance));
    } catch (const NotPositiveDefinite& e) {
      throw NotPositiveDefinite("trial " + std::to_string(i) + ": " + e.what());
    }
  }
  const fs::path out_path(a.out);
  if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
  io::save_dataset(out_path, result);
  out << "wrote " << result.matrices.size() << " covariance matrices to " << a.out << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal-transport domain adaptation on SPD matrices"};
  app.require_subcommand(1);

  AdaptArgs adapt_args;
  CLI::App* adapt_cmd = app.add_subcommand("adapt", "Adapt a source SPD dataset onto a target");
  adapt_cmd->add_option("source", adapt_args.source, "Source dataset (JSON, kind spd)")->required();
  adapt_cmd->add_option("target", adapt_args.target, "Target dataset (JSON, kind spd)")->required();
  adapt_cmd->add_option("--metric", adapt_args.metric, "Cost metric")
      ->check(CLI::IsMember({"riemannian", "euclidean"}));
  adapt_cmd->add_option("--solver", adapt_args.solver, "Transport solver")
      ->check(CLI::IsMember({"exact", "sinkhorn", "sinkhorn-labels"}));
  adapt_cmd->add_option("--lambda", adapt_args.lambda, "Entropic lambda: auto or a number");
  adapt_cmd->add_option("--eta", adapt_args.eta, "Label penalty weight (default 2*median C)")
      ->check(CLI::NonNegativeNumber);
  adapt_cmd->add_option("--mass", adapt_args.mass, "Mass policy")
      ->check(CLI::IsMember({"uniform", "kde"}));
  adapt_cmd->add_option("--kde-sigma", adapt_args.kde_sigma,
                        "KDE bandwidth sigma: auto (median squared distance) or a number");
  adapt_cmd->add_option("--top-k", adapt_args.top_k, "Keep the k largest entries per plan row")
      ->check(CLI::PositiveNumber);
  adapt_cmd->add_option("--seed", adapt_args.seed, "Seed echoed into the report");
  adapt_cmd->add_option("--out", adapt_args.out, "Output directory")->required();
  adapt_cmd->add_flag("--timings", adapt_args.timings, "Record wall-clock timings in the report");

  ToyArgs toy_a_args;
  CLI::App* toy_a_cmd = app.add_subcommand("toy-a", "Recovery error of s_theta over theta in [0, pi]");
  toy_a_cmd->add_option("--n", toy_a_args.n, "Number of source matrices");
  toy_a_cmd->add_option("--grid", toy_a_args.grid, "Number of theta grid points");
  toy_a_cmd->add_option("--seed", toy_a_args.seed, "Random seed");
  toy_a_cmd->add_option("--out", toy_a_args.out, "Output directory")->required();
  toy_a_cmd->add_flag("--timings", toy_a_args.timings, "Record wall-clock timings in the report");

  ToyArgs toy_b_args;
  toy_b_args.n = 20;
  toy_b_args.grid = 256;
  CLI::App* toy_b_cmd = app.add_subcommand("toy-b", "Rotation grid search before exact OT");
  toy_b_cmd->add_option("--n", toy_b_args.n, "Number of source matrices");
  toy_b_cmd->add_option("--grid", toy_b_args.grid, "Number of theta grid points over [0, 2pi)");
  toy_b_cmd->add_option("--theta-star", toy_b_args.theta_star, "Rotation angle of the true map");
  toy_b_cmd->add_option("--seed", toy_b_args.seed, "Random seed");
  toy_b_cmd->add_option("--out", toy_b_args.out, "Output directory")->required();
  toy_b_cmd->add_flag("--timings", toy_b_args.timings, "Record wall-clock timings in the report");

  CosineArgs cosine_args;
  bool noiseless = false;
  CLI::App* cosine_cmd = app.add_subcommand("cosine", "Compare three OT setups on cosine signals");
  cosine_cmd->add_option("--n", cosine_args.options.n, "Number of trial pairs");
  cosine_cmd->add_option("--channels", cosine_args.options.channels, "Channels per trial");
  cosine_cmd->add_option("--samples", cosine_args.options.samples, "Samples per trial");
  cosine_cmd->add_option("--ts", cosine_args.options.sample_period, "Sample period");
  cosine_cmd->add_option("--seed", cosine_args.seed, "Random seed");
  cosine_cmd->add_flag("--noiseless", noiseless, "Generate the signals without noise");
  cosine_cmd->add_option("--out", cosine_args.out, "Output directory")->required();
  cosine_cmd->add_flag("--timings", cosine_args.timings, "Record wall-clock timings in the report");

  CovarianceArgs cov_args;
  CLI::App* cov_cmd = app.add_subcommand("covariance", "Convert time series trials to covariances");
  cov_cmd->add_option("input", cov_args.input, "Time series dataset (JSON)")->required();
  cov_cmd->add_option("--out", cov_args.out, "Output SPD dataset path")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }

  try {
    if (*adapt_cmd) return cmd_adapt(adapt_args, out);
    if (*toy_a_cmd) return cmd_toy_a(toy_a_args, out);
    if (*toy_b_cmd) return cmd_toy_b(toy_b_args, out);
    if (*cosine_cmd) {
      cosine_args.options.noise = !noiseless;
      return cmd_cosine(cosine_args, out);
    }
    if (*cov_cmd) return cmd_covariance(cov_args, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace spdot::cli
