// tests/io_cli_test.cpp

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

#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "commands.hpp"
#include "json.hpp"
#include "spdot/experiments.hpp"
#include "spdot/io.hpp"
#include "spdot/transport.hpp"
#include "test_util.hpp"

namespace spdot {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("spdot_test_" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "spdot");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

io::DatasetFile spd_file(const std::vector<SpdMatrix>& pts,
                         std::optional<std::vector<int>> labels = std::nullopt) {
  io::DatasetFile f;
  f.kind = io::DatasetKind::kSpd;
  f.dim = pts[0].dim();
  f.matrices = pts;
  f.labels = std::move(labels);
  return f;
}

TEST(DatasetTest, RoundTripIsBitExact) {
  std::mt19937_64 rng(91);
  std::vector<SpdMatrix> pts;
  for (int i = 0; i < 5; ++i) pts.push_back(testing::random_point(rng, 3, 1.0));
  const io::DatasetFile f = spd_file(pts, std::vector<int>{0, 1, 0, 1, 2});
  const std::string text = io::dump_dataset(f);
  const io::DatasetFile g = io::parse_dataset(text, "mem");
  ASSERT_EQ(g.matrices.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(g.matrices[i].matrix(), pts[i].matrix());
  EXPECT_EQ(*g.labels, *f.labels);
  EXPECT_EQ(io::dump_dataset(g), text);
}

TEST(DatasetTest, TimeseriesRoundTrip) {
  io::DatasetFile f;
  f.kind = io::DatasetKind::kTimeseries;
  f.dim = 2;
  f.samples = 3;
  Matrix t(2, 3);
  t << 0.1, -2, 3e-17, 4, 5.5, 1e300;
  f.trials = {t};
  const io::DatasetFile g = io::parse_dataset(io::dump_dataset(f), "mem");
  ASSERT_EQ(g.trials.size(), 1u);
  EXPECT_EQ(g.trials[0], t);
  EXPECT_FALSE(g.labels.has_value());
}

TEST(DatasetTest, ErrorsNameFileAndRecord) {
  const auto expect_error = [](const std::string& text, const std::string& fragment) {
    try {
      io::parse_dataset(text, "data.json");
      ADD_FAILURE() << "no error for " << text;
    } catch (const io::InputError& e) {
      const std::string msg = e.what();
      EXPECT_NE(msg.find("data.json"), std::string::npos) << msg;
      EXPECT_NE(msg.find(fragment), std::string::npos) << msg;
    }
  };
  expect_error("{", "not valid JSON");
  expect_error("[]", "object");
  expect_error(R"({"kind": "spd", "dim": 2, "matrices": []})", "empty");
  expect_error(R"({"kind": "spd", "dim": 2, "matrices": [[1,0,0,1],[1,0,0]]})", "matrices[1]");
  expect_error(R"({"kind": "spd", "dim": 2, "matrices": [[1,0,0,1],[1,0,0,-1]]})",
               "matrices[1]");
  expect_error(R"({"kind": "spd", "dim": 2, "matrices": [[1,2,0,1]]})", "matrices[0]");
  expect_error(R"({"kind": "spd", "dim": 2, "matrices": [[1,0,0,1]], "labels": [1, 2]})",
               "labels");
  expect_error(R"({"kind": "spd", "dim": 0, "matrices": [[1]]})", "dim");
  expect_error(R"({"kind": "cube", "dim": 2})", "unknown kind");
  expect_error(R"({"kind": "timeseries", "channels": 1, "samples": 2, "trials": [["a", 1]]})",
               "trials[0]");
}

TEST(CsvTest, PlanRoundTripAndErrors) {
  Matrix g(2, 3);
  g << 0.1, 0.2, 1.0 / 3.0, 0, 1e-300, 0.5;
  EXPECT_EQ(io::parse_csv_matrix(io::plan_to_csv(g), "plan.csv"), g);
  EXPECT_THROW(io::parse_csv_matrix("1,2\n3\n", "bad.csv"), io::InputError);
  EXPECT_THROW(io::parse_csv_matrix("1,x\n", "bad.csv"), io::InputError);
  const io::CsvTable t = io::parse_csv("a,b\r\n1,2\n\n3,4\n", "t.csv", true);
  EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(t.rows.size(), 2u);
}

TEST(DigestTest, KnownVector) {
  EXPECT_EQ(io::sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(io::sha256_hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(CliTest, ExactIdentityPlan) {
  TempDir dir;
  const auto pts = random_spd(3, 6, 1.0, 11);
  io::save_dataset(dir / "src.json", spd_file(pts));
  const RunResult r = run_cli({"adapt", dir / "src.json", dir / "src.json", "--solver", "exact",
                               "--out", dir / "out"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Matrix plan = io::parse_csv_matrix(io::read_file(dir / "out/plan.csv"), "plan.csv");
  EXPECT_EQ(plan, Matrix(Matrix::Identity(6, 6) / 6.0));
  const io::DatasetFile adapted = io::load_dataset(dir / "out/adapted.json");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_LE(riemannian_distance(adapted.matrices[i], pts[i]), 1e-8);
  }
  const auto report = nlohmann::json::parse(io::read_file(dir / "out/report.json"));
  EXPECT_EQ(report["command"], "adapt");
  EXPECT_EQ(report["inputs"]["source"]["sha256"],
            io::sha256_hex(io::read_file(dir / "src.json")));
  EXPECT_EQ(report["plan"]["diagonal_mass"], 1.0);
  EXPECT_FALSE(report.contains("timings"));
}

TEST(CliTest, AutoLambdaIsEchoed) {
  TempDir dir;
  const auto src = random_spd(2, 5, 1.0, 12);
  const auto tgt = random_spd(2, 7, 1.0, 13);
  io::save_dataset(dir / "s.json", spd_file(src));
  io::save_dataset(dir / "t.json", spd_file(tgt));
  const RunResult r = run_cli({"adapt", dir / "s.json", dir / "t.json", "--solver", "sinkhorn",
                               "--lambda", "auto", "--out", dir / "o", "--timings"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = nlohmann::json::parse(io::read_file(dir / "o/report.json"));
  const CostMatrix cost = build_cost(src, tgt, Metric::kRiemannian);
  const double m = 0.05 * median_entry(cost.entries());
  EXPECT_NEAR(report["lambda_used"].get<double>(), 1.0 / (2 * m * m), 1e-9 / (m * m));
  EXPECT_TRUE(report.contains("timings"));
}

TEST(CliTest, ExitCodes) {
  TempDir dir;
  const auto pts = random_spd(2, 4, 1.0, 14);
  io::save_dataset(dir / "p.json", spd_file(pts));
  EXPECT_EQ(run_cli({"adapt", dir / "p.json", dir / "p.json", "--solver", "sinkhorn-labels",
                     "--out", dir / "o"})
                .code,
            2);
  io::write_file(dir / "bad.json", R"({"kind": "spd", "dim": 2, "matrices": [[1,0,0,1],[1]]})");
  const RunResult bad = run_cli({"adapt", dir / "bad.json", dir / "p.json", "--out", dir / "o"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("bad.json"), std::string::npos);
  EXPECT_NE(bad.err.find("matrices[1]"), std::string::npos);
  EXPECT_EQ(run_cli({"adapt", dir / "missing.json", dir / "p.json", "--out", dir / "o"}).code, 2);
  EXPECT_EQ(run_cli({"adapt", dir / "p.json", dir / "p.json", "--lambda", "-1", "--out",
                     dir / "o"})
                .code,
            2);
  EXPECT_EQ(run_cli({"adapt", dir / "p.json"}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  // Underflowing kernel is a solver failure. The sets differ, so every cost is positive.
  io::save_dataset(dir / "q.json", spd_file(random_spd(2, 4, 1.0, 15)));
  EXPECT_EQ(run_cli({"adapt", dir / "p.json", dir / "q.json", "--lambda", "1e6", "--out",
                     dir / "o"})
                .code,
            3);
  io::write_file(dir / "empty.json",
                 R"({"kind": "timeseries", "channels": 2, "samples": 5, "trials": []})");
  EXPECT_EQ(run_cli({"covariance", dir / "empty.json", "--out", dir / "c.json"}).code, 2);
  io::write_file(dir / "flat.json",
                 R"({"kind": "timeseries", "channels": 2, "samples": 3,
                     "trials": [[1,2,3,4,5,6],[0,0,0,0,0,0]]})");
  const RunResult flat = run_cli({"covariance", dir / "flat.json", "--out", dir / "c.json"});
  EXPECT_EQ(flat.code, 3);
  EXPECT_NE(flat.err.find("trial 1"), std::string::npos) << flat.err;
}

TEST(CliTest, ToyADeterministicCsv) {
  TempDir dir;
  ASSERT_EQ(run_cli({"toy-a", "--n", "20", "--grid", "8", "--seed", "7", "--out", dir / "a"}).code,
            0);
  ASSERT_EQ(run_cli({"toy-a", "--n", "20", "--grid", "8", "--seed", "7", "--out", dir / "b"}).code,
            0);
  const std::string a = io::read_file(dir / "a/toy_a.csv");
  EXPECT_EQ(a, io::read_file(dir / "b/toy_a.csv"));
  const io::CsvTable t = io::parse_csv(a, "toy_a.csv", true);
  EXPECT_EQ(t.header,
            (std::vector<std::string>{"theta", "recovery_error", "diagonal_mass", "objective"}));
  ASSERT_EQ(t.rows.size(), 8u);
  EXPECT_LE(io::parse_number(t.rows[0][1], "toy_a.csv", 0), 1e-6);
}

TEST(CliTest, ToyBWritesCurve) {
  TempDir dir;
  ASSERT_EQ(run_cli({"toy-b", "--n", "6", "--grid", "16", "--out", dir / "b"}).code, 0);
  const io::CsvTable t = io::parse_csv(io::read_file(dir / "b/toy_b.csv"), "toy_b.csv", true);
  EXPECT_EQ(t.rows.size(), 16u);
  const auto report = nlohmann::json::parse(io::read_file(dir / "b/report.json"));
  EXPECT_EQ(report["command"], "toy-b");
}

TEST(CliTest, CosineCovarianceAdaptRoundTrip) {
  TempDir dir;
  ASSERT_EQ(run_cli({"cosine", "--seed", "3", "--out", dir / "c"}).code, 0);
  const io::CsvTable t = io::parse_csv(io::read_file(dir / "c/cosine.csv"), "cosine.csv", true);
  EXPECT_EQ(t.header, (std::vector<std::string>{"config", "diagonal_mass", "objective"}));
  EXPECT_EQ(t.rows.size(), 3u);
  const io::DatasetFile src = io::load_dataset(dir / "c/source.json");
  EXPECT_EQ(src.kind, io::DatasetKind::kTimeseries);
  EXPECT_EQ(src.count(), 40u);

  ASSERT_EQ(run_cli({"covariance", dir / "c/source.json", "--out", dir / "ps.json"}).code, 0);
  ASSERT_EQ(run_cli({"covariance", dir / "c/target.json", "--out", dir / "pt.json"}).code, 0);
  const io::DatasetFile ps = io::load_dataset(dir / "ps.json");
  EXPECT_EQ(ps.matrices.size(), 40u);
  EXPECT_EQ(ps.dim, 5);
  const RunResult r = run_cli({"adapt", dir / "ps.json", dir / "pt.json", "--solver", "exact",
                               "--out", dir / "a"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(io::load_dataset(dir / "a/adapted.json").matrices.size(), 40u);
}

}  // namespace
}  // namespace spdot
