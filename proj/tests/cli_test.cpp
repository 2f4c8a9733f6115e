// Copyright 2026 The snakegait Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.hpp"

namespace snakegait::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("snakegait_cli_" + std::string(::testing::UnitTest::GetInstance()
                                               ->current_test_info()
                                               ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "snakegait");
    std::vector<char*> argv;
    for (std::string& a : args) argv.push_back(a.data());
    return run(static_cast<int>(argv.size()), argv.data());
  }

  std::string write_config(const std::string& name, const std::string& body) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << body;
    return p.string();
  }

  std::string out(const std::string& sub) const { return (dir_ / sub).string(); }

  fs::path dir_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> data_lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;  // header first
}

constexpr const char* kShortMpc = R"({
  "environment": {"type": "viscous"},
  "mpc": {"ilqr": {"horizon": 5, "max_iterations": 3}, "total_steps": 6,
          "cold_start_torque": 0.3},
  "protocol": {"duration": 0.06, "window_start": 0.02}
})";

TEST_F(CliTest, HelpExitsZero) { EXPECT_EQ(invoke({"--help"}), 0); }

TEST_F(CliTest, MissingSubcommandIsConfigError) { EXPECT_EQ(invoke({}), 1); }

TEST_F(CliTest, BadEnvIsConfigError) {
  EXPECT_EQ(invoke({"simulate", "--env", "sand", "--output", out("o")}), 1);
}

TEST_F(CliTest, UnknownKeyIsConfigError) {
  const auto cfg = write_config("c.json", R"({"snake": {"n_link": 5}})");
  EXPECT_EQ(invoke({"simulate", "--config", cfg, "--output", out("o")}), 1);
}

TEST_F(CliTest, InvalidValueIsConfigError) {
  const auto cfg = write_config("c.json", R"({"snake": {"dt": -0.01}})");
  EXPECT_EQ(invoke({"simulate", "--config", cfg, "--output", out("o")}), 1);
}

TEST_F(CliTest, MissingConfigFileIsConfigError) {
  EXPECT_EQ(invoke({"simulate", "--config", out("absent.json"), "--output", out("o")}), 1);
}

TEST_F(CliTest, BlowUpIsNumericalFailure) {
  const auto cfg = write_config("c.json", R"({"snake": {"link_mass": 1e-16},
    "protocol": {"duration": 0.5, "window_start": 0.1}})");
  EXPECT_EQ(invoke({"simulate", "--config", cfg, "--output", out("o")}), 2);
}

TEST_F(CliTest, ZeroTorqueSimulationStaysPut) {
  const auto cfg = write_config("c.json", R"({"simulate": {"controller": "zero"},
    "protocol": {"duration": 0.5, "window_start": 0.1}})");
  ASSERT_EQ(invoke({"simulate", "--config", cfg, "--output", out("o")}), 0);
  const auto lines = data_lines(fs::path(out("o")) / "trajectory.csv");
  ASSERT_EQ(lines.size(), 52u);
  const std::string first = lines[1].substr(lines[1].find(','));
  for (std::size_t i = 2; i < lines.size(); ++i) {
    std::string tail = lines[i].substr(lines[i].find(','));
    if (i + 1 == lines.size()) tail = tail.substr(0, tail.size() - 4) + ",0,0,0,0";
    EXPECT_EQ(tail, first) << "row " << i;
  }
}

TEST_F(CliTest, SerpenoidHasOneRowPerState) {
  const auto cfg = write_config("c.json", R"({"protocol": {"duration": 1.0, "window_start": 0.2}})");
  ASSERT_EQ(invoke({"simulate", "--config", cfg, "--output", out("o")}), 0);
  EXPECT_EQ(data_lines(fs::path(out("o")) / "trajectory.csv").size(), 102u);
}

TEST_F(CliTest, OutputsAreByteIdenticalAndCarryConfig) {
  const auto cfg = write_config("c.json", kShortMpc);
  ASSERT_EQ(invoke({"mpc", "--config", cfg, "--output", out("a"), "--threads", "1"}), 0);
  ASSERT_EQ(invoke({"mpc", "--config", cfg, "--output", out("b"), "--threads", "2"}), 0);
  for (const char* f : {"trajectory.csv", "metrics.csv", "spectrum.csv"}) {
    const std::string a = slurp(fs::path(out("a")) / f);
    ASSERT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, slurp(fs::path(out("b")) / f)) << f;
    EXPECT_EQ(a.rfind("# config: {", 0), 0u) << f;
  }
}

TEST_F(CliTest, EnvFlagOverridesConfig) {
  const auto cfg = write_config("c.json", kShortMpc);
  ASSERT_EQ(invoke({"simulate", "--config", cfg, "--env", "fluid", "--output", out("o")}), 0);
  const std::string head = data_lines(fs::path(out("o")) / "trajectory.csv").empty()
                               ? ""
                               : slurp(fs::path(out("o")) / "trajectory.csv");
  EXPECT_NE(head.find("\"type\":\"fluid\""), std::string::npos);
}

TEST_F(CliTest, SingleCellGridAndFront) {
  const auto cfg = write_config("c.json", R"({
    "grid": {"frequency": {"min": 1.0, "max": 1.0, "interval": 0.25},
             "amplitude": {"min": 1.0, "max": 1.0, "interval": 0.1},
             "phase_offset": {"min": 3.0, "max": 3.0, "interval": 0.1},
             "kp": {"min": 1.0, "max": 1.0, "interval": 0.1},
             "kd": {"min": 0.1, "max": 0.1, "interval": 0.01}},
    "environment": {"type": "viscous"},
    "protocol": {"duration": 1.0, "window_start": 0.5}})");
  ASSERT_EQ(invoke({"gridsearch", "--config", cfg, "--output", out("o")}), 0);
  const auto points = data_lines(fs::path(out("o")) / "points.csv");
  const auto front = data_lines(fs::path(out("o")) / "front.csv");
  EXPECT_LE(points.size(), 2u);
  EXPECT_EQ(front.size(), points.size());
}

TEST_F(CliTest, SmallGridFrontIsSubsetOfPoints) {
  const auto cfg = write_config("c.json", R"({
    "grid": {"frequency": {"min": 0.5, "max": 1.5, "interval": 0.5},
             "amplitude": {"min": 0.6, "max": 1.2, "interval": 0.6},
             "phase_offset": {"min": 2.0, "max": 4.0, "interval": 1.0},
             "kp": {"min": 1.0, "max": 1.0, "interval": 0.1},
             "kd": {"min": 0.1, "max": 0.1, "interval": 0.01}},
    "environment": {"type": "viscous"},
    "protocol": {"duration": 1.0, "window_start": 0.5}})");
  ASSERT_EQ(invoke({"gridsearch", "--config", cfg, "--output", out("o"), "--threads", "2"}), 0);
  const auto points = data_lines(fs::path(out("o")) / "points.csv");
  const auto front = data_lines(fs::path(out("o")) / "front.csv");
  ASSERT_GE(front.size(), 2u);
  EXPECT_EQ(front[0], points[0]);
  double last_power = -1.0;
  for (std::size_t i = 1; i < front.size(); ++i) {
    EXPECT_NE(std::find(points.begin() + 1, points.end(), front[i]), points.end());
    const std::string rest = front[i].substr(front[i].find(',') + 1);
    const double power = std::stod(rest.substr(0, rest.find(',')));
    EXPECT_GT(power, last_power);
    last_power = power;
  }
}

TEST_F(CliTest, AnalyzeReproducesMpcMetrics) {
  const auto cfg = write_config("c.json", kShortMpc);
  ASSERT_EQ(invoke({"mpc", "--config", cfg, "--output", out("run")}), 0);
  ASSERT_EQ(invoke({"analyze", (fs::path(out("run")) / "trajectory.csv").string(),
                    "--output", out("an")}),
            0);
  auto metrics = [](const fs::path& p) {
    const auto l = data_lines(p);
    return l.at(1).substr(l.at(1).find(','));
  };
  EXPECT_EQ(metrics(fs::path(out("run")) / "metrics.csv"),
            metrics(fs::path(out("an")) / "metrics.csv"));
  EXPECT_EQ(data_lines(fs::path(out("run")) / "spectrum.csv"),
            data_lines(fs::path(out("an")) / "spectrum.csv"));
}

TEST_F(CliTest, AnalyzeMissingFileIsConfigError) {
  EXPECT_EQ(invoke({"analyze", out("none.csv"), "--output", out("an")}), 1);
}

TEST_F(CliTest, BenchWritesOneRowPerSolve) {
  const auto cfg = write_config("c.json", kShortMpc);
  ASSERT_EQ(invoke({"bench", "--config", cfg, "--output", out("o")}), 0);
  EXPECT_EQ(data_lines(fs::path(out("o")) / "bench.csv").size(), 7u);
}

}  // namespace
}  // namespace snakegait::cli
