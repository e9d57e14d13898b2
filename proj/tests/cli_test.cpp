// Copyright 2026 The Authors.
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

// End-to-end checks against the real binary: exit codes, file formats, and
// stream contents. The binary path comes from the build system.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "submod_pricing/json_io.hpp"
#include "test_util.hpp"

namespace submod_pricing {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("submod_pricing_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunResult run(const std::string& args) const {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string command = std::string(SUBMOD_PRICING_BIN) + " " + args +
                                " >" + out.string() + " 2>" + err.string();
    const int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out);
    result.err = slurp(err);
    return result;
  }

  fs::path path(const std::string& name) const { return dir_ / name; }

  void write_two_channel_instance(const fs::path& to) const {
    const Instance inst({Buyer{testing::two_channel_valuation(),
                               kUnlimitedBudget}});
    write_json_file(to.string(), instance_to_json(inst, "single"));
  }

  void write_pooled_pair_instance(const fs::path& to) const {
    write_json_file(to.string(),
                    instance_to_json(testing::pooled_counterexample_instance(),
                                     "collaborating"));
  }

  fs::path dir_;
};

TEST_F(CliTest, GenWritesDeterministicInstances) {
  const std::string flags =
      "gen --kind uniform --v 4 --w 10 --d 2 --qmax 0.3 --seed 7 --out ";
  ASSERT_EQ(run(flags + path("a.json").string()).exit_code, 0);
  ASSERT_EQ(run(flags + path("b.json").string()).exit_code, 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));

  const InstanceFile file = instance_from_json(read_json_file(path("a.json")));
  EXPECT_EQ(file.instance.ground().size(), 4);
}

TEST_F(CliTest, SolveTwoChannelInstance) {
  write_two_channel_instance(path("inst.json"));
  const RunResult proposed =
      run("solve --in " + path("inst.json").string() + " --verify");
  ASSERT_EQ(proposed.exit_code, 0) << proposed.err;
  const Json sol = Json::parse(proposed.out);
  EXPECT_DOUBLE_EQ(sol.at("profit").get<double>(), 0.9);
  EXPECT_EQ(sol.at("s"), 1);
  EXPECT_TRUE(sol.at("verified").at("pass").get<bool>());

  const RunResult sellall =
      run("solve --in " + path("inst.json").string() + " --algo sellall");
  const Json baseline = Json::parse(sellall.out);
  EXPECT_NEAR(baseline.at("profit").get<double>(), 0.18, 1e-12);
}

TEST_F(CliTest, SolveCollabBruteForce) {
  write_pooled_pair_instance(path("pair.json"));
  const RunResult result = run("solve --in " + path("pair.json").string() +
                               " --mode collab --algo bruteforce");
  ASSERT_EQ(result.exit_code, 0) << result.err;
  EXPECT_DOUBLE_EQ(Json::parse(result.out).at("profit").get<double>(), 4.0);
}

TEST_F(CliTest, SolveBudgetedSingle) {
  write_two_channel_instance(path("inst.json"));
  const RunResult result =
      run("solve --in " + path("inst.json").string() + " --budget 0.5");
  ASSERT_EQ(result.exit_code, 0);
  EXPECT_DOUBLE_EQ(Json::parse(result.out).at("profit").get<double>(), 0.5);
}

TEST_F(CliTest, MultiWithFiniteBudgetIsRejected) {
  write_two_channel_instance(path("inst.json"));
  const RunResult result = run("solve --in " + path("inst.json").string() +
                               " --mode multi --budget 1.0");
  EXPECT_EQ(result.exit_code, 2);
  EXPECT_NE(result.err.find("unsupported"), std::string::npos);
}

TEST_F(CliTest, CompareEmitsNormalizedRatios) {
  write_two_channel_instance(path("inst.json"));
  const RunResult result =
      run("compare --seed 5 --in " + path("inst.json").string());
  ASSERT_EQ(result.exit_code, 0) << result.err;
  std::istringstream csv(result.out);
  std::string header, row;
  std::getline(csv, header);
  EXPECT_EQ(header, "instance,proposed,sellall,random,scaled,ascending");
  std::getline(csv, row);
  double proposed, sellall;
  const auto first = row.find(',');
  ASSERT_EQ(std::sscanf(row.c_str() + first, ",%lf,%lf", &proposed, &sellall),
            2);
  EXPECT_DOUBLE_EQ(proposed, 1.0);
  EXPECT_NEAR(sellall, 0.2, 1e-9);
}

TEST_F(CliTest, SweepEmitsSeriesCsv) {
  const RunResult result = run(
      "sweep --param qmax --v 6 --w 20 --d 2 --seed 3 --grid 0.2 0.8 --out " +
      path("sweep.csv").string());
  ASSERT_EQ(result.exit_code, 0) << result.err;
  std::istringstream csv(slurp(path("sweep.csv")));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "param,value,mode,profit,assigned,wall_ms");
  int rows = 0;
  while (std::getline(csv, line)) {
    if (!line.empty()) ++rows;
  }
  EXPECT_EQ(rows, 2);
}

TEST_F(CliTest, SweepAcrossChannelCounts) {
  const RunResult result = run(
      "sweep --param v --w 40 --d 2 --qmax 0.2 --seed 9 --grid 4 8 --out " +
      path("vsweep.csv").string());
  ASSERT_EQ(result.exit_code, 0) << result.err;
  const std::string csv = slurp(path("vsweep.csv"));
  EXPECT_NE(csv.find("v,4,single"), std::string::npos);
  EXPECT_NE(csv.find("v,8,single"), std::string::npos);
}

TEST_F(CliTest, ThreadCapEnvironmentVariableIsHonored) {
  // Same rows in the same order, with or without worker threads.
  const std::string flags =
      "sweep --param qmax --v 6 --w 20 --d 2 --seed 3 --grid 0.2 0.5 0.8";
  const RunResult serial = run(flags);
  ASSERT_EQ(serial.exit_code, 0);
  const fs::path out = dir_ / "stdout2.txt";
  const std::string command = "SUBMOD_PRICING_THREADS=4 " +
                              std::string(SUBMOD_PRICING_BIN) + " " + flags +
                              " >" + out.string() + " 2>/dev/null";
  ASSERT_EQ(WEXITSTATUS(std::system(command.c_str())), 0);
  // Strip the timing column; everything else must match byte for byte.
  const auto strip_timing = [](const std::string& text) {
    std::istringstream in(text);
    std::string line, kept;
    while (std::getline(in, line)) {
      kept += line.substr(0, line.rfind(','));
      kept += '\n';
    }
    return kept;
  };
  EXPECT_EQ(strip_timing(serial.out), strip_timing(slurp(out)));
}

TEST_F(CliTest, VerifySubmodularFlagsPooledCounterexample) {
  write_pooled_pair_instance(path("pair.json"));
  const RunResult result = run("verify --check submodular --in " +
                               path("pair.json").string() + " --mode collab");
  EXPECT_EQ(result.exit_code, 1);
  const Json report = Json::parse(result.out);
  EXPECT_FALSE(report.at("pass").get<bool>());
  EXPECT_EQ(report.at("witness").at("kind"), "submodularity");
}

TEST_F(CliTest, VerifyStableRoundTrip) {
  write_two_channel_instance(path("inst.json"));
  const RunResult solved = run("solve --in " + path("inst.json").string());
  std::ofstream(path("sol.json")) << solved.out;
  const RunResult verified =
      run("verify --check stable --in " + path("inst.json").string() +
          " --solution " + path("sol.json").string());
  EXPECT_EQ(verified.exit_code, 0) << verified.err;
  EXPECT_TRUE(Json::parse(verified.out).at("pass").get<bool>());
}

TEST_F(CliTest, VerifyCurvatureOnCoverage) {
  ASSERT_EQ(run("gen --kind uniform --v 5 --w 12 --d 2 --qmax 0.4 --seed 2 "
                "--out " +
                path("cov.json").string())
                .exit_code,
            0);
  const RunResult result =
      run("verify --check curvature --in " + path("cov.json").string());
  EXPECT_EQ(result.exit_code, 0);
  EXPECT_TRUE(Json::parse(result.out).at("pass").get<bool>());
}

TEST_F(CliTest, GenFixtureSidecars) {
  std::ofstream(path("clauses.txt")) << "x1 x2 x3\n";
  ASSERT_EQ(run("gen --kind 3sat --clauses " + path("clauses.txt").string() +
                " --out " + path("sat.json").string())
                .exit_code,
            0);
  const Json cert = read_json_file(path("sat.cert.json").string());
  EXPECT_EQ(cert.at("kind"), "one_in_three_3sat");
  EXPECT_TRUE(cert.at("satisfiable").get<bool>());

  ASSERT_EQ(run("gen --kind partition --values 1,1,2 --out " +
                path("part.json").string())
                .exit_code,
            0);
  const Json part = read_json_file(path("part.cert.json").string());
  EXPECT_TRUE(part.at("has_equal_partition").get<bool>());
}

TEST_F(CliTest, GenFromEventLog) {
  std::ofstream(path("log.csv")) << "user,item,weight\n"
                                    "alice,song1,5\n"
                                    "bob,song1,3\n"
                                    "alice,song2,4\n";
  const RunResult result =
      run("gen --kind eventlog --log " + path("log.csv").string() +
          " --topk 1 --slope 0.02 --intercept 0 --out " +
          path("log.json").string());
  ASSERT_EQ(result.exit_code, 0) << result.err;
  const InstanceFile file =
      instance_from_json(read_json_file(path("log.json").string()));
  EXPECT_EQ(file.instance.ground().ids(), std::vector<std::string>{"song1"});
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").exit_code, 2);
  EXPECT_EQ(run("solve").exit_code, 2);  // missing --in
  EXPECT_EQ(run("frobnicate").exit_code, 2);
  EXPECT_EQ(run("gen --kind nosuch --out x.json").exit_code, 2);
  write_two_channel_instance(path("inst.json"));
  EXPECT_EQ(run("solve --in " + path("inst.json").string() +
                " --algo nosuch")
                .exit_code,
            2);
  EXPECT_EQ(run("solve --in " + path("missing.json").string()).exit_code, 2);
}

TEST_F(CliTest, HelpExitsZero) {
  EXPECT_EQ(run("--help").exit_code, 0);
  EXPECT_EQ(run("solve --help").exit_code, 0);
}

}  // namespace
}  // namespace submod_pricing
