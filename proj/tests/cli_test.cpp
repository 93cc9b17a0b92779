// Copyright 2026 The pufeval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "pufeval/io.hpp"
#include "pufeval/report.hpp"

namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(PUFEVAL_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    r.out.append(buf.data(), got);
  }
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pufeval_cli_" + std::to_string(::testing::UnitTest::GetInstance()
                                                 ->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
  }

  fs::path dir_;
};

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("check --x 3").code, 2);
  EXPECT_EQ(run("check --x 3 --n 2").code, 2);
  EXPECT_EQ(run("plan width --width 2").code, 2);
  EXPECT_EQ(run("simulate --devices 3 --positions 2").code, 2);
  EXPECT_EQ(run("analyze --limits 0.4,0.6 " + path("missing.csv")).code, 2);
  EXPECT_EQ(run("analyze --limits 0.4,0.6 --min-entropy 0.9 x").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(CliTest, ParseErrorsExitTwo) {
  write("bad.csv", "2,2,1\n0,1\n0,2\n");
  EXPECT_EQ(run("analyze " + path("bad.csv")).code, 2);
  write("short.bin", "PUFB\x01");
  EXPECT_EQ(run("analyze " + path("short.bin")).code, 2);
}

TEST_F(CliTest, CheckVerdicts) {
  const CliRun ok = run("check --x 340 --n 680");
  EXPECT_EQ(ok.code, 0);
  EXPECT_NE(ok.out.find("verdict=accept"), std::string::npos);
  const CliRun bad = run("check --x 341 --n 680");
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("verdict=reject"), std::string::npos);
  EXPECT_EQ(run("check --x 50 --n 100 --limits 0.3,0.7 --alpha 0.2").code, 0);
  EXPECT_EQ(run("check --x 5 --n 10 --limits 0.3,0.7 --alpha 0.2").code, 1);
  EXPECT_EQ(run("check --x 340 --n 680 --min-entropy 0.8").code, 0);
}

TEST_F(CliTest, PlanCommands) {
  EXPECT_NE(run("plan width --width 0.1 --alpha 0.01").out.find("devices=664"),
            std::string::npos);
  EXPECT_NE(run("plan width --width 0.1 --method clopper_pearson").out.find(
                "devices=680"),
            std::string::npos);
  EXPECT_NE(run("plan width --width 0.1 --method wilson").out.find(
                "devices=658"),
            std::string::npos);
  const CliRun frr = run("plan frr --limits 0.3,0.7 --inner 0.4,0.6 --beta 0.05");
  EXPECT_EQ(frr.code, 0);
  EXPECT_NE(frr.out.find("devices="), std::string::npos);
  EXPECT_EQ(run("plan frr --inner 0.4,0.6").code, 2);
}

TEST_F(CliTest, SimulateAnalyzeExitCodes) {
  // All-0.5 population with N = 1: no position can be accepted.
  ASSERT_EQ(run("simulate --devices 1 --positions 4 --seed 1 --out " +
                path("one.csv"))
                .code,
            0);
  EXPECT_EQ(run("analyze " + path("one.csv")).code, 1);

  // Counts file where every position sits at x = N/2 with a wide band.
  write("counts.csv", "counts,100,3\n50\n50\n50\n");
  const CliRun ok = run("analyze --limits 0.3,0.7 --format csv " + path("counts.csv"));
  EXPECT_EQ(ok.code, 0);
  const auto rows = pufeval::parse_report_csv(ok.out);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) EXPECT_TRUE(r.accepted);
}

TEST_F(CliTest, SimulateIsDeterministicAndBinaryMatchesCsv) {
  const std::string args = "simulate --devices 20 --positions 13 --repeats 3 "
                           "--alias ramp --noise 0.1 --seed 99";
  const CliRun a = run(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, run(args).out);
  ASSERT_EQ(run(args + " --binary --out " + path("m.bin")).code, 0);
  const auto csv = pufeval::parse_measurements_csv(a.out);
  const auto bin = pufeval::load_measurements(path("m.bin"));
  EXPECT_EQ(csv, bin);
  EXPECT_EQ(run("simulate --devices 2 --positions 3 --alias 0.1,0.2 --seed 1")
                .code,
            2);
  EXPECT_EQ(run("simulate --devices 2 --positions 2 --alias 0.1,0.2 --seed 1")
                .code,
            0);
}

TEST_F(CliTest, AnalyzeFormatsAndOutFile) {
  ASSERT_EQ(run("simulate --devices 50 --positions 8 --repeats 3 --seed 4 "
                "--out " + path("m.csv"))
                .code,
            0);
  const CliRun json = run("analyze --format json --ci-method wilson "
                       "clopper_pearson --early-stop-alpha 0.05 " +
                       path("m.csv"));
  const auto j = nlohmann::json::parse(json.out);
  EXPECT_EQ(j["positions"].size(), 8u);
  EXPECT_EQ(j["config"]["ci_methods"].size(), 2u);
  EXPECT_FALSE(j["summary"]["early_stop"].is_null());
  const int code = run("analyze --format text --out " + path("r.txt") + " " +
                       path("m.csv"))
                       .code;
  EXPECT_EQ(code, json.code);
  EXPECT_TRUE(fs::file_size(path("r.txt")) > 0);
  EXPECT_EQ(run("analyze --format yaml " + path("m.csv")).code, 2);
}

TEST_F(CliTest, EarlyStop) {
  write("c.csv", "counts,100,2\n50\n90\n");
  const CliRun stop = run("early-stop " + path("c.csv"));
  EXPECT_EQ(stop.code, 1);
  EXPECT_NE(stop.out.find("flagged t=1"), std::string::npos);
  EXPECT_EQ(run("early-stop --max-flag-fraction 0.5 " + path("c.csv")).code, 0);
  write("d.csv", "counts,100,2\n50\n52\n");
  EXPECT_EQ(run("early-stop " + path("d.csv")).code, 0);
}

TEST_F(CliTest, CurveSeries) {
  const CliRun r = run("curve --method normal --alpha 0.01 --n-values 165,166");
  EXPECT_EQ(r.code, 0);
  const auto lines = pufeval::detail::split_lines(r.out);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "N,width");
  const CliRun full = run("curve --sweep p --n 50 --method clopper_pearson");
  EXPECT_EQ(pufeval::detail::split_lines(full.out).size(), 102u);
  EXPECT_EQ(pufeval::detail::split_lines(run("curve").out).size(),
            pufeval::log_device_grid().size() + 1);
}

TEST_F(CliTest, Validate) {
  const CliRun r = run("validate --kind far --p 0.55 --n 680 --alpha 0.01 "
                    "--trials 20000 --seed 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("estimate="), std::string::npos);
  EXPECT_EQ(run("validate --kind far --trials 10 --seed 1").code, 2);
  EXPECT_EQ(run("validate --kind far").code, 2);
}

}  // namespace
