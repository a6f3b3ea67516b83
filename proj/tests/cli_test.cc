// Copyright 2026 The qnoise Authors
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
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qnoise/qfi_closed_form.hpp"

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun Cli(const std::string &args) {
  const std::string cmd = std::string(QNOISE_CLI_PATH) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE *p = popen(cmd.c_str(), "r");
  if (p == nullptr) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> Split(const std::string &line, char sep) {
  std::vector<std::string> f;
  std::stringstream ss(line);
  std::string x;
  while (std::getline(ss, x, sep)) f.push_back(x);
  return f;
}

// Value of `column` in the first data row of CSV output.
double CsvField(const std::string &csv, const std::string &column) {
  std::stringstream ss(csv);
  std::string header, row;
  std::getline(ss, header);
  std::getline(ss, row);
  const auto h = Split(header, ','), v = Split(row, ',');
  for (std::size_t i = 0; i < h.size() && i < v.size(); ++i) {
    if (h[i] == column) return std::stod(v[i]);
  }
  ADD_FAILURE() << "column " << column << " missing in\n" << csv;
  return 0.0;
}

std::string Slurp(const std::filesystem::path &p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::filesystem::path TempPath(const std::string &name) {
  return std::filesystem::temp_directory_path() / ("qnoise_cli_test_" + std::to_string(::getpid()) + "_" + name);
}

TEST(CliTest, VacuumQfi) {
  const CliRun r = Cli("qfi --source vacuum --nb 1");
  ASSERT_EQ(r.code, 0);
  EXPECT_DOUBLE_EQ(CsvField(r.out, "qfi"), 0.5);
}

TEST(CliTest, TmsvQfiMatchesClosedForm) {
  const CliRun r = Cli("qfi --source tmsv --G 10dB --kappa 0.6 --nb 1e-3");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(CsvField(r.out, "qfi") / qnoise::qfi_tmsv(2.025, 0.6, 1e-3).value, 1.0, 1e-15);
}

TEST(CliTest, BellAtUnitGain) {
  const CliRun r = Cli("fi --receiver bell --G 0dB --kappa 1 --nb 0.1");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(CsvField(r.out, "fi"), 1.0 / 1.21, 1e-15);
}

TEST(CliTest, PracticalVacuumHomodyneScanRate) {
  const CliRun r = Cli("scanrate --strategy vac-hom --engineering practical --gm-grid 2:2:1");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NEAR(CsvField(r.out, "vac-hom") / 3.71767e-24, 1.0, 1e-5);
}

TEST(CliTest, PracticalTmsvOptimumNearHalfGain) {
  const CliRun r = Cli("optimize --strategy tmsv-qfi --engineering practical --G 20dB");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NEAR(CsvField(r.out, "tmsv-qfi_gm_opt") / 50.0, 1.0, 0.1);
}

TEST(CliTest, ExitCodes) {
  EXPECT_EQ(Cli("qfi --source tmsv --kappa 2 --nb 0.5").code, 1);
  EXPECT_EQ(Cli("qfi --no-such-flag").code, 3);
  EXPECT_EQ(Cli("sample --model geometric --nb 0.1").code, 3);
  EXPECT_EQ(Cli("figure 99").code, 3);
}

TEST(CliTest, OracleCheckFailsAtTinyCutoff) {
  const CliRun r = Cli("oracle-check --cutoff 5 --two-mode-cutoff 5");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("tail"), std::string::npos);
}

TEST(CliTest, SampleIsReproducible) {
  const auto a = TempPath("a.csv"), b = TempPath("b.csv");
  const std::string args = "sample --seed 42 --model geometric --nb 0.1 --samples 2000 --replications 10 --out ";
  const CliRun ra = Cli(args + a.string()), rb = Cli(args + b.string());
  ASSERT_EQ(ra.code, 0);
  ASSERT_EQ(rb.code, 0);
  EXPECT_EQ(ra.out, rb.out);
  EXPECT_FALSE(Slurp(a).empty());
  EXPECT_EQ(Slurp(a), Slurp(b));
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST(CliTest, ThreadsDoNotChangeOutput) {
  const std::string args = "spectrum --strategy sv-qfi --strategy tmsv-null --omega-grid 0:3:7";
  EXPECT_EQ(Cli("--threads 1 " + args).out, Cli("--threads 3 " + args).out);
}

TEST(CliTest, ConfigFileAndOverride) {
  const std::string cfg = std::string(QNOISE_CONFIG_DIR) + "/optimized_scan_rate.toml";
  const CliRun base = Cli("--config " + cfg + " optimize --G-grid 0:10:2 --strategy vac-hom");
  ASSERT_EQ(base.code, 0) << base.out;
  EXPECT_NE(base.out.find("vac-hom"), std::string::npos);
  EXPECT_EQ(base.out.find("tmsv-qfi"), std::string::npos);
  EXPECT_EQ(Cli("--config /nonexistent/x.toml qfi").code, 3);
}

TEST(CliTest, DistributedCheckPasses) {
  const CliRun r = Cli("distributed-check --M 2 --M 3 --states 3");
  EXPECT_EQ(r.code, 0) << r.out;
}

}  // namespace
