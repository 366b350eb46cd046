// Copyright 2026 The se2ocp Authors
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

// Drives the se2ocp executable end to end and checks its exit codes.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "se2ocp/solution_io.hpp"

namespace se2ocp {
namespace {

namespace fs = std::filesystem;

int run(const std::string& args) {
  const std::string cmd = std::string(SE2OCP_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string scenario(const std::string& name) {
  return std::string(SE2OCP_SCENARIOS) + "/" + name + ".json";
}

fs::path out_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("se2ocp_cli_" + name);
  fs::remove_all(d);
  return d;
}

TEST(Cli, SolveThenCheckBundledScenarios) {
  for (const char* name : {"single_obstacle", "two_agent_swap", "three_agent_line"}) {
    const fs::path d = out_dir(name);
    EXPECT_EQ(run("solve " + scenario(name) + " -o " + d.string() + " --quiet"), 0) << name;
    EXPECT_TRUE(fs::exists(d / "summary.json"));
    EXPECT_TRUE(fs::exists(d / "plot.dat"));
    EXPECT_EQ(run("check " + d.string()), 0) << name;
  }
}

TEST(Cli, CheckDetectsPerturbedControl) {
  const fs::path d = out_dir("tamper");
  ASSERT_EQ(run("solve " + scenario("two_agent_swap") + " -o " + d.string() + " -q"), 0);
  const fs::path csv = d / csv_file_name("left");
  std::vector<std::string> lines;
  {
    std::ifstream in(csv);
    for (std::string l; std::getline(in, l);) lines.push_back(l);
  }
  // Row 10 (step 9), column u2.
  std::string& line = lines[10];
  std::size_t start = 0;
  for (int c = 0; c < 5; ++c) start = line.find(',', start) + 1;
  const std::size_t end = line.find(',', start);
  const double u2 = parse_double(line.substr(start, end - start));
  line.replace(start, end - start, format_double(u2 + 1e-3));
  {
    std::ofstream out(csv, std::ios::trunc);
    for (const auto& l : lines) out << l << "\n";
  }
  EXPECT_EQ(run("check " + d.string()), 3);
  const std::string cmd = std::string(SE2OCP_CLI) + " check " + d.string() + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  std::string output;
  char buf[256];
  while (fgets(buf, sizeof buf, pipe)) output += buf;
  pclose(pipe);
  EXPECT_NE(output.find("check failed at step 9"), std::string::npos) << output;
}

TEST(Cli, SimulateAndCheck) {
  const fs::path d = out_dir("simulate");
  EXPECT_EQ(run("simulate " + scenario("single_obstacle") + " -o " + d.string() + " -q"), 0);
  EXPECT_EQ(run("check " + d.string() + " -q"), 0);
  // The swap scenario carries no initial velocities.
  EXPECT_EQ(run("simulate " + scenario("two_agent_swap") + " -o " + d.string()), 2);
}

TEST(Cli, FlagsOverrideScenario) {
  const fs::path d = out_dir("override");
  EXPECT_EQ(run("solve " + scenario("single_obstacle") + " -o " + d.string() +
                " --steps 12 --retraction exp --tol 1e-9 -q"),
            0);
  const SolutionRecord rec = read_solution(d);
  EXPECT_EQ(rec.scenario.steps, 12u);
  EXPECT_EQ(rec.scenario.retraction, RetractionKind::exponential);
  EXPECT_EQ(rec.agents[0].rows.size(), 13u);
  EXPECT_EQ(run("check " + d.string()), 0);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("solve " + scenario("two_agent_swap") + " -o /tmp/x --no-such-flag"), 2);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("solve " + scenario("two_agent_swap") + " -o /tmp/x --retraction euler"), 2);
  EXPECT_EQ(run("solve " + scenario("two_agent_swap") + " -o /tmp/x --mode fixed_pose_and_velocity"), 2);
  EXPECT_EQ(run("solve /nonexistent.json -o /tmp/x"), 4);
  EXPECT_EQ(run("check /nonexistent_dir"), 4);
  const fs::path d = out_dir("capped");
  const fs::path sc = fs::temp_directory_path() / "se2ocp_capped.json";
  {
    std::ifstream in(scenario("two_agent_swap"));
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    text.replace(text.find("\"max_outer_iters\": 100"), 22, "\"max_outer_iters\": 1");
    std::ofstream(sc) << text;
  }
  EXPECT_EQ(run("solve " + sc.string() + " -o " + d.string()), 3);
  EXPECT_EQ(run("check " + d.string()), 3);
}

TEST(Cli, SelftestPasses) {
  EXPECT_EQ(run("selftest --seed 3 --quiet"), 0);
  EXPECT_EQ(run("--help"), 0);
}

}  // namespace
}  // namespace se2ocp
