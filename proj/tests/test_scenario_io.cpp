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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "json.hpp"
#include "se2ocp/errors.hpp"
#include "se2ocp/scenario.hpp"
#include "se2ocp/solution_io.hpp"

namespace se2ocp {
namespace {

namespace fs = std::filesystem;

constexpr const char* kMinimal = R"({
  "horizon": 2.0,
  "steps": 10,
  "rbar": 0.5,
  "agents": [
    {"id": "a", "start": {"theta": 0, "x": -2, "y": -1}, "goal": {"theta": 0, "x": 2, "y": -1}},
    {"id": "b", "start": {"theta": 0, "x": 2, "y": 1}, "goal": {"theta": 0, "x": -2, "y": 1}}
  ],
  "edges": [{"between": ["a", "b"], "sigma": 0.1}]
})";

nlohmann::json minimal() { return nlohmann::json::parse(kMinimal); }

ValidationError expect_invalid(const nlohmann::json& j) {
  try {
    parse_scenario(j.dump());
  } catch (const ValidationError& e) {
    return e;
  }
  ADD_FAILURE() << "expected ValidationError";
  return ValidationError({});
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("se2ocp_io_" + name);
  fs::remove_all(d);
  return d;
}

TEST(Scenario, MinimalTwoAgentFile) {
  const Scenario sc = parse_scenario(kMinimal);
  EXPECT_EQ(sc.agents.size(), 2u);
  EXPECT_EQ(sc.edges.size(), 1u);
  EXPECT_EQ(sc.retraction, RetractionKind::cayley);
  EXPECT_EQ(sc.mode, ShootingMode::fixed_pose);
  EXPECT_FALSE(sc.obstacle.has_value());
  EXPECT_EQ(sc.problem().unknowns(), 60u);
}

TEST(Scenario, DisconnectedGraphIsNamed) {
  auto j = minimal();
  j["edges"] = nlohmann::json::array();
  EXPECT_TRUE(expect_invalid(j).has("graph_disconnected"));
}

TEST(Scenario, StartCollisionNamesPairAndDistance) {
  auto j = minimal();
  j["agents"][1]["start"]["x"] = -2.0;
  j["agents"][1]["start"]["y"] = -0.4;  // 0.6 from agent a, need > 1
  const ValidationError e = expect_invalid(j);
  ASSERT_TRUE(e.has("start_collision"));
  const std::string msg = e.what();
  EXPECT_NE(msg.find("'a' and 'b'"), std::string::npos) << msg;
  EXPECT_NE(msg.find("0.6 apart"), std::string::npos) << msg;
}

TEST(Scenario, CollectsEveryIssue) {
  auto j = minimal();
  j["steps"] = 0;
  j["horizon"] = -1.0;
  j["rbar"] = 0.0;
  j["agents"][1]["id"] = "a";
  j["agents"][0]["sigma_obstacle"] = -1.0;
  j["edges"].push_back({{"between", {"a", "zz"}}, {"sigma", 1.0}});
  const ValidationError e = expect_invalid(j);
  for (const char* code : {"bad_steps", "bad_horizon", "rbar_nonpositive", "duplicate_id",
                           "negative_gain", "unknown_agent"}) {
    EXPECT_TRUE(e.has(code)) << code;
  }
}

TEST(Scenario, ObstacleFeasibility) {
  auto j = minimal();
  j["obstacle"] = {{"center", {-2.0, 0.0}}, {"radius", 0.6}};
  const ValidationError e = expect_invalid(j);
  EXPECT_TRUE(e.has("start_in_obstacle"));
  EXPECT_TRUE(e.has("goal_in_obstacle"));
  EXPECT_EQ(e.issues().size(), 2u);
}

TEST(Scenario, VelocityModeNeedsVelocities) {
  auto j = minimal();
  j["mode"] = "fixed_pose_and_velocity";
  EXPECT_TRUE(expect_invalid(j).has("missing_velocity"));
  j["agents"][0]["start_velocity"] = {0, 1, 0};
  j["agents"][0]["end_velocity"] = {0, 1, 0};
  j["agents"][1]["start_velocity"] = {0, 1, 0};
  j["agents"][1]["end_velocity"] = {0, 1, 0};
  EXPECT_NO_THROW(parse_scenario(j.dump()));
}

TEST(Scenario, SimulationNeedsInitialState) {
  Scenario sc = parse_scenario(kMinimal);
  try {
    sc.initial_state();
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_TRUE(e.has("missing_initial_state"));
  }
  for (auto& a : sc.agents) {
    a.start_velocity = AlgebraVec{0.1, 1.0, 0.0};
    a.lambda3 = 0.5;
  }
  EXPECT_EQ(sc.initial_state().size(), 2u);
}

TEST(Scenario, MalformedJsonReportsLine) {
  try {
    parse_scenario("{\n  \"horizon\": 1,\n  \"steps\": ,\n}");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Scenario, WrongTypeReportsFieldPath) {
  auto j = minimal();
  j["agents"][1]["goal"]["x"] = "far";
  try {
    parse_scenario(j.dump());
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("agents[1].goal.x"), std::string::npos) << e.what();
  }
  j = minimal();
  j["retraction"] = "euler";
  EXPECT_THROW(parse_scenario(j.dump()), ParseError);
  j = minimal();
  j["horizonn"] = 3;
  EXPECT_THROW(parse_scenario(j.dump()), ParseError);
  j = minimal();
  j.erase("steps");
  EXPECT_THROW(parse_scenario(j.dump()), ParseError);
}

TEST(Scenario, JsonRoundTrip) {
  auto j = minimal();
  j["obstacle"] = {{"center", {0.1, 0.3}}, {"radius", 0.1}};
  j["agents"][0]["start_velocity"] = {0.1, 0.2, 0.3};
  j["agents"][0]["lambda3"] = -0.7;
  j["solver"] = {{"tol", 1e-9}, {"initial_guess", "zeros"}};
  j["retraction"] = "exp";
  const Scenario a = parse_scenario(j.dump());
  const std::string text = scenario_to_json(a);
  const Scenario b = parse_scenario(text);
  EXPECT_EQ(scenario_to_json(b), text);
  EXPECT_EQ(b.solver.initial_guess, InitialGuessPolicy::zeros);
  EXPECT_EQ(b.solver.tol, 1e-9);
  EXPECT_EQ(*b.agents[0].lambda3, -0.7);
}

TEST(Scenario, MissingFileIsIOError) {
  EXPECT_THROW(load_scenario("/nonexistent/scenario.json"), IOError);
}

TEST(Doubles, PrintParseIsBitExact) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::uint64_t> bits;
  int checked = 0;
  while (checked < 20000) {
    const std::uint64_t b = bits(rng);
    double v;
    std::memcpy(&v, &b, sizeof v);
    if (!std::isfinite(v)) continue;
    const double back = parse_double(format_double(v));
    EXPECT_EQ(std::memcmp(&v, &back, sizeof v), 0) << format_double(v);
    ++checked;
  }
  for (double v : {0.0, -0.0, 0.1, 1e-310, std::numeric_limits<double>::max(), -1.0 / 3.0}) {
    const double back = parse_double(format_double(v));
    EXPECT_EQ(std::memcmp(&v, &back, sizeof v), 0);
  }
  EXPECT_THROW(parse_double("1.0x"), IOError);
  EXPECT_THROW(parse_double(""), IOError);
}

class SolutionFiles : public ::testing::Test {
 protected:
  static SolutionRecord solved(std::size_t steps) {
    Scenario sc = parse_scenario(kMinimal);
    sc.steps = steps;
    sc.solver.tol = 1e-11;
    const SolveReport rep = solve_bvp(sc.problem(), sc.solver);
    EXPECT_TRUE(rep.converged);
    return make_record(sc, rep);
  }
};

TEST_F(SolutionFiles, SingleStepHasTwoRowsPerAgent) {
  const fs::path dir = fresh_dir("n1");
  write_solution(solved(1), dir);
  for (const char* id : {"a", "b"}) {
    std::ifstream in(dir / csv_file_name(id));
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, kCsvHeader);
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 2);
  }
  for (const auto& entry : fs::directory_iterator(dir)) {
    EXPECT_NE(entry.path().extension(), ".tmp");
  }
}

TEST_F(SolutionFiles, ReplayFromCsvMatchesStoredPoses) {
  const fs::path dir = fresh_dir("replay");
  const SolutionRecord rec = solved(12);
  write_solution(rec, dir);
  const SolutionRecord back = read_solution(dir);
  const double h = back.scenario.horizon / static_cast<double>(back.scenario.steps);
  for (const auto& s : back.agents) {
    ASSERT_EQ(s.rows.size(), 13u);
    for (std::size_t k = 0; k + 1 < s.rows.size(); ++k) {
      const Pose next = s.rows[k].g * retract(back.scenario.retraction, h * s.rows[k].u);
      EXPECT_NEAR(next.x(), s.rows[k + 1].g.x(), 1e-12);
      EXPECT_NEAR(next.y(), s.rows[k + 1].g.y(), 1e-12);
      EXPECT_NEAR(wrap_angle(next.theta() - s.rows[k + 1].g.theta()), 0.0, 1e-12);
    }
  }
  // Lossless: every stored value is bit-identical to the in-memory record.
  for (std::size_t i = 0; i < rec.agents.size(); ++i) {
    for (std::size_t k = 0; k < rec.agents[i].rows.size(); ++k) {
      EXPECT_EQ(back.agents[i].rows[k].u, rec.agents[i].rows[k].u);
      EXPECT_EQ(back.agents[i].rows[k].g, rec.agents[i].rows[k].g);
    }
  }
}

TEST_F(SolutionFiles, SummaryCarriesDiagnostics) {
  const fs::path dir = fresh_dir("summary");
  const SolutionRecord rec = solved(10);
  write_solution(rec, dir);
  std::ifstream in(dir / "summary.json");
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["kind"], "discrete_bvp");
  EXPECT_TRUE(j["converged"].get<bool>());
  EXPECT_GT(j["diagnostics"]["min_pair_distance"].get<double>(), 2 * 0.5);
  EXPECT_TRUE(j["diagnostics"]["min_obstacle_distance"].is_null());
  EXPECT_EQ(j["diagnostics"]["cost"].get<double>(), rec.diagnostics.cost);
}

TEST_F(SolutionFiles, PlotFileHasOneBlockPerAgent) {
  const fs::path dir = fresh_dir("plot");
  write_solution(solved(4), dir);
  std::ifstream in(dir / "plot.dat");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  EXPECT_NE(text.find("# agent a\n"), std::string::npos);
  EXPECT_NE(text.find("\n\n\n# agent b\n"), std::string::npos);
  std::istringstream lines(text);
  std::string line;
  int data = 0;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    int n = 0;
    std::string f;
    while (fields >> f) ++n;
    EXPECT_EQ(n, 13);
    ++data;
  }
  EXPECT_EQ(data, 10);
}

TEST_F(SolutionFiles, CheckPassesAndLocatesTampering) {
  const SolutionRecord rec = solved(10);
  EXPECT_TRUE(check_solution(rec).ok());
  for (std::size_t k = 0; k <= 10; ++k) {
    for (int c = 0; c < 3; ++c) {
      SolutionRecord bad = rec;
      AlgebraVec& u = bad.agents[1].rows[k].u;
      u = u + AlgebraVec::from(1e-3 * Eigen::Vector3d::Unit(c));
      const CheckReport r = check_solution(bad);
      ASSERT_FALSE(r.ok()) << "k=" << k << " c=" << c;
      EXPECT_EQ(*r.first_failing_step(), k);
    }
  }
}

TEST_F(SolutionFiles, CheckRejectsShortSeries) {
  SolutionRecord rec = solved(5);
  rec.agents[0].rows.pop_back();
  EXPECT_FALSE(check_solution(rec).ok());
}

TEST_F(SolutionFiles, ContinuousRecordPassesCheck) {
  Scenario sc = parse_scenario(kMinimal);
  for (auto& a : sc.agents) {
    a.start_velocity = AlgebraVec{0.0, 0.5, 0.0};
    a.lambda3 = 0.1;
  }
  sc.agents[1].start = Pose(std::numbers::pi, 2, 1);
  const auto traj = simulate_ivp(sc.initial_state(), sc.system(), sc.horizon, sc.steps);
  const SolutionRecord rec = make_record(sc, traj, 0.0);
  const fs::path dir = fresh_dir("continuous");
  write_solution(rec, dir);
  const SolutionRecord back = read_solution(dir);
  EXPECT_EQ(back.kind, SolutionKind::continuous_ivp);
  EXPECT_TRUE(check_solution(back).ok());
  SolutionRecord bad = back;
  bad.agents[0].rows[4].u.a += 1e-3;
  bad.agents[0].rows[4].mu.m1 += 1e-3;
  EXPECT_EQ(*check_solution(bad).first_failing_step(), 4u);
}

TEST(SolutionIo, WriteFailureIsIOError) {
  const fs::path file = fresh_dir("blocker");
  std::ofstream(file) << "x";
  EXPECT_THROW(write_solution(SolutionRecord{}, file / "sub"), IOError);
  EXPECT_THROW(read_solution(fresh_dir("missing")), IOError);
}

}  // namespace
}  // namespace se2ocp
