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
#include <numbers>

#include "oracles.hpp"
#include "se2ocp/errors.hpp"
#include "se2ocp/solver.hpp"

namespace se2ocp {
namespace {

ShootingProblem free_agent(const Pose& start, const Pose& goal, std::size_t N, double T) {
  PotentialParams p;
  p.sigma_pair = Eigen::MatrixXd::Zero(1, 1);
  p.sigma_obstacle = {0.0};
  p.rbar = 0.5;
  ShootingProblem prob;
  prob.sys = SystemDef::from_edges(1, {}, p);
  prob.starts = {start};
  prob.goals = {goal};
  prob.horizon = T;
  prob.steps = N;
  return prob;
}

ShootingProblem swap_problem() {
  PotentialParams p;
  p.sigma_pair = Eigen::MatrixXd::Zero(2, 2);
  p.sigma_pair(0, 1) = p.sigma_pair(1, 0) = 0.5;
  p.sigma_obstacle = {0.2, 0.2};
  p.rbar = 0.5;
  p.obstacle = Obstacle{{0.0, 0.0}, 0.5};
  ShootingProblem prob;
  prob.sys = SystemDef::from_edges(2, {{0, 1}}, p);
  prob.alpha0 = p.obstacle_alpha0();
  const double q = std::numbers::pi / 4;
  prob.starts = {Pose(q, -4, 0), Pose(-3 * q, 4, 0)};
  prob.goals = {Pose(-q, 4, 0), Pose(3 * q, -4, 0)};
  prob.horizon = 4.0;
  prob.steps = 40;
  return prob;
}

TEST(Layout, PackUnpackAgentMajor) {
  ShootingProblem prob = free_agent(Pose(), Pose(), 4, 1.0);
  prob.starts.push_back(Pose());
  prob.goals.push_back(Pose());
  Eigen::VectorXd U(24);
  for (int j = 0; j < 24; ++j) U[j] = j;
  const auto c = unpack_controls(U, prob);
  ASSERT_EQ(c.size(), 2u);
  // U[(i N + k) 3 + c]
  EXPECT_EQ(c[1][2], (AlgebraVec{18, 19, 20}));
  EXPECT_EQ(c[0][3].b2, 11);
  EXPECT_EQ(pack_controls(c), U);
  EXPECT_THROW(unpack_controls(Eigen::VectorXd(5), prob), std::invalid_argument);
}

TEST(Layout, ResidualCounts) {
  ShootingProblem prob = swap_problem();
  EXPECT_EQ(prob.unknowns(), 240u);
  EXPECT_EQ(prob.residuals(), 240u);
  prob.mode = ShootingMode::fixed_pose_and_velocity;
  EXPECT_EQ(prob.residuals(), 252u);
}

TEST(Solver, TranslationGeodesicIsRecoveredExactly) {
  const AlgebraVec u{0.0, 1.5, -0.5};
  const Pose start(0.3, 1.0, 2.0);
  Pose goal = start;
  for (int k = 0; k < 20; ++k) goal = goal * retract(RetractionKind::cayley, 0.1 * u);
  for (InitialGuessPolicy policy : {InitialGuessPolicy::geodesic, InitialGuessPolicy::zeros}) {
    SolverOptions opts;
    opts.initial_guess = policy;
    const SolveReport rep = solve_bvp(free_agent(start, goal, 20, 2.0), opts);
    ASSERT_TRUE(rep.converged) << rep.message;
    EXPECT_LE(rep.diagnostics.iterations, 5);
    for (const auto& v : rep.solution.agents[0].controls) EXPECT_LT(max_abs(v - u), 1e-9);
  }
}

TEST(Solver, RotationGeodesicIsRecoveredExactly) {
  const AlgebraVec u{0.8, 0.0, 0.0};
  const Pose start(0.0, -1.0, 0.5);
  Pose goal = start;
  for (int k = 0; k < 10; ++k) goal = goal * retract(RetractionKind::exponential, 0.2 * u);
  ShootingProblem prob = free_agent(start, goal, 10, 2.0);
  prob.kind = RetractionKind::exponential;
  SolverOptions opts;
  opts.initial_guess = InitialGuessPolicy::zeros;
  opts.tol = 1e-13;
  const SolveReport rep = solve_bvp(prob, opts);
  ASSERT_TRUE(rep.converged);
  EXPECT_LE(rep.diagnostics.iterations, 6);
  for (const auto& v : rep.solution.agents[0].controls) EXPECT_LT(max_abs(v - u), 1e-9);
}

TEST(Solver, TwoAgentSwapConvergesWithClearance) {
  const ShootingProblem prob = swap_problem();
  SolverOptions opts;
  opts.tol = 1e-10;
  const SolveReport rep = solve_bvp(prob, opts);
  ASSERT_TRUE(rep.converged) << rep.message;
  const Diagnostics& d = rep.diagnostics;
  EXPECT_LE(d.residual_inf, 1e-10);
  EXPECT_GT(d.min_pair_distance, 1.0);
  EXPECT_GT(d.min_obstacle_distance, 1.0);
  EXPECT_LE(global_residual(rep.controls, prob).lpNorm<Eigen::Infinity>(), 1e-10);
}

TEST(Solver, IsDeterministic) {
  const ShootingProblem prob = swap_problem();
  const SolveReport a = solve_bvp(prob);
  const SolveReport b = solve_bvp(prob);
  EXPECT_EQ(a.controls, b.controls);
  EXPECT_EQ(a.diagnostics.iterations, b.diagnostics.iterations);
}

TEST(Solver, IterationCapGivesUnconvergedReport) {
  SolverOptions opts;
  opts.max_outer_iters = 1;
  const SolveReport rep = solve_bvp(swap_problem(), opts);
  EXPECT_FALSE(rep.converged);
  EXPECT_EQ(rep.message, "iteration cap reached");
  EXPECT_EQ(rep.diagnostics.iterations, 1);
  EXPECT_EQ(rep.solution.steps, 40u);
}

TEST(Solver, InfeasibleInitialGuessThrowsWithStep) {
  ShootingProblem prob = swap_problem();
  prob.starts = {Pose(0, -4, 0)};
  prob.goals = {Pose(0, 4, 0)};
  PotentialParams p = prob.sys.params;
  p.sigma_pair = Eigen::MatrixXd::Zero(1, 1);
  p.sigma_obstacle = {0.2};
  p.obstacle->radius = 0.45;
  prob.sys = SystemDef::from_edges(1, {}, p);
  // The straight line enters the clearance disc of radius 0.95 between
  // x = -1 (step 15) and x = -0.8 (step 16).
  try {
    solve_bvp(prob);
    FAIL() << "expected SweepFailed";
  } catch (const SweepFailed& e) {
    EXPECT_EQ(e.step(), 16u);
  }
}

TEST(Solver, VelocityModeWithConsistentData) {
  const AlgebraVec u{0.0, 1.0, 0.25};
  const Pose start(0.1, 0.0, 0.0);
  Pose goal = start;
  for (int k = 0; k < 10; ++k) goal = goal * retract(RetractionKind::cayley, 0.1 * u);
  ShootingProblem prob = free_agent(start, goal, 10, 1.0);
  prob.mode = ShootingMode::fixed_pose_and_velocity;
  prob.start_velocity = {u};
  prob.end_velocity = {u};
  SolverOptions opts;
  opts.initial_guess = InitialGuessPolicy::zeros;
  const SolveReport rep = solve_bvp(prob, opts);
  ASSERT_TRUE(rep.converged) << rep.message;
  EXPECT_LT(rep.diagnostics.residual_inf, 1e-8);
  EXPECT_LT(rep.diagnostics.boundary_residual_inf, 1e-8);
}

TEST(Solver, VelocityModeIsLeastSquares) {
  // Over-determined: the prescribed velocities disagree with the geodesic,
  // so the residual cannot vanish but the normal equations are satisfied.
  const Pose start(0.0, 0.0, 0.0), goal(0.0, 2.0, 0.0);
  ShootingProblem prob = free_agent(start, goal, 10, 1.0);
  prob.mode = ShootingMode::fixed_pose_and_velocity;
  prob.start_velocity = {{0.0, 1.0, 0.0}};
  prob.end_velocity = {{0.0, 3.0, 0.0}};
  const SolveReport rep = solve_bvp(prob);
  ASSERT_TRUE(rep.converged) << rep.message;
  EXPECT_GT(rep.diagnostics.residual_inf, 1e-3);
}

TEST(Solver, OptionsAndNames) {
  SolverOptions bad;
  bad.tol = 0.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  EXPECT_EQ(parse_shooting_mode("fixed_pose_and_velocity"), ShootingMode::fixed_pose_and_velocity);
  EXPECT_THROW(parse_shooting_mode("free"), ParseError);
  EXPECT_EQ(to_string(InitialGuessPolicy::zeros), "zeros");
}

}  // namespace
}  // namespace se2ocp
