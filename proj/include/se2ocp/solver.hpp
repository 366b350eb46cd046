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

// Shooting solver for the discrete two-point boundary-value problem.
//
// The unknowns are every control coordinate, laid out agent-major:
// U[(i N + k) 3 + c] = c-th coordinate of u_i^k. Per agent the residual stacks
// the interior momentum relations for k = 1..N-1 followed by the endpoint
// residual R^{-1}((g^N)^{-1} g_T), so fixed-pose mode is a square system of
// size 3 s N. Fixed-pose-and-velocity mode appends both boundary momentum
// relations per agent and is solved in the least-squares sense.

#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "se2ocp/discrete.hpp"
#include "se2ocp/system.hpp"

namespace se2ocp {

enum class ShootingMode { fixed_pose, fixed_pose_and_velocity };
enum class InitialGuessPolicy { geodesic, zeros };

std::string_view to_string(ShootingMode mode);
ShootingMode parse_shooting_mode(std::string_view name);
std::string_view to_string(InitialGuessPolicy policy);
InitialGuessPolicy parse_initial_guess(std::string_view name);

struct SolverOptions {
  double tol = 1e-8;
  int max_outer_iters = 200;
  double fd_step = 1e-7;
  double backtrack = 0.5;
  double min_step = 1e-6;
  InitialGuessPolicy initial_guess = InitialGuessPolicy::geodesic;

  /// Throws std::invalid_argument for non-positive tolerances or caps.
  void validate() const;
};

struct ShootingProblem {
  SystemDef sys;
  std::vector<Pose> starts;
  std::vector<Pose> goals;
  AlgebraVec alpha0{1.0, 0.0, 0.0};
  double horizon = 1.0;
  std::size_t steps = 1;
  RetractionKind kind = RetractionKind::cayley;
  ShootingMode mode = ShootingMode::fixed_pose;
  std::vector<AlgebraVec> start_velocity;  // fixed_pose_and_velocity only
  std::vector<AlgebraVec> end_velocity;

  std::size_t agents() const { return starts.size(); }
  double h() const { return horizon / static_cast<double>(steps); }
  std::size_t unknowns() const { return 3 * agents() * steps; }
  std::size_t residuals() const;
};

std::vector<ControlSequence> unpack_controls(const Eigen::VectorXd& U,
                                             const ShootingProblem& prob);
Eigen::VectorXd pack_controls(const std::vector<ControlSequence>& controls);

/// Stacked residual for the control vector U. Throws SweepFailed with the
/// step index when the induced configuration hits a potential pole (or the
/// endpoint lands on the retraction pole, reported as step N).
Eigen::VectorXd global_residual(const Eigen::VectorXd& U, const ShootingProblem& prob);

/// Geodesic policy: per agent u = R^{-1}((g^0)^{-1} g_T) / T for every step.
/// Throws OutOfDomain when a heading gap is pi.
Eigen::VectorXd initial_guess(const ShootingProblem& prob, InitialGuessPolicy policy);

struct Diagnostics {
  int iterations = 0;
  double residual_inf = 0.0;
  double residual_norm = 0.0;
  double shooting_residual_inf = 0.0;  // interior + endpoint blocks
  double boundary_residual_inf = 0.0;  // velocity blocks, 0 in fixed-pose mode
  double min_pair_distance = 0.0;
  double min_obstacle_distance = 0.0;
  double cost = 0.0;
  double wall_time_s = 0.0;
};

struct SolveReport {
  bool converged = false;
  std::string message;
  Eigen::VectorXd controls;
  DiscreteSolution solution;
  Diagnostics diagnostics;
};

/// Damped Newton (fixed pose, dense LU) or Gauss-Newton (with velocities,
/// dense QR) with backtracking on |residual|_2. A trial step that hits a
/// potential pole counts as infinite merit. Returns the best iterate with
/// converged = false when the caps are hit; throws SweepFailed if the initial
/// guess itself is infeasible.
SolveReport solve_bvp(const ShootingProblem& prob, const SolverOptions& opts = {});

/// Fills the distance, residual and cost fields of a diagnostics record.
Diagnostics evaluate_diagnostics(const Eigen::VectorXd& U, const ShootingProblem& prob);

}  // namespace se2ocp
