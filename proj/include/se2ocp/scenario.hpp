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

// Scenario description, JSON ingestion and validation.
//
// Schema (all lengths in the same unit, angles in radians):
//
//   {
//     "name": "two_agent_swap",
//     "horizon": 4.0, "steps": 40,
//     "retraction": "cayley" | "exp",
//     "mode": "fixed_pose" | "fixed_pose_and_velocity",
//     "rbar": 0.5,
//     "obstacle": {"center": [0, 0], "radius": 0.5} | null,
//     "agents": [{"id": "a", "start": {"theta": 0, "x": 0, "y": 0},
//                 "goal": {...}, "sigma_obstacle": 0.2,
//                 "start_velocity": [u1, u2, u3], "end_velocity": [...],
//                 "lambda3": 0.0}],
//     "edges": [{"between": ["a", "b"], "sigma": 0.5}],
//     "solver": {"tol": 1e-8, "max_outer_iters": 200, "fd_step": 1e-7,
//                "initial_guess": "geodesic" | "zeros"}
//   }
//
// Only "agents", "horizon", "steps" and "rbar" are required. Agent ids are
// restricted to [A-Za-z0-9_-] because they name the output files.

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "se2ocp/algebra.hpp"
#include "se2ocp/continuous.hpp"
#include "se2ocp/errors.hpp"
#include "se2ocp/potentials.hpp"
#include "se2ocp/retraction.hpp"
#include "se2ocp/solver.hpp"
#include "se2ocp/system.hpp"

namespace se2ocp {

struct AgentSpec {
  std::string id;
  Pose start;
  Pose goal;
  double sigma_obstacle = 0.0;
  std::optional<AlgebraVec> start_velocity;
  std::optional<AlgebraVec> end_velocity;
  std::optional<double> lambda3;
};

struct EdgeSpec {
  std::string first;
  std::string second;
  double sigma = 0.0;
};

struct Scenario {
  std::string name;
  std::vector<AgentSpec> agents;
  std::vector<EdgeSpec> edges;
  double rbar = 1.0;
  std::optional<Obstacle> obstacle;
  double horizon = 1.0;
  std::size_t steps = 1;
  RetractionKind retraction = RetractionKind::cayley;
  ShootingMode mode = ShootingMode::fixed_pose;
  SolverOptions solver;

  /// Index of an agent id, or nullopt.
  std::optional<std::size_t> index_of(std::string_view id) const;

  /// Collects every violated invariant; empty when the scenario is valid.
  std::vector<ValidationIssue> issues() const;
  /// Throws ValidationError listing all issues.
  void validate() const;

  /// The following require a valid scenario.
  SystemDef system() const;
  AlgebraVec alpha0() const;
  ShootingProblem problem() const;
  /// Initial state of the split continuous system; throws ValidationError
  /// (code missing_initial_state) unless every agent has start_velocity with
  /// u3 = 0 and lambda3.
  ContinuousState initial_state() const;
};

/// Parses and validates. Throws ParseError (with line or field path) or
/// ValidationError.
Scenario parse_scenario(std::string_view text);
/// Parses without validating.
Scenario parse_scenario_unchecked(std::string_view text);
/// Throws IOError when the file cannot be read.
Scenario load_scenario(const std::filesystem::path& path);

/// Pretty-printed JSON that parses back to an identical scenario.
std::string scenario_to_json(const Scenario& scenario);

}  // namespace se2ocp
