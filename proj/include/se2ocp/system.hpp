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

#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "se2ocp/algebra.hpp"
#include "se2ocp/potentials.hpp"

namespace se2ocp {

/// Interaction graph plus potential parameters shared by the continuous and
/// discrete optimality conditions.
struct SystemDef {
  std::vector<std::vector<std::size_t>> neighbors;
  PotentialParams params;

  /// Builds neighbor sets from an undirected edge list.
  static SystemDef from_edges(std::size_t agents,
                              const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                              PotentialParams params);

  std::size_t agents() const { return neighbors.size(); }
  bool connected() const;
  /// Throws std::invalid_argument if the graph is not undirected and
  /// connected or the potential parameters are invalid.
  void validate() const;
};

/// Theta_1^i: agent 0 carries the reduced frame and feels no pair forces.
inline double pair_force_weight(std::size_t agent) { return agent == 0 ? 0.0 : 1.0; }

/// C(u) = 1/2 (a^2 + b1^2 + b2^2) in coordinates.
inline double control_cost(const AlgebraVec& u) {
  return 0.5 * (u.a * u.a + u.b1 * u.b1 + u.b2 * u.b2);
}
/// dC/du, the identity on coordinates.
inline CoAlgebraVec cost_gradient(const AlgebraVec& u) { return {u.a, u.b1, u.b2}; }

/// J_V(dV_i0/dalpha, alpha_i) + Theta_1^i sum_{j in N_i} T*L_{g_i}(dV_ij/dg_i).
/// Throws InfeasibleConfiguration at a potential pole.
CoAlgebraVec potential_force(std::size_t agent, std::span<const Pose> poses,
                             const AlphaState& alpha, const SystemDef& sys);

/// Smallest centre distance between any two agents; +inf for one agent.
double min_pair_distance(std::span<const Pose> poses);
/// Smallest centre distance from an agent to the obstacle centre.
double min_obstacle_distance(std::span<const Pose> poses, const Obstacle& obstacle);

}  // namespace se2ocp
