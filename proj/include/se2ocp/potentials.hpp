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

// Collision and obstacle avoidance potentials with their left-trivialized
// gradients.
//
//   V_ij = sigma_ij / (2 (|r_i - r_j|^2 - 4 rbar^2))
//   V_i0 = sigma_i0 / (2 (|Ad_{g^-1} alpha0|^2 - c)),  c = 2 + (rbar + rho)^2
//
// where alpha0 = (1, J x0) encodes an obstacle of radius rho centred at x0,
// so that |Ad_{g^-1} alpha0|^2 = 2 + |r - x0|^2.

#pragma once

#include <Eigen/Core>

#include <optional>
#include <vector>

#include "se2ocp/algebra.hpp"
#include "se2ocp/retraction.hpp"

namespace se2ocp {

/// Evolved obstacle parameter alpha_i = Ad_{g_i^-1} alpha0.
using AlphaState = AlgebraVec;

struct Obstacle {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 1.0;
};

struct PotentialParams {
  Eigen::MatrixXd sigma_pair;         // symmetric, zero diagonal, >= 0
  std::vector<double> sigma_obstacle;  // one gain per agent
  double rbar = 1.0;
  std::optional<Obstacle> obstacle;

  std::size_t agents() const { return sigma_obstacle.size(); }
  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;
  /// Constant c in the extended potential denominator.
  double obstacle_threshold() const;
  /// alpha0 = (1, J x0) for the configured obstacle.
  AlgebraVec obstacle_alpha0() const;
};

double obstacle_threshold(double rbar, double obstacle_radius);
AlgebraVec obstacle_alpha0(const Eigen::Vector2d& center);

/// Throws InfeasibleConfiguration when |r_i - r_j| <= 2 rbar.
double pair_potential(const Pose& gi, const Pose& gj, double sigma, double rbar);

/// T*_e L_{g_i}(dV_ij/dg_i): zero e^1 slot, world gradient rotated into the
/// body frame of agent i in the e^2, e^3 slots.
CoAlgebraVec pair_force(const Pose& gi, const Pose& gj, double sigma, double rbar);

/// sigma / (2 (trace_norm_sq(alpha) - threshold)). Throws
/// InfeasibleConfiguration when trace_norm_sq(alpha) <= threshold.
double extended_obstacle_potential(const AlphaState& alpha, double sigma, double threshold);

/// dV/dalpha as a dual vector: -sigma (2 a1, a2, a3) / D^2.
CoAlgebraVec extended_potential_gradient(const AlphaState& alpha, double sigma,
                                         double threshold);

/// J_V(dV/dalpha, alpha) = sigma a1 / D^2 * (0, -a3, a2).
CoAlgebraVec obstacle_force(const AlphaState& alpha, double sigma, double threshold);

/// The unextended obstacle potential evaluated directly on a pose.
double obstacle_potential(const Pose& g, double sigma, double rbar, const Obstacle& obstacle);

/// Ad_{g^-1} alpha0, the parameter seen from the body frame of g.
inline AlphaState reduced_alpha(const Pose& g, const AlgebraVec& alpha0) {
  return adjoint(inverse(g), alpha0);
}

/// alpha' = -ad_u alpha.
AlgebraVec evolve_alpha_continuous(const AlphaState& alpha, const AlgebraVec& u);

/// Ad_{R(h u)^-1} alpha.
AlphaState evolve_alpha_discrete(const AlphaState& alpha, const AlgebraVec& u, double h,
                                 RetractionKind kind);

}  // namespace se2ocp
