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

// Independent oracles shared by the unit and acceptance tests. Everything
// here is computed from the 3x3 homogeneous-matrix embedding of SE(2) or by
// brute-force integration, never through the library's coordinate formulas.

#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "se2ocp/algebra.hpp"
#include "se2ocp/continuous.hpp"
#include "se2ocp/potentials.hpp"
#include "se2ocp/retraction.hpp"
#include "se2ocp/system.hpp"

namespace se2ocp::testing {

inline Eigen::Matrix3d hat_oracle(const AlgebraVec& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v.a, v.b1,
       v.a, 0.0, v.b2,
       0.0, 0.0, 0.0;
  return m;
}

inline AlgebraVec vee_oracle(const Eigen::Matrix3d& m) { return {m(1, 0), m(0, 2), m(1, 2)}; }

inline Eigen::Matrix3d pose_matrix(const Pose& g) {
  Eigen::Matrix3d m;
  m << std::cos(g.theta()), -std::sin(g.theta()), g.x(),
       std::sin(g.theta()), std::cos(g.theta()), g.y(),
       0.0, 0.0, 1.0;
  return m;
}

inline Pose pose_from_matrix(const Eigen::Matrix3d& m) {
  return Pose(std::atan2(m(1, 0), m(0, 0)), m(0, 2), m(1, 2));
}

inline double pose_distance(const Pose& a, const Pose& b) {
  return (pose_matrix(a) - pose_matrix(b)).cwiseAbs().maxCoeff();
}

inline Eigen::Matrix3d cayley_oracle(const AlgebraVec& v) {
  const Eigen::Matrix3d I = Eigen::Matrix3d::Identity();
  const Eigen::Matrix3d V = hat_oracle(v);
  return (I - 0.5 * V).inverse() * (I + 0.5 * V);
}

inline Eigen::Matrix3d exp_oracle(const AlgebraVec& v) { return hat_oracle(v).exp(); }

inline Eigen::Matrix3d retract_oracle(RetractionKind kind, const AlgebraVec& v) {
  return kind == RetractionKind::cayley ? cayley_oracle(v) : exp_oracle(v);
}

/// Right-trivialized tangent of the retraction by central differences:
/// column c is vee((d/de R(v + e e_c)) R(v)^-1).
inline Eigen::Matrix3d dretract_fd(RetractionKind kind, const AlgebraVec& v, double e = 1e-6) {
  Eigen::Matrix3d D;
  const Eigen::Matrix3d inv = retract_oracle(kind, v).inverse();
  for (int c = 0; c < 3; ++c) {
    const AlgebraVec dv = AlgebraVec::from(e * Eigen::Vector3d::Unit(c));
    const Eigen::Matrix3d diff = retract_oracle(kind, v + dv) - retract_oracle(kind, v - dv);
    D.col(c) = vee_oracle(diff * inv / (2.0 * e)).vec();
  }
  return D;
}

/// d/de f(g exp(e xi)) at e = 0 for each basis direction, by central
/// differences on the matrix exponential.
template <typename F>
Eigen::Vector3d left_gradient_fd(const Pose& g, F&& f, double e = 1e-6) {
  Eigen::Vector3d out;
  for (int c = 0; c < 3; ++c) {
    const AlgebraVec xi = AlgebraVec::from(e * Eigen::Vector3d::Unit(c));
    const Pose gp = pose_from_matrix(pose_matrix(g) * exp_oracle(xi));
    const Pose gm = pose_from_matrix(pose_matrix(g) * exp_oracle(-xi));
    out[c] = (f(gp) - f(gm)) / (2.0 * e);
  }
  return out;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<>(lo, hi)(gen_); }
  AlgebraVec vec(double r) { return {uniform(-r, r), uniform(-r, r), uniform(-r, r)}; }
  CoAlgebraVec covec(double r) { return {uniform(-r, r), uniform(-r, r), uniform(-r, r)}; }
  Pose pose(double r) {
    return Pose(uniform(-std::numbers::pi, std::numbers::pi), uniform(-r, r), uniform(-r, r));
  }
  /// Vector with Euclidean norm at most r.
  AlgebraVec ball(double r) {
    AlgebraVec v;
    do {
      v = vec(r);
    } while (v.vec().norm() > r);
    return v;
  }

 private:
  std::mt19937_64 gen_;
};

/// Single fully actuated agent with one obstacle, the setting of the
/// discrete-versus-continuous comparison.
inline SystemDef single_agent_system(double sigma, double rbar, const Obstacle& obstacle) {
  PotentialParams p;
  p.sigma_pair = Eigen::MatrixXd::Zero(1, 1);
  p.sigma_obstacle = {sigma};
  p.rbar = rbar;
  p.obstacle = obstacle;
  return SystemDef::from_edges(1, {}, std::move(p));
}

/// Continuous reference for the boundary-value problem of one fully
/// actuated agent: Newton shooting on u(0) with RK4 over M steps. Returns
/// the control samples u(t_m), m = 0..M.
inline std::vector<AlgebraVec> continuous_reference(const SystemDef& sys, const Pose& start,
                                                    const Pose& goal, double T, std::size_t M,
                                                    AlgebraVec u0, int max_iters = 30) {
  const AlgebraVec a0 = sys.params.obstacle_alpha0();
  auto shoot = [&](const AlgebraVec& u) {
    FullContinuousState s{{start, u, reduced_alpha(start, a0)}};
    return simulate_ivp_full(s, sys, T, M);
  };
  auto residual = [&](const AlgebraVec& u) {
    const auto traj = shoot(u);
    const Eigen::Matrix3d gap =
        pose_matrix(traj.states.back()[0].g).inverse() * pose_matrix(goal);
    return vee_oracle(gap.log()).vec();
  };
  for (int it = 0; it < max_iters; ++it) {
    const Eigen::Vector3d r = residual(u0);
    if (r.lpNorm<Eigen::Infinity>() < 1e-12) break;
    Eigen::Matrix3d J;
    const double e = 1e-7;
    for (int c = 0; c < 3; ++c) {
      const AlgebraVec d = AlgebraVec::from(e * Eigen::Vector3d::Unit(c));
      J.col(c) = (residual(u0 + d) - residual(u0 - d)) / (2.0 * e);
    }
    u0 = u0 + AlgebraVec::from(J.partialPivLu().solve(-r));
  }
  const auto traj = shoot(u0);
  std::vector<AlgebraVec> out;
  for (const auto& s : traj.states) out.push_back(s[0].u);
  return out;
}

}  // namespace se2ocp::testing
