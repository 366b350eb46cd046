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

#include "selftest.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "se2ocp/algebra.hpp"
#include "se2ocp/continuous.hpp"
#include "se2ocp/discrete.hpp"
#include "se2ocp/potentials.hpp"
#include "se2ocp/retraction.hpp"
#include "se2ocp/system.hpp"

namespace se2ocp::tools {

namespace {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<>(lo, hi)(rng_); }
  AlgebraVec vec(double r) { return {uniform(-r, r), uniform(-r, r), uniform(-r, r)}; }
  CoAlgebraVec covec(double r) { return {uniform(-r, r), uniform(-r, r), uniform(-r, r)}; }
  Pose pose(double r) {
    return Pose(uniform(-std::numbers::pi, std::numbers::pi), uniform(-r, r), uniform(-r, r));
  }

 private:
  std::mt19937_64 rng_;
};

double pose_gap(const Pose& a, const Pose& b) {
  return std::max({std::abs(wrap_angle(a.theta() - b.theta())), std::abs(a.x() - b.x()),
                   std::abs(a.y() - b.y())});
}

}  // namespace

std::vector<PropertyResult> run_selftest(std::uint64_t seed) {
  Sampler s(seed);
  std::vector<PropertyResult> out;
  constexpr int kSamples = 1000;

  {
    PropertyResult duality{"algebra: <ad*_xi mu, eta> = <mu, [xi, eta]>", 0.0, 1e-12};
    PropertyResult jacobi{"algebra: Jacobi identity", 0.0, 1e-12};
    PropertyResult homo{"algebra: Ad_{gh} = Ad_g Ad_h", 0.0, 1e-12};
    for (int n = 0; n < kSamples; ++n) {
      const AlgebraVec x = s.vec(1), y = s.vec(1), z = s.vec(1);
      const CoAlgebraVec mu = s.covec(1);
      duality.max_error = std::max(
          duality.max_error, std::abs(pair(coadjoint_star(x, mu), y) - pair(mu, bracket(x, y))));
      const AlgebraVec j = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) +
                           bracket(z, bracket(x, y));
      jacobi.max_error = std::max(jacobi.max_error, max_abs(j));
      const Pose g = s.pose(1), h = s.pose(1);
      homo.max_error =
          std::max(homo.max_error, max_abs(adjoint(g * h, x) - adjoint(g, adjoint(h, x))));
    }
    out.push_back(duality);
    out.push_back(jacobi);
    out.push_back(homo);
  }

  {
    PropertyResult dist{"potentials: trace_norm_sq(Ad_{gi^-1 gj} e1) - 2 = |ri - rj|^2", 0.0,
                        1e-10};
    for (int n = 0; n < kSamples; ++n) {
      const Pose gi = s.pose(5), gj = s.pose(5);
      const double d2 = std::pow(gi.x() - gj.x(), 2) + std::pow(gi.y() - gj.y(), 2);
      const double lhs = trace_norm_sq(adjoint(inverse(gi) * gj, {1, 0, 0})) - 2.0;
      dist.max_error = std::max(dist.max_error, std::abs(lhs - d2));
    }
    out.push_back(dist);
  }

  for (RetractionKind kind : {RetractionKind::cayley, RetractionKind::exponential}) {
    const std::string tag = "retraction(" + std::string(to_string(kind)) + "): ";
    PropertyResult inv{tag + "R(v) R(-v) = e", 0.0, 1e-12};
    PropertyResult identity{tag + "dR^-1 identity", 0.0, 1e-10};
    PropertyResult fd{tag + "dR^-1 vs central differences (relative)", 0.0, 1e-6};
    for (int n = 0; n < kSamples; ++n) {
      const AlgebraVec v = s.vec(0.57);
      inv.max_error = std::max(inv.max_error, pose_gap(retract(kind, v) * retract(kind, -v), Pose()));
      identity.max_error =
          std::max(identity.max_error, dretract_identity_error(kind, v, s.covec(1)));
    }
    for (int n = 0; n < 200; ++n) {
      const AlgebraVec v = s.vec(0.57);
      // Right-trivialized derivative: columns (d/de R(v + e ei)) R(v)^-1.
      const double e = 1e-6;
      Eigen::Matrix3d D;
      const Pose ginv = inverse(retract(kind, v));
      for (int c = 0; c < 3; ++c) {
        const AlgebraVec dv = AlgebraVec::from(e * Eigen::Vector3d::Unit(c));
        const Eigen::Matrix3d dp = retract(kind, v + dv).matrix() - retract(kind, v - dv).matrix();
        D.col(c) = vee(dp * ginv.matrix() / (2.0 * e)).vec();
      }
      const Eigen::Matrix3d ref = D.inverse();
      const Eigen::Matrix3d got = dretract_inv_matrix(kind, v);
      fd.max_error = std::max(fd.max_error, (got - ref).norm() / ref.norm());
    }
    out.push_back(inv);
    out.push_back(identity);
    out.push_back(fd);
  }

  {
    PropertyResult grad{"potentials: forces vs central differences (relative)", 0.0, 1e-6};
    const double rbar = 0.5;
    const Obstacle obs{{0.0, 0.0}, 0.5};
    for (int n = 0; n < 100; ++n) {
      Pose gi, gj;
      do {
        gi = s.pose(4);
        gj = s.pose(4);
      } while (std::hypot(gi.x() - gj.x(), gi.y() - gj.y()) < 2.0 * rbar + 0.2 ||
               std::hypot(gi.x(), gi.y()) < rbar + obs.radius + 0.2);
      const double e = 1e-6;
      const CoAlgebraVec fp = pair_force(gi, gj, 0.7, rbar);
      const CoAlgebraVec fo = obstacle_force(reduced_alpha(gi, obstacle_alpha0(obs.center)), 0.3,
                                             obstacle_threshold(rbar, obs.radius));
      Eigen::Vector3d np, no;
      for (int c = 0; c < 3; ++c) {
        const AlgebraVec xi = AlgebraVec::from(e * Eigen::Vector3d::Unit(c));
        const Pose gp = gi * retract(RetractionKind::exponential, xi);
        const Pose gm = gi * retract(RetractionKind::exponential, -xi);
        np[c] = (pair_potential(gp, gj, 0.7, rbar) - pair_potential(gm, gj, 0.7, rbar)) / (2 * e);
        no[c] = (obstacle_potential(gp, 0.3, rbar, obs) - obstacle_potential(gm, 0.3, rbar, obs)) /
                (2 * e);
      }
      grad.max_error = std::max(grad.max_error, (fp.vec() - np).norm() / (1e-12 + np.norm()));
      grad.max_error = std::max(grad.max_error, (fo.vec() - no).norm() / (1e-12 + no.norm()));
    }
    out.push_back(grad);
  }

  {
    PropertyResult fixed{"discrete: constant translation/rotation are exact fixed points", 0.0,
                         1e-12};
    for (RetractionKind kind : {RetractionKind::cayley, RetractionKind::exponential}) {
      for (int n = 0; n < kSamples; ++n) {
        const double h = s.uniform(0.01, 0.5);
        const AlgebraVec tr{0.0, s.uniform(-3, 3), s.uniform(-3, 3)};
        const AlgebraVec rot{s.uniform(-3, 3), 0.0, 0.0};
        for (const AlgebraVec& u : {tr, rot}) {
          const CoAlgebraVec r = step_residual(u, u, cost_gradient(u), {}, h, kind);
          fixed.max_error = std::max(fixed.max_error, max_abs(r));
        }
      }
    }
    out.push_back(fixed);
  }

  {
    PropertyResult alpha{"continuous: alpha stays Ad_{g^-1} alpha0 (RK4, 1000 steps)", 0.0, 1e-8};
    PropertyResult drift{"continuous: alpha1 drift over 1000 steps", 0.0, 1e-12};
    PotentialParams p;
    p.sigma_pair = Eigen::MatrixXd::Zero(1, 1);
    p.sigma_obstacle = {1.0};
    p.rbar = 1.0;
    p.obstacle = Obstacle{{s.uniform(-0.5, 0.5), s.uniform(-0.5, 0.5)}, 1.0};
    const SystemDef sys = SystemDef::from_edges(1, {}, p);
    const AlgebraVec a0 = p.obstacle_alpha0();
    const ContinuousState init{make_agent_state(Pose(0.3, -4.0, 2.5), 0.1, 1.0, 0.2, a0)};
    const auto traj = simulate_ivp(init, sys, 4.0, 1000);
    for (const auto& st : traj.states) {
      alpha.max_error =
          std::max(alpha.max_error, max_abs(st[0].alpha - reduced_alpha(st[0].g, a0)));
      drift.max_error = std::max(drift.max_error, std::abs(st[0].alpha.a - a0.a));
    }
    out.push_back(alpha);
    out.push_back(drift);
  }
  return out;
}

}  // namespace se2ocp::tools
