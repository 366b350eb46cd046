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

#include "se2ocp/potentials.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "se2ocp/errors.hpp"

namespace se2ocp {

void PotentialParams::validate() const {
  const auto n = static_cast<Eigen::Index>(agents());
  if (sigma_pair.rows() != n || sigma_pair.cols() != n) {
    throw std::invalid_argument("sigma_pair must be an agents x agents matrix");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (sigma_pair(i, i) != 0.0) throw std::invalid_argument("sigma_pair diagonal must be zero");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!(sigma_pair(i, j) >= 0.0) || sigma_pair(i, j) != sigma_pair(j, i)) {
        throw std::invalid_argument("sigma_pair must be symmetric and nonnegative");
      }
    }
  }
  for (double s : sigma_obstacle) {
    if (!(s >= 0.0)) throw std::invalid_argument("obstacle gains must be nonnegative");
  }
  if (!(rbar > 0.0)) throw std::invalid_argument("rbar must be positive");
  if (obstacle && !(obstacle->radius >= 0.0)) {
    throw std::invalid_argument("obstacle radius must be nonnegative");
  }
}

double PotentialParams::obstacle_threshold() const {
  return se2ocp::obstacle_threshold(rbar, obstacle ? obstacle->radius : 0.0);
}

AlgebraVec PotentialParams::obstacle_alpha0() const {
  return se2ocp::obstacle_alpha0(obstacle ? obstacle->center : Eigen::Vector2d::Zero());
}

double obstacle_threshold(double rbar, double obstacle_radius) {
  const double reach = rbar + obstacle_radius;
  return 2.0 + reach * reach;
}

AlgebraVec obstacle_alpha0(const Eigen::Vector2d& center) { return {1.0, center.y(), -center.x()}; }

namespace {

double pair_gap(const Pose& gi, const Pose& gj, double rbar) {
  const double dx = gi.x() - gj.x(), dy = gi.y() - gj.y();
  const double q = dx * dx + dy * dy - 4.0 * rbar * rbar;
  if (!(q > 0.0)) {
    std::ostringstream os;
    os << "agents at distance " << std::hypot(dx, dy) << " <= 2 rbar = " << 2.0 * rbar;
    throw InfeasibleConfiguration(os.str());
  }
  return q;
}

double alpha_gap(const AlphaState& alpha, double threshold) {
  const double d = trace_norm_sq(alpha) - threshold;
  if (!(d > 0.0)) {
    throw InfeasibleConfiguration("configuration inside the obstacle clearance zone");
  }
  return d;
}

}  // namespace

double pair_potential(const Pose& gi, const Pose& gj, double sigma, double rbar) {
  return sigma / (2.0 * pair_gap(gi, gj, rbar));
}

CoAlgebraVec pair_force(const Pose& gi, const Pose& gj, double sigma, double rbar) {
  const double q = pair_gap(gi, gj, rbar);
  const double w = -sigma / (q * q);
  const double gx = w * (gi.x() - gj.x()), gy = w * (gi.y() - gj.y());
  const double c = std::cos(gi.theta()), s = std::sin(gi.theta());
  return {0.0, c * gx + s * gy, -s * gx + c * gy};
}

double extended_obstacle_potential(const AlphaState& alpha, double sigma, double threshold) {
  return sigma / (2.0 * alpha_gap(alpha, threshold));
}

CoAlgebraVec extended_potential_gradient(const AlphaState& alpha, double sigma,
                                         double threshold) {
  const double d = alpha_gap(alpha, threshold);
  const double w = -sigma / (d * d);
  return {2.0 * w * alpha.a, w * alpha.b1, w * alpha.b2};
}

CoAlgebraVec obstacle_force(const AlphaState& alpha, double sigma, double threshold) {
  return momentum_map(extended_potential_gradient(alpha, sigma, threshold), alpha);
}

double obstacle_potential(const Pose& g, double sigma, double rbar, const Obstacle& obstacle) {
  const double reach = rbar + obstacle.radius;
  const double q = (g.translation() - obstacle.center).squaredNorm() - reach * reach;
  if (!(q > 0.0)) {
    throw InfeasibleConfiguration("configuration inside the obstacle clearance zone");
  }
  return sigma / (2.0 * q);
}

AlgebraVec evolve_alpha_continuous(const AlphaState& alpha, const AlgebraVec& u) {
  return -bracket(u, alpha);
}

AlphaState evolve_alpha_discrete(const AlphaState& alpha, const AlgebraVec& u, double h,
                                 RetractionKind kind) {
  return adjoint(inverse(retract(kind, h * u)), alpha);
}

}  // namespace se2ocp
