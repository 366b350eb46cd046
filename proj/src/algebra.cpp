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

#include "se2ocp/algebra.hpp"

#include <algorithm>
#include <numbers>
#include <ostream>

namespace se2ocp {

double wrap_angle(double theta) {
  double w = std::remainder(theta, 2.0 * std::numbers::pi);
  if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
  return w;
}

double max_abs(const AlgebraVec& v) {
  return std::max({std::abs(v.a), std::abs(v.b1), std::abs(v.b2)});
}

double max_abs(const CoAlgebraVec& v) {
  return std::max({std::abs(v.m1), std::abs(v.m2), std::abs(v.m3)});
}

Pose Pose::from_matrix(const Eigen::Matrix3d& m) {
  return {std::atan2(m(1, 0), m(0, 0)), m(0, 2), m(1, 2)};
}

Eigen::Matrix2d Pose::rotation() const {
  const double c = std::cos(theta_), s = std::sin(theta_);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

Eigen::Matrix3d Pose::matrix() const {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  m.topLeftCorner<2, 2>() = rotation();
  m(0, 2) = x_;
  m(1, 2) = y_;
  return m;
}

std::ostream& operator<<(std::ostream& os, const Pose& g) {
  return os << "Pose(theta=" << g.theta() << ", x=" << g.x() << ", y=" << g.y() << ")";
}

std::ostream& operator<<(std::ostream& os, const AlgebraVec& v) {
  return os << "(" << v.a << ", " << v.b1 << ", " << v.b2 << ")";
}

std::ostream& operator<<(std::ostream& os, const CoAlgebraVec& v) {
  return os << "(" << v.m1 << ", " << v.m2 << ", " << v.m3 << ")*";
}

Pose compose(const Pose& g, const Pose& h) {
  const double c = std::cos(g.theta()), s = std::sin(g.theta());
  return {g.theta() + h.theta(), c * h.x() - s * h.y() + g.x(), s * h.x() + c * h.y() + g.y()};
}

Pose inverse(const Pose& g) {
  const double c = std::cos(g.theta()), s = std::sin(g.theta());
  return {-g.theta(), -(c * g.x() + s * g.y()), -(-s * g.x() + c * g.y())};
}

AlgebraVec adjoint(const Pose& g, const AlgebraVec& xi) {
  const double c = std::cos(g.theta()), s = std::sin(g.theta());
  // J r = (y, -x)
  return {xi.a, xi.a * g.y() + c * xi.b1 - s * xi.b2, -xi.a * g.x() + s * xi.b1 + c * xi.b2};
}

Eigen::Matrix3d adjoint_matrix(const Pose& g) {
  const double c = std::cos(g.theta()), s = std::sin(g.theta());
  Eigen::Matrix3d m;
  m << 1.0, 0.0, 0.0,
       g.y(), c, -s,
       -g.x(), s, c;
  return m;
}

AlgebraVec bracket(const AlgebraVec& xi, const AlgebraVec& eta) {
  return {0.0, xi.b2 * eta.a - xi.a * eta.b2, xi.a * eta.b1 - xi.b1 * eta.a};
}

CoAlgebraVec coadjoint_star(const AlgebraVec& xi, const CoAlgebraVec& mu) {
  return {mu.m2 * xi.b2 - mu.m3 * xi.b1, mu.m3 * xi.a, -mu.m2 * xi.a};
}

CoAlgebraVec coadjoint_group(const Pose& g, const CoAlgebraVec& mu) {
  const double c = std::cos(g.theta()), s = std::sin(g.theta());
  return {mu.m1 + g.y() * mu.m2 - g.x() * mu.m3, c * mu.m2 + s * mu.m3, -s * mu.m2 + c * mu.m3};
}

CoAlgebraVec momentum_map(const CoAlgebraVec& x, const AlgebraVec& alpha) {
  return coadjoint_star(alpha, x);
}

double trace_norm_sq(const AlgebraVec& xi) {
  return 2.0 * xi.a * xi.a + xi.b1 * xi.b1 + xi.b2 * xi.b2;
}

Eigen::Matrix3d hat(const AlgebraVec& xi) {
  Eigen::Matrix3d m;
  m << 0.0, -xi.a, xi.b1,
       xi.a, 0.0, xi.b2,
       0.0, 0.0, 0.0;
  return m;
}

AlgebraVec vee(const Eigen::Matrix3d& m) { return {m(1, 0), m(0, 2), m(1, 2)}; }

}  // namespace se2ocp
