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

// Coordinate-level SE(2) kernel.
//
// Algebra elements are written xi = a e1 + b1 e2 + b2 e3 with
//
//        [0 -1 0]        [0 0 1]        [0 0 0]
//   e1 = [1  0 0],  e2 = [0 0 0],  e3 = [0 0 1],
//        [0  0 0]        [0 0 0]        [0 0 0]
//
// so [e1,e2] = e3, [e2,e3] = 0, [e3,e1] = e2. Dual elements carry
// coordinates on the dual basis and pair with algebra elements by the plain
// dot product of coordinates.

#pragma once

#include <Eigen/Core>

#include <cmath>
#include <iosfwd>

namespace se2ocp {

/// Wraps an angle to (-pi, pi].
double wrap_angle(double theta);

/// Element of se(2): rotational rate `a`, translational rates (b1, b2).
struct AlgebraVec {
  double a = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;

  static AlgebraVec from(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }
  Eigen::Vector3d vec() const { return {a, b1, b2}; }
  double operator[](int i) const { return i == 0 ? a : (i == 1 ? b1 : b2); }

  friend AlgebraVec operator+(const AlgebraVec& l, const AlgebraVec& r) {
    return {l.a + r.a, l.b1 + r.b1, l.b2 + r.b2};
  }
  friend AlgebraVec operator-(const AlgebraVec& l, const AlgebraVec& r) {
    return {l.a - r.a, l.b1 - r.b1, l.b2 - r.b2};
  }
  friend AlgebraVec operator-(const AlgebraVec& v) { return {-v.a, -v.b1, -v.b2}; }
  friend AlgebraVec operator*(double s, const AlgebraVec& v) {
    return {s * v.a, s * v.b1, s * v.b2};
  }
  friend bool operator==(const AlgebraVec&, const AlgebraVec&) = default;
};

/// Element of se(2)* on the dual basis e^1, e^2, e^3.
struct CoAlgebraVec {
  double m1 = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;

  static CoAlgebraVec from(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }
  Eigen::Vector3d vec() const { return {m1, m2, m3}; }
  double operator[](int i) const { return i == 0 ? m1 : (i == 1 ? m2 : m3); }

  friend CoAlgebraVec operator+(const CoAlgebraVec& l, const CoAlgebraVec& r) {
    return {l.m1 + r.m1, l.m2 + r.m2, l.m3 + r.m3};
  }
  friend CoAlgebraVec operator-(const CoAlgebraVec& l, const CoAlgebraVec& r) {
    return {l.m1 - r.m1, l.m2 - r.m2, l.m3 - r.m3};
  }
  friend CoAlgebraVec operator-(const CoAlgebraVec& v) { return {-v.m1, -v.m2, -v.m3}; }
  friend CoAlgebraVec operator*(double s, const CoAlgebraVec& v) {
    return {s * v.m1, s * v.m2, s * v.m3};
  }
  friend bool operator==(const CoAlgebraVec&, const CoAlgebraVec&) = default;
};

double max_abs(const AlgebraVec& v);
double max_abs(const CoAlgebraVec& v);

/// Canonical pairing <mu, xi> = m1 a + m2 b1 + m3 b2.
inline double pair(const CoAlgebraVec& mu, const AlgebraVec& xi) {
  return mu.m1 * xi.a + mu.m2 * xi.b1 + mu.m3 * xi.b2;
}

/// Planar rigid motion z -> R(theta) z + (x, y). The heading is kept in
/// (-pi, pi].
class Pose {
 public:
  Pose() = default;
  Pose(double theta, double x, double y) : theta_(wrap_angle(theta)), x_(x), y_(y) {}

  static Pose identity() { return {}; }
  /// Builds a pose from a homogeneous 3x3 matrix; the rotation block is
  /// assumed orthonormal.
  static Pose from_matrix(const Eigen::Matrix3d& m);

  double theta() const { return theta_; }
  double x() const { return x_; }
  double y() const { return y_; }
  Eigen::Vector2d translation() const { return {x_, y_}; }
  Eigen::Matrix2d rotation() const;
  Eigen::Matrix3d matrix() const;

  friend bool operator==(const Pose&, const Pose&) = default;

 private:
  double theta_ = 0.0;
  double x_ = 0.0;
  double y_ = 0.0;
};

std::ostream& operator<<(std::ostream& os, const Pose& g);
std::ostream& operator<<(std::ostream& os, const AlgebraVec& v);
std::ostream& operator<<(std::ostream& os, const CoAlgebraVec& v);

Pose compose(const Pose& g, const Pose& h);
Pose inverse(const Pose& g);
inline Pose operator*(const Pose& g, const Pose& h) { return compose(g, h); }

/// Ad_g xi = (a, a J r + R b) with J = [[0, 1], [-1, 0]].
AlgebraVec adjoint(const Pose& g, const AlgebraVec& xi);
/// Ad_g as a matrix acting on (a, b1, b2).
Eigen::Matrix3d adjoint_matrix(const Pose& g);

AlgebraVec bracket(const AlgebraVec& xi, const AlgebraVec& eta);

/// ad*_xi mu, defined by <ad*_xi mu, eta> = <mu, [xi, eta]>.
CoAlgebraVec coadjoint_star(const AlgebraVec& xi, const CoAlgebraVec& mu);

/// Ad*_g mu, defined by <Ad*_g mu, xi> = <mu, Ad_g xi>.
CoAlgebraVec coadjoint_group(const Pose& g, const CoAlgebraVec& mu);

/// Momentum map of the coadjoint representation on V = se(2)*:
/// J_V(x, alpha) = ad*_alpha x.
CoAlgebraVec momentum_map(const CoAlgebraVec& x, const AlgebraVec& alpha);

/// Squared trace norm tr(xi^T xi) of the matrix embedding: 2a^2 + |b|^2.
double trace_norm_sq(const AlgebraVec& xi);

/// 3x3 matrix embedding a e1 + b1 e2 + b2 e3.
Eigen::Matrix3d hat(const AlgebraVec& xi);
/// Inverse of hat; reads the (1,0), (0,2), (1,2) entries.
AlgebraVec vee(const Eigen::Matrix3d& m);

}  // namespace se2ocp
