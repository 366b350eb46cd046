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

#include "se2ocp/retraction.hpp"

#include <Eigen/LU>

#include <cmath>
#include <numbers>
#include <string>

#include "se2ocp/errors.hpp"

namespace se2ocp {

namespace {

// Headings this close to pi are treated as the Cayley pole.
constexpr double kCayleyPoleGuard = 1e-12;

// sin(a)/a and (1 - cos(a))/a with series near zero.
void exp_coefficients(double a, double& sa, double& ca) {
  if (std::abs(a) < 1e-4) {
    const double a2 = a * a;
    sa = 1.0 - a2 / 6.0 + a2 * a2 / 120.0;
    ca = a / 2.0 - a * a2 / 24.0;
  } else {
    sa = std::sin(a) / a;
    ca = (1.0 - std::cos(a)) / a;
  }
}

}  // namespace

std::string_view to_string(RetractionKind kind) {
  return kind == RetractionKind::cayley ? "cayley" : "exp";
}

RetractionKind parse_retraction_kind(std::string_view name) {
  if (name == "cayley") return RetractionKind::cayley;
  if (name == "exp" || name == "exponential") return RetractionKind::exponential;
  throw ParseError("unknown retraction '" + std::string(name) + "' (expected cayley or exp)");
}

Eigen::Matrix3d ad_matrix(const AlgebraVec& v) {
  Eigen::Matrix3d m;
  m << 0.0, 0.0, 0.0,
       v.b2, 0.0, -v.a,
       -v.b1, v.a, 0.0;
  return m;
}

Pose retract(RetractionKind kind, const AlgebraVec& v) {
  if (kind == RetractionKind::cayley) {
    const double d = 1.0 + 0.25 * v.a * v.a;
    return {2.0 * std::atan(0.5 * v.a), (v.b1 - 0.5 * v.a * v.b2) / d,
            (v.b2 + 0.5 * v.a * v.b1) / d};
  }
  double sa, ca;
  exp_coefficients(v.a, sa, ca);
  return {v.a, sa * v.b1 - ca * v.b2, ca * v.b1 + sa * v.b2};
}

AlgebraVec retract_inv(RetractionKind kind, const Pose& g) {
  if (kind == RetractionKind::cayley) {
    if (std::abs(g.theta()) >= std::numbers::pi - kCayleyPoleGuard) {
      throw OutOfDomain("Cayley inverse undefined for a heading of pi");
    }
    const double a = 2.0 * std::tan(0.5 * g.theta());
    return {a, g.x() + 0.5 * a * g.y(), g.y() - 0.5 * a * g.x()};
  }
  const double a = g.theta();
  double sa, ca;
  exp_coefficients(a, sa, ca);
  const double det = sa * sa + ca * ca;
  return {a, (sa * g.x() + ca * g.y()) / det, (-ca * g.x() + sa * g.y()) / det};
}

Eigen::Matrix3d dretract_inv_matrix(RetractionKind kind, const AlgebraVec& v) {
  if (kind == RetractionKind::cayley) {
    Eigen::Matrix3d m;
    m << 1.0 + 0.25 * v.a * v.a, 0.0, 0.0,
         0.25 * v.a * v.b1 - 0.5 * v.b2, 1.0, 0.5 * v.a,
         0.25 * v.a * v.b2 + 0.5 * v.b1, -0.5 * v.a, 1.0;
    return m;
  }
  // ad^3 = -a^2 ad on se(2), so the Bernoulli series sum B_n/n! ad^n
  // collapses to I - ad/2 + c(a) ad^2, valid for |a| < 2 pi.
  const double a2 = v.a * v.a;
  const double c = std::abs(v.a) < 1e-3
                       ? 1.0 / 12.0 + a2 / 720.0 + a2 * a2 / 30240.0
                       : (1.0 - 0.5 * v.a / std::tan(0.5 * v.a)) / a2;
  const Eigen::Matrix3d ad = ad_matrix(v);
  return Eigen::Matrix3d::Identity() - 0.5 * ad + c * ad * ad;
}

Eigen::Matrix3d dretract_matrix(RetractionKind kind, const AlgebraVec& v) {
  return dretract_inv_matrix(kind, v).inverse();
}

CoAlgebraVec dretract_inv_dual(RetractionKind kind, const AlgebraVec& v, const CoAlgebraVec& mu) {
  if (kind == RetractionKind::cayley) {
    // Transpose of the Cayley matrix written out; the first slot is the
    // gamma term of the discrete momentum update.
    return {(1.0 + 0.25 * v.a * v.a) * mu.m1 + (0.25 * v.a * v.b1 - 0.5 * v.b2) * mu.m2 +
                (0.25 * v.a * v.b2 + 0.5 * v.b1) * mu.m3,
            mu.m2 - 0.5 * v.a * mu.m3, 0.5 * v.a * mu.m2 + mu.m3};
  }
  return CoAlgebraVec::from(dretract_inv_matrix(kind, v).transpose() * mu.vec());
}

double dretract_identity_error(RetractionKind kind, const AlgebraVec& v, const CoAlgebraVec& mu) {
  const CoAlgebraVec lhs = dretract_inv_dual(kind, -v, mu);
  const CoAlgebraVec rhs = coadjoint_group(retract(kind, v), dretract_inv_dual(kind, v, mu));
  return (lhs - rhs).vec().norm();
}

}  // namespace se2ocp
