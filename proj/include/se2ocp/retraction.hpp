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

#include <Eigen/Core>

#include <string_view>

#include "se2ocp/algebra.hpp"

namespace se2ocp {

/// Retraction used to discretize g' = g u. Cayley is the default.
enum class RetractionKind { cayley, exponential };

std::string_view to_string(RetractionKind kind);
/// Accepts "cayley", "exp" and "exponential". Throws ParseError otherwise.
RetractionKind parse_retraction_kind(std::string_view name);

/// R(v). For Cayley this is (I - v^/2)^{-1} (I + v^/2) in closed form.
Pose retract(RetractionKind kind, const AlgebraVec& v);

/// R^{-1}(g). Throws OutOfDomain for Cayley when the heading of g is pi.
AlgebraVec retract_inv(RetractionKind kind, const Pose& g);

/// Matrix of the inverse right-trivialized tangent dR^{-1}_v on (e1, e2, e3)
/// coordinates.
///
/// For the exponential map this is the Bernoulli series sum B_n / n! ad_v^n
/// summed in closed form; it requires |v.a| < 2 pi.
Eigen::Matrix3d dretract_inv_matrix(RetractionKind kind, const AlgebraVec& v);

/// Right-trivialized tangent dR_v, the inverse of dretract_inv_matrix.
Eigen::Matrix3d dretract_matrix(RetractionKind kind, const AlgebraVec& v);

/// (dR^{-1}_v)^* mu, i.e. the transpose of dretract_inv_matrix applied to mu.
CoAlgebraVec dretract_inv_dual(RetractionKind kind, const AlgebraVec& v, const CoAlgebraVec& mu);

/// | (dR^{-1}_{-v})^* mu - Ad*_{R(v)} (dR^{-1}_v)^* mu |, which vanishes for an
/// exact right-trivialized tangent.
double dretract_identity_error(RetractionKind kind, const AlgebraVec& v, const CoAlgebraVec& mu);

/// Matrix of ad_v acting on (e1, e2, e3) coordinates.
Eigen::Matrix3d ad_matrix(const AlgebraVec& v);

}  // namespace se2ocp
