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

#include "se2ocp/solver.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "se2ocp/errors.hpp"

namespace se2ocp {

std::string_view to_string(ShootingMode mode) {
  return mode == ShootingMode::fixed_pose ? "fixed_pose" : "fixed_pose_and_velocity";
}

ShootingMode parse_shooting_mode(std::string_view name) {
  if (name == "fixed_pose") return ShootingMode::fixed_pose;
  if (name == "fixed_pose_and_velocity") return ShootingMode::fixed_pose_and_velocity;
  throw ParseError("unknown mode '" + std::string(name) + "'");
}

std::string_view to_string(InitialGuessPolicy policy) {
  return policy == InitialGuessPolicy::geodesic ? "geodesic" : "zeros";
}

InitialGuessPolicy parse_initial_guess(std::string_view name) {
  if (name == "geodesic") return InitialGuessPolicy::geodesic;
  if (name == "zeros") return InitialGuessPolicy::zeros;
  throw ParseError("unknown initial guess policy '" + std::string(name) + "'");
}

void SolverOptions::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (max_outer_iters <= 0) throw std::invalid_argument("max_outer_iters must be positive");
  if (!(fd_step > 0.0)) throw std::invalid_argument("fd_step must be positive");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw std::invalid_argument("backtrack in (0,1)");
  if (!(min_step > 0.0 && min_step <= 1.0)) throw std::invalid_argument("min_step in (0,1]");
}

std::size_t ShootingProblem::residuals() const {
  const std::size_t base = 3 * agents() * steps;
  return mode == ShootingMode::fixed_pose ? base : base + 6 * agents();
}

std::vector<ControlSequence> unpack_controls(const Eigen::VectorXd& U,
                                             const ShootingProblem& prob) {
  if (static_cast<std::size_t>(U.size()) != prob.unknowns()) {
    throw std::invalid_argument("control vector has the wrong size");
  }
  std::vector<ControlSequence> controls(prob.agents(), ControlSequence(prob.steps));
  Eigen::Index idx = 0;
  for (auto& seq : controls) {
    for (auto& u : seq) {
      u = {U[idx], U[idx + 1], U[idx + 2]};
      idx += 3;
    }
  }
  return controls;
}

Eigen::VectorXd pack_controls(const std::vector<ControlSequence>& controls) {
  std::size_t n = 0;
  for (const auto& seq : controls) n += 3 * seq.size();
  Eigen::VectorXd U(static_cast<Eigen::Index>(n));
  Eigen::Index idx = 0;
  for (const auto& seq : controls) {
    for (const auto& u : seq) {
      U.segment<3>(idx) = u.vec();
      idx += 3;
    }
  }
  return U;
}

namespace {

DiscreteSolution solution_for(const Eigen::VectorXd& U, const ShootingProblem& prob) {
  const auto controls = unpack_controls(U, prob);
  return reconstruct(controls, prob.starts, prob.alpha0, prob.h(), prob.kind);
}

Eigen::VectorXd residual_of(const DiscreteSolution& sol, const ShootingProblem& prob) {
  const std::size_t s = prob.agents(), N = prob.steps;
  Eigen::VectorXd r(static_cast<Eigen::Index>(prob.residuals()));
  auto block = [&](std::size_t i, std::size_t row) {
    return static_cast<Eigen::Index>(3 * (i * N + row));
  };
  for (std::size_t k = 1; k < N; ++k) {
    std::vector<CoAlgebraVec> m;
    try {
      m = momentum_residual(k, sol, prob.sys, prob.kind);
    } catch (const InfeasibleConfiguration& e) {
      throw SweepFailed(k, e.what());
    }
    for (std::size_t i = 0; i < s; ++i) r.segment<3>(block(i, k - 1)) = m[i].vec();
  }
  std::vector<AlgebraVec> end;
  try {
    end = endpoint_residual(sol, prob.goals, prob.kind);
  } catch (const OutOfDomain& e) {
    throw SweepFailed(N, e.what());
  }
  for (std::size_t i = 0; i < s; ++i) r.segment<3>(block(i, N - 1)) = end[i].vec();

  if (prob.mode == ShootingMode::fixed_pose_and_velocity) {
    std::vector<std::pair<CoAlgebraVec, CoAlgebraVec>> b;
    try {
      b = boundary_momentum_residuals(sol, prob.start_velocity, prob.end_velocity, prob.sys,
                                      prob.kind);
    } catch (const InfeasibleConfiguration& e) {
      throw SweepFailed(0, e.what());
    }
    const auto base = static_cast<Eigen::Index>(3 * s * N);
    for (std::size_t i = 0; i < s; ++i) {
      r.segment<3>(base + static_cast<Eigen::Index>(6 * i)) = b[i].first.vec();
      r.segment<3>(base + static_cast<Eigen::Index>(6 * i + 3)) = b[i].second.vec();
    }
  }
  return r;
}

// Squared merit, or +inf when the trial configuration is infeasible.
double merit(const Eigen::VectorXd& U, const ShootingProblem& prob, Eigen::VectorXd& r) {
  try {
    r = global_residual(U, prob);
  } catch (const SweepFailed&) {
    return std::numeric_limits<double>::infinity();
  }
  const double m = r.squaredNorm();
  return std::isfinite(m) ? m : std::numeric_limits<double>::infinity();
}

Eigen::MatrixXd fd_jacobian(const Eigen::VectorXd& U, const Eigen::VectorXd& r0,
                            const ShootingProblem& prob, double step, bool central) {
  const Eigen::Index n = U.size();
  Eigen::MatrixXd J(r0.size(), n);
  Eigen::VectorXd x = U;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double xj = x[j];
    x[j] = xj + step;
    const Eigen::VectorXd rp = global_residual(x, prob);
    if (central) {
      x[j] = xj - step;
      J.col(j) = (rp - global_residual(x, prob)) / (2.0 * step);
    } else {
      J.col(j) = (rp - r0) / step;
    }
    x[j] = xj;
  }
  return J;
}

void validate_problem(const ShootingProblem& prob) {
  const std::size_t s = prob.agents();
  if (s == 0) throw std::invalid_argument("no agents");
  if (prob.goals.size() != s || prob.sys.agents() != s) {
    throw std::invalid_argument("agent count mismatch");
  }
  if (prob.steps == 0) throw std::invalid_argument("steps must be >= 1");
  if (!(prob.horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (prob.mode == ShootingMode::fixed_pose_and_velocity &&
      (prob.start_velocity.size() != s || prob.end_velocity.size() != s)) {
    throw std::invalid_argument("velocity mode needs start and end velocities for every agent");
  }
}

}  // namespace

Eigen::VectorXd global_residual(const Eigen::VectorXd& U, const ShootingProblem& prob) {
  return residual_of(solution_for(U, prob), prob);
}

Eigen::VectorXd initial_guess(const ShootingProblem& prob, InitialGuessPolicy policy) {
  std::vector<ControlSequence> controls(prob.agents(), ControlSequence(prob.steps));
  if (policy == InitialGuessPolicy::geodesic) {
    for (std::size_t i = 0; i < prob.agents(); ++i) {
      const AlgebraVec u =
          (1.0 / prob.horizon) * retract_inv(prob.kind, inverse(prob.starts[i]) * prob.goals[i]);
      std::fill(controls[i].begin(), controls[i].end(), u);
    }
  }
  return pack_controls(controls);
}

Diagnostics evaluate_diagnostics(const Eigen::VectorXd& U, const ShootingProblem& prob) {
  Diagnostics d;
  const DiscreteSolution sol = solution_for(U, prob);
  const Eigen::VectorXd r = residual_of(sol, prob);
  const auto split = static_cast<Eigen::Index>(3 * prob.agents() * prob.steps);
  d.residual_inf = r.lpNorm<Eigen::Infinity>();
  d.residual_norm = r.norm();
  d.shooting_residual_inf = r.head(split).lpNorm<Eigen::Infinity>();
  d.boundary_residual_inf =
      r.size() > split ? r.tail(r.size() - split).lpNorm<Eigen::Infinity>() : 0.0;
  d.min_pair_distance = std::numeric_limits<double>::infinity();
  d.min_obstacle_distance = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k <= prob.steps; ++k) {
    const auto g = sol.poses_at(k);
    d.min_pair_distance = std::min(d.min_pair_distance, min_pair_distance(g));
    if (prob.sys.params.obstacle) {
      d.min_obstacle_distance =
          std::min(d.min_obstacle_distance, min_obstacle_distance(g, *prob.sys.params.obstacle));
    }
  }
  d.cost = discrete_cost(sol);
  return d;
}

SolveReport solve_bvp(const ShootingProblem& prob, const SolverOptions& opts) {
  validate_problem(prob);
  opts.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const bool least_squares = prob.mode == ShootingMode::fixed_pose_and_velocity;

  Eigen::VectorXd U = initial_guess(prob, opts.initial_guess);
  Eigen::VectorXd r = global_residual(U, prob);
  double m = r.squaredNorm();

  SolveReport report;
  int it = 0;
  auto converged = [&](const Eigen::MatrixXd* J) {
    if (r.lpNorm<Eigen::Infinity>() <= opts.tol) return true;
    if (least_squares && J != nullptr) {
      return (J->transpose() * r).lpNorm<Eigen::Infinity>() <= opts.tol * (1.0 + r.norm());
    }
    return false;
  };

  for (; it < opts.max_outer_iters; ++it) {
    if (converged(nullptr)) {
      report.converged = true;
      break;
    }
    const Eigen::MatrixXd J = fd_jacobian(U, r, prob, opts.fd_step, least_squares);
    if (least_squares && converged(&J)) {
      report.converged = true;
      break;
    }
    Eigen::VectorXd dU;
    if (least_squares) {
      dU = J.colPivHouseholderQr().solve(-r);
    } else {
      if (J.rows() != J.cols()) throw std::logic_error("fixed-pose Jacobian is not square");
      dU = J.partialPivLu().solve(-r);
    }
    if (!dU.allFinite()) {
      report.message = "singular Jacobian";
      break;
    }

    bool accepted = false;
    Eigen::VectorXd rt;
    for (double t = 1.0; t >= opts.min_step; t *= opts.backtrack) {
      const Eigen::VectorXd trial = U + t * dU;
      const double mt = merit(trial, prob, rt);
      if (mt < m) {
        U = trial;
        r = rt;
        m = mt;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      report.message = "line search stalled";
      break;
    }
  }
  if (!report.converged && report.message.empty()) {
    if (converged(nullptr)) {
      report.converged = true;
    } else {
      report.message = "iteration cap reached";
    }
  }
  if (report.converged) report.message = "converged";

  report.controls = U;
  report.solution = solution_for(U, prob);
  report.diagnostics = evaluate_diagnostics(U, prob);
  report.diagnostics.iterations = it;
  report.diagnostics.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace se2ocp
