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

#include "se2ocp/discrete.hpp"

#include <Eigen/LU>

#include <cmath>
#include <stdexcept>
#include <string>

#include "se2ocp/errors.hpp"

namespace se2ocp {

std::vector<Pose> DiscreteSolution::poses_at(std::size_t k) const {
  std::vector<Pose> g;
  g.reserve(agents.size());
  for (const auto& a : agents) g.push_back(a.poses.at(k));
  return g;
}

std::vector<AlphaState> DiscreteSolution::alphas_at(std::size_t k) const {
  std::vector<AlphaState> al;
  al.reserve(agents.size());
  for (const auto& a : agents) al.push_back(a.alphas.at(k));
  return al;
}

DiscreteSolution reconstruct(std::span<const ControlSequence> controls,
                             std::span<const Pose> starts, const AlgebraVec& alpha0, double h,
                             RetractionKind kind) {
  if (controls.size() != starts.size()) throw std::invalid_argument("controls/starts mismatch");
  DiscreteSolution sol;
  sol.h = h;
  sol.steps = controls.empty() ? 0 : controls.front().size();
  sol.agents.resize(controls.size());
  for (std::size_t i = 0; i < controls.size(); ++i) {
    const ControlSequence& u = controls[i];
    if (u.size() != sol.steps) throw std::invalid_argument("ragged control sequences");
    AgentTrack& t = sol.agents[i];
    t.controls = u;
    t.poses.reserve(sol.steps + 1);
    t.alphas.reserve(sol.steps + 1);
    t.momenta.reserve(sol.steps);
    t.poses.push_back(starts[i]);
    t.alphas.push_back(reduced_alpha(starts[i], alpha0));
    for (std::size_t k = 0; k < sol.steps; ++k) {
      const Pose step = retract(kind, h * u[k]);
      t.poses.push_back(t.poses[k] * step);
      t.alphas.push_back(adjoint(inverse(step), t.alphas[k]));
      t.momenta.push_back(cost_gradient(u[k]));
    }
  }
  return sol;
}

CoAlgebraVec step_residual(const AlgebraVec& u, const AlgebraVec& u_prev,
                           const CoAlgebraVec& mu_prev, const CoAlgebraVec& force, double h,
                           RetractionKind kind) {
  return dretract_inv_dual(kind, h * u, cost_gradient(u)) -
         dretract_inv_dual(kind, -(h * u_prev), mu_prev) - h * force;
}

std::vector<CoAlgebraVec> momentum_residual(std::size_t k, const DiscreteSolution& sol,
                                            const SystemDef& sys, RetractionKind kind) {
  if (k == 0 || k >= sol.steps) throw std::out_of_range("momentum_residual needs 1 <= k < N");
  const auto poses = sol.poses_at(k);
  std::vector<CoAlgebraVec> r(sol.agents.size());
  for (std::size_t i = 0; i < sol.agents.size(); ++i) {
    const AgentTrack& t = sol.agents[i];
    const CoAlgebraVec f = potential_force(i, poses, t.alphas[k], sys);
    r[i] = step_residual(t.controls[k], t.controls[k - 1], t.momenta[k - 1], f, sol.h, kind);
  }
  return r;
}

namespace {

AlgebraVec solve_agent_step(std::size_t k, std::size_t agent, const CoAlgebraVec& target,
                            const AlgebraVec& guess, double h, RetractionKind kind,
                            const StepOptions& opts) {
  // G(u) = (dR^-1_{hu})^* dC/du(u) - target
  auto G = [&](const AlgebraVec& u) -> Eigen::Vector3d {
    return (dretract_inv_dual(kind, h * u, cost_gradient(u)) - target).vec();
  };
  Eigen::Vector3d u = guess.vec();
  Eigen::Vector3d r = G(AlgebraVec::from(u));
  for (int it = 0; it < opts.max_iters; ++it) {
    if (r.lpNorm<Eigen::Infinity>() <= opts.tol) return AlgebraVec::from(u);
    Eigen::Matrix3d J;
    for (int c = 0; c < 3; ++c) {
      Eigen::Vector3d up = u;
      up[c] += opts.fd_step;
      J.col(c) = (G(AlgebraVec::from(up)) - r) / opts.fd_step;
    }
    const Eigen::Vector3d du = J.partialPivLu().solve(-r);
    double t = 1.0;
    Eigen::Vector3d trial, rt;
    while (true) {
      trial = u + t * du;
      rt = G(AlgebraVec::from(trial));
      if (rt.norm() < r.norm() || t < 1e-6) break;
      t *= 0.5;
    }
    if (!rt.allFinite()) break;
    u = trial;
    r = rt;
  }
  if (r.lpNorm<Eigen::Infinity>() <= opts.tol) return AlgebraVec::from(u);
  throw NewtonDivergence("step " + std::to_string(k) + ", agent " + std::to_string(agent) +
                         ": implicit solve stalled at residual " +
                         std::to_string(r.lpNorm<Eigen::Infinity>()));
}

}  // namespace

StepResult solve_step(std::size_t k, std::span<const AlgebraVec> prev_controls,
                      std::span<const CoAlgebraVec> prev_momenta, std::span<const Pose> poses,
                      std::span<const AlphaState> alphas, const SystemDef& sys, double h,
                      RetractionKind kind, const StepOptions& opts) {
  const std::size_t s = poses.size();
  StepResult out;
  out.controls.resize(s);
  out.momenta.resize(s);
  for (std::size_t i = 0; i < s; ++i) {
    const CoAlgebraVec f = potential_force(i, poses, alphas[i], sys);
    const CoAlgebraVec target =
        dretract_inv_dual(kind, -(h * prev_controls[i]), prev_momenta[i]) + h * f;
    out.controls[i] = solve_agent_step(k, i, target, prev_controls[i], h, kind, opts);
    out.momenta[i] = cost_gradient(out.controls[i]);
  }
  return out;
}

DiscreteSolution forward_sweep(std::span<const AlgebraVec> u0, std::span<const Pose> starts,
                               const AlgebraVec& alpha0, const SystemDef& sys, std::size_t N,
                               double h, RetractionKind kind, const StepOptions& opts) {
  if (N == 0) throw std::invalid_argument("forward_sweep needs N >= 1");
  const std::size_t s = starts.size();
  if (u0.size() != s || sys.agents() != s) throw std::invalid_argument("agent count mismatch");

  DiscreteSolution sol;
  sol.h = h;
  sol.steps = N;
  sol.agents.resize(s);
  for (std::size_t i = 0; i < s; ++i) {
    AgentTrack& t = sol.agents[i];
    t.poses.push_back(starts[i]);
    t.alphas.push_back(reduced_alpha(starts[i], alpha0));
  }
  auto advance = [&](std::size_t i, const AlgebraVec& u, const CoAlgebraVec& mu) {
    AgentTrack& t = sol.agents[i];
    const Pose step = retract(kind, h * u);
    t.controls.push_back(u);
    t.momenta.push_back(mu);
    t.poses.push_back(t.poses.back() * step);
    t.alphas.push_back(adjoint(inverse(step), t.alphas.back()));
  };
  for (std::size_t i = 0; i < s; ++i) advance(i, u0[i], cost_gradient(u0[i]));

  std::vector<AlgebraVec> prev_u(u0.begin(), u0.end());
  std::vector<CoAlgebraVec> prev_mu(s);
  for (std::size_t i = 0; i < s; ++i) prev_mu[i] = sol.agents[i].momenta[0];
  for (std::size_t k = 1; k < N; ++k) {
    StepResult step;
    try {
      const auto poses = sol.poses_at(k);
      const auto alphas = sol.alphas_at(k);
      step = solve_step(k, prev_u, prev_mu, poses, alphas, sys, h, kind, opts);
    } catch (const Error& e) {
      throw SweepFailed(k, e.what());
    }
    for (std::size_t i = 0; i < s; ++i) advance(i, step.controls[i], step.momenta[i]);
    prev_u = std::move(step.controls);
    prev_mu = std::move(step.momenta);
  }
  return sol;
}

std::vector<AlgebraVec> endpoint_residual(const DiscreteSolution& sol,
                                          std::span<const Pose> goals, RetractionKind kind) {
  if (goals.size() != sol.agents.size()) throw std::invalid_argument("goal count mismatch");
  std::vector<AlgebraVec> r(goals.size());
  for (std::size_t i = 0; i < goals.size(); ++i) {
    r[i] = retract_inv(kind, inverse(sol.agents[i].poses.back()) * goals[i]);
  }
  return r;
}

std::vector<std::pair<CoAlgebraVec, CoAlgebraVec>> boundary_momentum_residuals(
    const DiscreteSolution& sol, std::span<const AlgebraVec> u_start,
    std::span<const AlgebraVec> u_end, const SystemDef& sys, RetractionKind kind) {
  const std::size_t s = sol.agents.size();
  if (u_start.size() != s || u_end.size() != s) throw std::invalid_argument("velocity count");
  if (sol.steps == 0) throw std::invalid_argument("empty solution");
  const auto poses0 = sol.poses_at(0);
  std::vector<std::pair<CoAlgebraVec, CoAlgebraVec>> r(s);
  for (std::size_t i = 0; i < s; ++i) {
    const AgentTrack& t = sol.agents[i];
    const CoAlgebraVec f = potential_force(i, poses0, t.alphas[0], sys);
    r[i].first = dretract_inv_dual(kind, sol.h * t.controls[0], t.momenta[0]) -
                 cost_gradient(u_start[i]) - sol.h * f;
    r[i].second = cost_gradient(u_end[i]) -
                  dretract_inv_dual(kind, -(sol.h * t.controls.back()), t.momenta.back());
  }
  return r;
}

std::vector<AlgebraVec> terminal_velocity(const DiscreteSolution& sol, RetractionKind kind) {
  std::vector<AlgebraVec> v;
  v.reserve(sol.agents.size());
  for (const auto& t : sol.agents) {
    const CoAlgebraVec m =
        dretract_inv_dual(kind, -(sol.h * t.controls.back()), t.momenta.back());
    v.push_back({m.m1, m.m2, m.m3});
  }
  return v;
}

double discrete_cost(const DiscreteSolution& sol) {
  double c = 0.0;
  for (const auto& t : sol.agents) {
    for (const auto& u : t.controls) c += sol.h * control_cost(u);
  }
  return c;
}

}  // namespace se2ocp
