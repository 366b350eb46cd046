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

// Discrete-time necessary conditions. For every agent i and step k:
//
//   g^{k+1}     = g^k R(h u^k)
//   mu^k        = dC/du(u^k) = u^k
//   (dR^-1_{h u^k})^* mu^k = (dR^-1_{-h u^{k-1}})^* mu^{k-1} + h F_i(g^k, alpha^k)
//   alpha^{k+1} = Ad_{R(h u^k)^-1} alpha^k,   alpha^0 = Ad_{(g^0)^-1} alpha0
//
// with F_i the potential force of system.hpp, the momentum relation holding
// for k = 1..N-1.

#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "se2ocp/algebra.hpp"
#include "se2ocp/retraction.hpp"
#include "se2ocp/system.hpp"

namespace se2ocp {

struct AgentTrack {
  std::vector<Pose> poses;            // g^0 .. g^N
  std::vector<AlgebraVec> controls;   // u^0 .. u^{N-1}
  std::vector<CoAlgebraVec> momenta;  // mu^0 .. mu^{N-1}
  std::vector<AlphaState> alphas;     // alpha^0 .. alpha^N
};

struct DiscreteSolution {
  double h = 0.0;
  std::size_t steps = 0;
  std::vector<AgentTrack> agents;

  std::vector<Pose> poses_at(std::size_t k) const;
  std::vector<AlphaState> alphas_at(std::size_t k) const;
};

using ControlSequence = std::vector<AlgebraVec>;

/// Rebuilds poses, momenta and alpha from a full control sequence per agent.
/// The reconstruction g^{k+1} = g^k R(h u^k) is applied verbatim, so it holds
/// bit-for-bit on the result.
DiscreteSolution reconstruct(std::span<const ControlSequence> controls,
                             std::span<const Pose> starts, const AlgebraVec& alpha0, double h,
                             RetractionKind kind);

/// Residual of the momentum relation for one agent, given the step-k force.
CoAlgebraVec step_residual(const AlgebraVec& u, const AlgebraVec& u_prev,
                           const CoAlgebraVec& mu_prev, const CoAlgebraVec& force, double h,
                           RetractionKind kind);

/// Momentum residual at interior step 1 <= k <= N-1, one entry per agent.
/// Throws InfeasibleConfiguration at a potential pole.
std::vector<CoAlgebraVec> momentum_residual(std::size_t k, const DiscreteSolution& sol,
                                            const SystemDef& sys, RetractionKind kind);

struct StepOptions {
  double fd_step = 1e-7;
  double tol = 1e-11;
  int max_iters = 50;
};

struct StepResult {
  std::vector<AlgebraVec> controls;
  std::vector<CoAlgebraVec> momenta;
};

/// Solves the momentum relation at step k for u^k of every agent by damped
/// Newton with a finite-difference Jacobian, starting from u^{k-1}. Agents
/// decouple because the forces only depend on known step-k data.
/// Throws NewtonDivergence or InfeasibleConfiguration.
StepResult solve_step(std::size_t k, std::span<const AlgebraVec> prev_controls,
                      std::span<const CoAlgebraVec> prev_momenta, std::span<const Pose> poses,
                      std::span<const AlphaState> alphas, const SystemDef& sys, double h,
                      RetractionKind kind, const StepOptions& opts = {});

/// Propagates the discrete conditions from the initial controls u^0 over N
/// steps. Failures are rethrown as SweepFailed with the step index.
DiscreteSolution forward_sweep(std::span<const AlgebraVec> u0, std::span<const Pose> starts,
                               const AlgebraVec& alpha0, const SystemDef& sys, std::size_t N,
                               double h, RetractionKind kind, const StepOptions& opts = {});

/// R^{-1}((g^N)^{-1} g_T) per agent; zero iff g^N = g_T.
std::vector<AlgebraVec> endpoint_residual(const DiscreteSolution& sol,
                                          std::span<const Pose> goals, RetractionKind kind);

/// Initial and terminal momentum relations per agent:
///   first  = (dR^-1_{h u^0})^* mu^0 - dC/du(u_start) - h F_i(g^0, alpha^0)
///   second = dC/du(u_end) - (dR^-1_{-h u^{N-1}})^* mu^{N-1}
std::vector<std::pair<CoAlgebraVec, CoAlgebraVec>> boundary_momentum_residuals(
    const DiscreteSolution& sol, std::span<const AlgebraVec> u_start,
    std::span<const AlgebraVec> u_end, const SystemDef& sys, RetractionKind kind);

/// Velocity at t = T implied by the terminal momentum relation.
std::vector<AlgebraVec> terminal_velocity(const DiscreteSolution& sol, RetractionKind kind);

/// sum_i sum_k h C(u_i^k).
double discrete_cost(const DiscreteSolution& sol);

}  // namespace se2ocp
