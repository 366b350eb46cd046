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

// Continuous-time reduced optimality conditions on SE(2), integrated as an
// initial-value problem with fixed-step RK4.
//
// The split system keeps controls on r = span{e1, e2} and the multiplier on
// s = span{e3}:
//
//   u1'      = -u2 lambda3 / 2
//   u2'      =  u1 lambda3 + F2
//   lambda3' = -u1 u2      + F3
//   alpha'   = -ad_u alpha,   theta' = u1,  x' = u2 cos(theta),  y' = u2 sin(theta)
//
// with F the potential force of system.hpp. The fully actuated variant
// u' = ad*_u u + F is the continuous limit of the discrete scheme and serves
// as its reference solution.

#pragma once

#include <cstddef>
#include <vector>

#include "se2ocp/algebra.hpp"
#include "se2ocp/potentials.hpp"
#include "se2ocp/system.hpp"

namespace se2ocp {

struct AgentState {
  Pose g;
  double u1 = 0.0;
  double u2 = 0.0;
  double lambda3 = 0.0;
  AlphaState alpha;
};
using ContinuousState = std::vector<AgentState>;

struct AgentRate {
  double theta = 0.0, x = 0.0, y = 0.0;
  double u1 = 0.0, u2 = 0.0, lambda3 = 0.0;
  AlgebraVec alpha;
};

/// Fully actuated agent: u has all three coordinates and mu = u.
struct FullAgentState {
  Pose g;
  AlgebraVec u;
  AlphaState alpha;
};
using FullContinuousState = std::vector<FullAgentState>;

struct FullAgentRate {
  double theta = 0.0, x = 0.0, y = 0.0;
  AlgebraVec u;
  AlgebraVec alpha;
};

template <typename State>
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  double min_pair_distance = 0.0;
  double min_obstacle_distance = 0.0;
};
using ContinuousTrajectory = Trajectory<ContinuousState>;
using FullContinuousTrajectory = Trajectory<FullContinuousState>;

/// Checks [r,r] in s, [r,s] in r, [s,s] = 0 for r = span{e1,e2}, s = span{e3}.
bool split_is_admissible();

/// Initial state for one agent with alpha = Ad_{g^-1} alpha0.
AgentState make_agent_state(const Pose& g, double u1, double u2, double lambda3,
                            const AlgebraVec& alpha0);

std::vector<AgentRate> ep_rhs(const ContinuousState& state, const SystemDef& sys);
std::vector<FullAgentRate> ep_rhs_full(const FullContinuousState& state, const SystemDef& sys);

/// Classical RK4 step of all agents at once. Throws StepRejected(0, ...) if a
/// stage lands on a potential pole.
ContinuousState rk4_step(const ContinuousState& state, const SystemDef& sys, double h);
FullContinuousState rk4_step_full(const FullContinuousState& state, const SystemDef& sys,
                                  double h);

/// N fixed steps over [0, T]; returns the N + 1 samples t_k = k T / N, or the
/// initial state alone when T = 0. StepRejected carries the failing step.
ContinuousTrajectory simulate_ivp(const ContinuousState& initial, const SystemDef& sys, double T,
                                  std::size_t N);
FullContinuousTrajectory simulate_ivp_full(const FullContinuousState& initial,
                                           const SystemDef& sys, double T, std::size_t N);

}  // namespace se2ocp
