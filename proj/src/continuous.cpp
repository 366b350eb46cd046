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

#include "se2ocp/continuous.hpp"

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "se2ocp/errors.hpp"

namespace se2ocp {

namespace {

constexpr Eigen::Index kSlots = 9;  // theta x y | w1 w2 w3 | alpha

// Per-agent packing: (theta, x, y, w, alpha) where w = (u1, u2, lambda3) for
// the split system and w = u for the fully actuated one.
struct SplitTraits {
  using State = ContinuousState;

  static void pack(const State& s, Eigen::VectorXd& y) {
    y.resize(kSlots * static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) {
      const AgentState& a = s[i];
      y.segment<kSlots>(kSlots * static_cast<Eigen::Index>(i)) << a.g.theta(), a.g.x(), a.g.y(),
          a.u1, a.u2, a.lambda3, a.alpha.a, a.alpha.b1, a.alpha.b2;
    }
  }
  static State unpack(const Eigen::VectorXd& y) {
    State s(static_cast<std::size_t>(y.size() / kSlots));
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto v = y.segment<kSlots>(kSlots * static_cast<Eigen::Index>(i));
      s[i] = {Pose(v[0], v[1], v[2]), v[3], v[4], v[5], {v[6], v[7], v[8]}};
    }
    return s;
  }
  static Eigen::VectorXd rates(const State& s, const SystemDef& sys) {
    const auto r = ep_rhs(s, sys);
    Eigen::VectorXd d(kSlots * static_cast<Eigen::Index>(r.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
      d.segment<kSlots>(kSlots * static_cast<Eigen::Index>(i)) << r[i].theta, r[i].x, r[i].y,
          r[i].u1, r[i].u2, r[i].lambda3, r[i].alpha.a, r[i].alpha.b1, r[i].alpha.b2;
    }
    return d;
  }
};

struct FullTraits {
  using State = FullContinuousState;

  static void pack(const State& s, Eigen::VectorXd& y) {
    y.resize(kSlots * static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) {
      const FullAgentState& a = s[i];
      y.segment<kSlots>(kSlots * static_cast<Eigen::Index>(i)) << a.g.theta(), a.g.x(), a.g.y(),
          a.u.a, a.u.b1, a.u.b2, a.alpha.a, a.alpha.b1, a.alpha.b2;
    }
  }
  static State unpack(const Eigen::VectorXd& y) {
    State s(static_cast<std::size_t>(y.size() / kSlots));
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto v = y.segment<kSlots>(kSlots * static_cast<Eigen::Index>(i));
      s[i] = {Pose(v[0], v[1], v[2]), {v[3], v[4], v[5]}, {v[6], v[7], v[8]}};
    }
    return s;
  }
  static Eigen::VectorXd rates(const State& s, const SystemDef& sys) {
    const auto r = ep_rhs_full(s, sys);
    Eigen::VectorXd d(kSlots * static_cast<Eigen::Index>(r.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
      d.segment<kSlots>(kSlots * static_cast<Eigen::Index>(i)) << r[i].theta, r[i].x, r[i].y,
          r[i].u.a, r[i].u.b1, r[i].u.b2, r[i].alpha.a, r[i].alpha.b1, r[i].alpha.b2;
    }
    return d;
  }
};

template <typename Traits>
typename Traits::State rk4(const typename Traits::State& state, const SystemDef& sys, double h,
                           std::size_t step) {
  if (h == 0.0) return state;
  Eigen::VectorXd y;
  Traits::pack(state, y);
  auto f = [&](const Eigen::VectorXd& z) { return Traits::rates(Traits::unpack(z), sys); };
  try {
    const Eigen::VectorXd k1 = f(y);
    const Eigen::VectorXd k2 = f(y + 0.5 * h * k1);
    const Eigen::VectorXd k3 = f(y + 0.5 * h * k2);
    const Eigen::VectorXd k4 = f(y + h * k3);
    return Traits::unpack(y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
  } catch (const InfeasibleConfiguration& e) {
    throw StepRejected(step, e.what());
  }
}

template <typename State>
std::vector<Pose> poses_of(const State& s) {
  std::vector<Pose> g;
  g.reserve(s.size());
  for (const auto& a : s) g.push_back(a.g);
  return g;
}

template <typename Traits>
Trajectory<typename Traits::State> simulate(const typename Traits::State& initial,
                                            const SystemDef& sys, double T, std::size_t N) {
  if (N == 0) throw std::invalid_argument("simulate_ivp needs N >= 1");
  if (!(T >= 0.0)) throw std::invalid_argument("simulate_ivp needs T >= 0");
  if (initial.size() != sys.agents()) throw std::invalid_argument("state/system size mismatch");
  if (!split_is_admissible()) throw std::logic_error("se(2) split relations violated");

  Trajectory<typename Traits::State> traj;
  traj.min_pair_distance = std::numeric_limits<double>::infinity();
  traj.min_obstacle_distance = std::numeric_limits<double>::infinity();
  auto record = [&](double t, const typename Traits::State& s) {
    const auto g = poses_of(s);
    traj.min_pair_distance = std::min(traj.min_pair_distance, min_pair_distance(g));
    if (sys.params.obstacle) {
      traj.min_obstacle_distance =
          std::min(traj.min_obstacle_distance, min_obstacle_distance(g, *sys.params.obstacle));
    }
    traj.times.push_back(t);
    traj.states.push_back(s);
  };

  record(0.0, initial);
  if (T == 0.0) return traj;
  const double h = T / static_cast<double>(N);
  typename Traits::State s = initial;
  for (std::size_t k = 0; k < N; ++k) {
    s = rk4<Traits>(s, sys, h, k);
    record(static_cast<double>(k + 1) * h, s);
  }
  return traj;
}

}  // namespace

bool split_is_admissible() {
  const AlgebraVec e1{1, 0, 0}, e2{0, 1, 0}, e3{0, 0, 1};
  auto in_s = [](const AlgebraVec& v) { return v.a == 0.0 && v.b1 == 0.0; };
  auto in_r = [](const AlgebraVec& v) { return v.b2 == 0.0; };
  return in_s(bracket(e1, e2)) && in_r(bracket(e1, e3)) && in_r(bracket(e2, e3)) &&
         max_abs(bracket(e3, e3)) == 0.0;
}

AgentState make_agent_state(const Pose& g, double u1, double u2, double lambda3,
                            const AlgebraVec& alpha0) {
  return {g, u1, u2, lambda3, reduced_alpha(g, alpha0)};
}

std::vector<AgentRate> ep_rhs(const ContinuousState& state, const SystemDef& sys) {
  const auto poses = poses_of(state);
  std::vector<AgentRate> rates(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    const AgentState& s = state[i];
    const CoAlgebraVec f = potential_force(i, poses, s.alpha, sys);
    const AlgebraVec u{s.u1, s.u2, 0.0};
    AgentRate& r = rates[i];
    r.theta = s.u1;
    r.x = s.u2 * std::cos(s.g.theta());
    r.y = s.u2 * std::sin(s.g.theta());
    r.u1 = -0.5 * s.u2 * s.lambda3 + f.m1;
    r.u2 = s.u1 * s.lambda3 + f.m2;
    r.lambda3 = -s.u1 * s.u2 + f.m3;
    r.alpha = evolve_alpha_continuous(s.alpha, u);
  }
  return rates;
}

std::vector<FullAgentRate> ep_rhs_full(const FullContinuousState& state, const SystemDef& sys) {
  const auto poses = poses_of(state);
  std::vector<FullAgentRate> rates(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    const FullAgentState& s = state[i];
    const CoAlgebraVec f = potential_force(i, poses, s.alpha, sys);
    const CoAlgebraVec du = coadjoint_star(s.u, cost_gradient(s.u)) + f;
    const double c = std::cos(s.g.theta()), sn = std::sin(s.g.theta());
    FullAgentRate& r = rates[i];
    r.theta = s.u.a;
    r.x = c * s.u.b1 - sn * s.u.b2;
    r.y = sn * s.u.b1 + c * s.u.b2;
    r.u = {du.m1, du.m2, du.m3};
    r.alpha = evolve_alpha_continuous(s.alpha, s.u);
  }
  return rates;
}

ContinuousState rk4_step(const ContinuousState& state, const SystemDef& sys, double h) {
  return rk4<SplitTraits>(state, sys, h, 0);
}

FullContinuousState rk4_step_full(const FullContinuousState& state, const SystemDef& sys,
                                  double h) {
  return rk4<FullTraits>(state, sys, h, 0);
}

ContinuousTrajectory simulate_ivp(const ContinuousState& initial, const SystemDef& sys, double T,
                                  std::size_t N) {
  return simulate<SplitTraits>(initial, sys, T, N);
}

FullContinuousTrajectory simulate_ivp_full(const FullContinuousState& initial,
                                           const SystemDef& sys, double T, std::size_t N) {
  return simulate<FullTraits>(initial, sys, T, N);
}

}  // namespace se2ocp
