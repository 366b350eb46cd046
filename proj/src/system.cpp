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

#include "se2ocp/system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace se2ocp {

SystemDef SystemDef::from_edges(std::size_t agents,
                                const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                PotentialParams params) {
  SystemDef sys;
  sys.neighbors.resize(agents);
  for (auto [i, j] : edges) {
    if (i >= agents || j >= agents || i == j) throw std::invalid_argument("bad edge");
    auto& ni = sys.neighbors[i];
    if (std::find(ni.begin(), ni.end(), j) != ni.end()) continue;
    ni.push_back(j);
    sys.neighbors[j].push_back(i);
  }
  for (auto& n : sys.neighbors) std::sort(n.begin(), n.end());
  sys.params = std::move(params);
  return sys;
}

bool SystemDef::connected() const {
  if (neighbors.empty()) return true;
  std::vector<bool> seen(neighbors.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j : neighbors[i]) {
      if (!seen[j]) {
        seen[j] = true;
        stack.push_back(j);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

void SystemDef::validate() const {
  if (params.agents() != agents()) throw std::invalid_argument("gain count != agent count");
  for (std::size_t i = 0; i < agents(); ++i) {
    for (std::size_t j : neighbors[i]) {
      const auto& nj = neighbors.at(j);
      if (std::find(nj.begin(), nj.end(), i) == nj.end()) {
        throw std::invalid_argument("graph is not undirected");
      }
    }
  }
  if (!connected()) throw std::invalid_argument("graph is not connected");
  params.validate();
}

CoAlgebraVec potential_force(std::size_t agent, std::span<const Pose> poses,
                             const AlphaState& alpha, const SystemDef& sys) {
  const PotentialParams& p = sys.params;
  CoAlgebraVec f;
  if (p.obstacle) {
    f = obstacle_force(alpha, p.sigma_obstacle[agent], p.obstacle_threshold());
  }
  if (pair_force_weight(agent) != 0.0) {
    const auto i = static_cast<Eigen::Index>(agent);
    for (std::size_t j : sys.neighbors[agent]) {
      f = f + pair_force(poses[agent], poses[j], p.sigma_pair(i, static_cast<Eigen::Index>(j)),
                         p.rbar);
    }
  }
  return f;
}

double min_pair_distance(std::span<const Pose> poses) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poses.size(); ++i) {
    for (std::size_t j = i + 1; j < poses.size(); ++j) {
      best = std::min(best, std::hypot(poses[i].x() - poses[j].x(), poses[i].y() - poses[j].y()));
    }
  }
  return best;
}

double min_obstacle_distance(std::span<const Pose> poses, const Obstacle& obstacle) {
  double best = std::numeric_limits<double>::infinity();
  for (const Pose& g : poses) {
    best = std::min(best, (g.translation() - obstacle.center).norm());
  }
  return best;
}

}  // namespace se2ocp
