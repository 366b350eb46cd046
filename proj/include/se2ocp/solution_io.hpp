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

// Solution persistence and re-verification.
//
// A solution directory holds
//   scenario.json      effective scenario, including command-line overrides
//   summary.json       kind, convergence flag and diagnostics
//   agent_<id>.csv     t,theta,x,y,u1,u2,u3,mu1,mu2,mu3,alpha1,alpha2,alpha3
//   plot.dat           the same series as whitespace-separated blocks, one
//                      block per agent separated by two blank lines
//
// Every CSV has N + 1 rows. Discrete solutions store u^k, mu^k at row k < N
// and the terminal velocity at row N. Continuous solutions of the split
// system store u = (u1, u2, 0) and mu = (u1, u2, lambda3).

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "se2ocp/continuous.hpp"
#include "se2ocp/scenario.hpp"
#include "se2ocp/solver.hpp"

namespace se2ocp {

enum class SolutionKind { discrete_bvp, continuous_ivp };

std::string_view to_string(SolutionKind kind);

struct SeriesRow {
  double t = 0.0;
  Pose g;
  AlgebraVec u;
  CoAlgebraVec mu;
  AlphaState alpha;
};

struct AgentSeries {
  std::string id;
  std::vector<SeriesRow> rows;
};

struct SolutionRecord {
  Scenario scenario;
  SolutionKind kind = SolutionKind::discrete_bvp;
  bool converged = false;
  std::string message;
  Diagnostics diagnostics;
  std::vector<AgentSeries> agents;
};

SolutionRecord make_record(const Scenario& scenario, const SolveReport& report);
SolutionRecord make_record(const Scenario& scenario, const ContinuousTrajectory& trajectory,
                           double wall_time_s);

/// Shortest decimal form that parses back to the same double, at most 17
/// significant digits.
std::string format_double(double v);
/// Throws IOError unless the whole field is a number.
double parse_double(std::string_view field);

inline constexpr std::string_view kCsvHeader =
    "t,theta,x,y,u1,u2,u3,mu1,mu2,mu3,alpha1,alpha2,alpha3";

std::string csv_file_name(const std::string& agent_id);

/// Creates dir if needed; every file is written to a temporary name and
/// renamed into place. Throws IOError.
void write_solution(const SolutionRecord& record, const std::filesystem::path& dir);
/// Throws IOError, ParseError or ValidationError.
SolutionRecord read_solution(const std::filesystem::path& dir);

struct CheckIssue {
  std::string agent;
  std::size_t step = 0;
  std::string what;
  double value = 0.0;
  double limit = 0.0;
};

struct CheckReport {
  std::vector<CheckIssue> failures;
  std::size_t checks = 0;

  bool ok() const { return failures.empty(); }
  std::optional<std::size_t> first_failing_step() const;
};

/// Re-verifies the residual and feasibility invariants of a stored solution.
/// Discrete: start poses, pose replay g^{k+1} = g^k R(h u^k), mu = u, alpha
/// propagation, interior momentum relations, endpoint residual, terminal
/// velocity and clearances. Continuous: one RK4 replay per step, alpha
/// reconstruction and clearances.
CheckReport check_solution(const SolutionRecord& record);

}  // namespace se2ocp
