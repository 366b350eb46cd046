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

// se2ocp command-line interface.
//
// Exit codes: 0 success, 2 usage or validation error, 3 no convergence or
// failed check, 4 I/O error.

#include <chrono>
#include <fstream>
#include <sstream>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "se2ocp/continuous.hpp"
#include "se2ocp/errors.hpp"
#include "se2ocp/scenario.hpp"
#include "se2ocp/solution_io.hpp"
#include "se2ocp/solver.hpp"
#include "selftest.hpp"

namespace {

using namespace se2ocp;

constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kFailed = 3;
constexpr int kIo = 4;

struct Overrides {
  std::optional<std::size_t> steps;
  std::optional<double> tol;
  std::optional<std::string> retraction;
  std::optional<std::string> mode;
  std::uint64_t seed = 1;
  bool quiet = false;
};

Scenario load_with_overrides(const std::filesystem::path& path, const Overrides& o) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  Scenario sc = parse_scenario_unchecked(buf.str());
  if (o.steps) sc.steps = *o.steps;
  if (o.tol) sc.solver.tol = *o.tol;
  if (o.retraction) sc.retraction = parse_retraction_kind(*o.retraction);
  if (o.mode) sc.mode = parse_shooting_mode(*o.mode);
  sc.validate();
  return sc;
}

void print_diagnostics(const Diagnostics& d) {
  std::printf("  iterations            %d\n", d.iterations);
  std::printf("  residual (max)        %.3e\n", d.residual_inf);
  std::printf("  min pair distance     %.6g\n", d.min_pair_distance);
  std::printf("  min obstacle distance %.6g\n", d.min_obstacle_distance);
  std::printf("  cost                  %.10g\n", d.cost);
  std::printf("  wall time             %.3f s\n", d.wall_time_s);
}

int cmd_solve(const std::string& scenario, const std::string& out, const Overrides& o) {
  const Scenario sc = load_with_overrides(scenario, o);
  const SolveReport report = solve_bvp(sc.problem(), sc.solver);
  write_solution(make_record(sc, report), out);
  if (!o.quiet) {
    std::printf("%s: %s (%zu agents, N = %zu, %s)\n", sc.name.c_str(), report.message.c_str(),
                sc.agents.size(), sc.steps, std::string(to_string(sc.retraction)).c_str());
    print_diagnostics(report.diagnostics);
    std::printf("  written to %s\n", out.c_str());
  }
  if (!report.converged) {
    std::cerr << "error: solver did not converge: " << report.message << "\n";
    return kFailed;
  }
  return kOk;
}

int cmd_simulate(const std::string& scenario, const std::string& out, const Overrides& o) {
  const Scenario sc = load_with_overrides(scenario, o);
  const ContinuousState init = sc.initial_state();
  const auto t0 = std::chrono::steady_clock::now();
  const auto traj = simulate_ivp(init, sc.system(), sc.horizon, sc.steps);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const SolutionRecord rec = make_record(sc, traj, wall);
  write_solution(rec, out);
  if (!o.quiet) {
    std::printf("%s: integrated %zu steps over T = %g\n", sc.name.c_str(), sc.steps, sc.horizon);
    print_diagnostics(rec.diagnostics);
    std::printf("  written to %s\n", out.c_str());
  }
  return kOk;
}

int cmd_check(const std::string& dir, const Overrides& o) {
  SolutionRecord rec;
  try {
    rec = read_solution(dir);
  } catch (const ParseError& e) {
    throw IOError(std::string("malformed solution: ") + e.what());
  } catch (const ValidationError& e) {
    throw IOError(std::string("malformed solution: ") + e.what());
  }
  const CheckReport report = check_solution(rec);
  if (report.ok()) {
    if (!o.quiet) std::printf("ok: %zu checks passed\n", report.checks);
    return kOk;
  }
  constexpr std::size_t kShown = 10;
  std::cerr << "check failed at step " << *report.first_failing_step() << " ("
            << report.failures.size() << " of " << report.checks << " checks failed)\n";
  for (std::size_t i = 0; i < report.failures.size() && i < kShown; ++i) {
    const auto& f = report.failures[i];
    std::cerr << "  step " << f.step << " agent " << f.agent << ": " << f.what << " = "
              << f.value << " > " << f.limit << "\n";
  }
  return kFailed;
}

int cmd_selftest(const Overrides& o) {
  const auto results = tools::run_selftest(o.seed);
  bool ok = true;
  for (const auto& r : results) {
    ok = ok && r.passed();
    if (!o.quiet || !r.passed()) {
      std::printf("%s  %-66s %.2e (limit %.0e)\n", r.passed() ? "PASS" : "FAIL", r.name.c_str(),
                  r.max_error, r.limit);
    }
  }
  return ok ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal multi-agent trajectories on SE(2)", "se2ocp"};
  app.require_subcommand(1);
  Overrides o;

  std::size_t steps = 0;
  double tol = 0.0;
  std::string retraction, mode;
  auto* steps_opt = app.add_option("--steps", steps, "number of time steps N")
                        ->check(CLI::PositiveNumber);
  auto* tol_opt = app.add_option("--tol", tol, "solver tolerance")->check(CLI::PositiveNumber);
  auto* ret_opt = app.add_option("--retraction", retraction, "cayley or exp")
                      ->check(CLI::IsMember({"cayley", "exp"}));
  auto* mode_opt = app.add_option("--mode", mode, "fixed_pose or fixed_pose_and_velocity")
                       ->check(CLI::IsMember({"fixed_pose", "fixed_pose_and_velocity"}));
  app.add_option("--seed", o.seed, "seed for the randomized self test");
  app.add_flag("--quiet,-q", o.quiet, "print errors only");

  std::string scenario, out, dir;
  auto* solve = app.add_subcommand("solve", "solve the discrete boundary-value problem");
  solve->add_option("scenario", scenario, "scenario JSON file")->required();
  solve->add_option("-o,--output", out, "output directory")->required();
  auto* simulate = app.add_subcommand("simulate", "integrate the continuous equations forward");
  simulate->add_option("scenario", scenario, "scenario JSON file")->required();
  simulate->add_option("-o,--output", out, "output directory")->required();
  auto* check = app.add_subcommand("check", "re-verify a stored solution");
  check->add_option("dir", dir, "solution directory")->required();
  auto* selftest = app.add_subcommand("selftest", "run the randomized property checks");
  for (auto* sub : {solve, simulate, check, selftest}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    if (rc != 0) std::cerr << app.help();
    return rc == 0 ? kOk : kUsage;
  }
  if (*steps_opt) o.steps = steps;
  if (*tol_opt) o.tol = tol;
  if (*ret_opt) o.retraction = retraction;
  if (*mode_opt) o.mode = mode;

  try {
    if (*solve) return cmd_solve(scenario, out, o);
    if (*simulate) return cmd_simulate(scenario, out, o);
    if (*check) return cmd_check(dir, o);
    return cmd_selftest(o);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IOError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kFailed;
  }
}
