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

#include "se2ocp/solution_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "se2ocp/discrete.hpp"
#include "se2ocp/errors.hpp"

namespace se2ocp {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(SolutionKind kind) {
  return kind == SolutionKind::discrete_bvp ? "discrete_bvp" : "continuous_ivp";
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view field) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw IOError("not a number: '" + std::string(field) + "'");
  }
  return v;
}

std::string csv_file_name(const std::string& agent_id) { return "agent_" + agent_id + ".csv"; }

std::optional<std::size_t> CheckReport::first_failing_step() const {
  std::optional<std::size_t> first;
  for (const auto& f : failures) {
    if (!first || f.step < *first) first = f.step;
  }
  return first;
}

SolutionRecord make_record(const Scenario& scenario, const SolveReport& report) {
  SolutionRecord rec;
  rec.scenario = scenario;
  rec.kind = SolutionKind::discrete_bvp;
  rec.converged = report.converged;
  rec.message = report.message;
  rec.diagnostics = report.diagnostics;
  const DiscreteSolution& sol = report.solution;
  const auto terminal = terminal_velocity(sol, scenario.retraction);
  for (std::size_t i = 0; i < sol.agents.size(); ++i) {
    const AgentTrack& tr = sol.agents[i];
    AgentSeries s{scenario.agents[i].id, {}};
    for (std::size_t k = 0; k <= sol.steps; ++k) {
      SeriesRow row;
      row.t = static_cast<double>(k) * sol.h;
      row.g = tr.poses[k];
      row.alpha = tr.alphas[k];
      if (k < sol.steps) {
        row.u = tr.controls[k];
        row.mu = tr.momenta[k];
      } else {
        row.u = terminal[i];
        row.mu = cost_gradient(terminal[i]);
      }
      s.rows.push_back(row);
    }
    rec.agents.push_back(std::move(s));
  }
  return rec;
}

SolutionRecord make_record(const Scenario& scenario, const ContinuousTrajectory& traj,
                           double wall_time_s) {
  SolutionRecord rec;
  rec.scenario = scenario;
  rec.kind = SolutionKind::continuous_ivp;
  rec.converged = true;
  rec.message = "integrated";
  const AlgebraVec a0 = scenario.alpha0();
  Diagnostics& d = rec.diagnostics;
  d.min_pair_distance = traj.min_pair_distance;
  d.min_obstacle_distance = traj.min_obstacle_distance;
  d.wall_time_s = wall_time_s;
  for (std::size_t i = 0; i < scenario.agents.size(); ++i) {
    AgentSeries s{scenario.agents[i].id, {}};
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      const AgentState& st = traj.states[k][i];
      SeriesRow row{traj.times[k], st.g, {st.u1, st.u2, 0.0}, {st.u1, st.u2, st.lambda3},
                    st.alpha};
      d.residual_inf =
          std::max(d.residual_inf, max_abs(st.alpha - reduced_alpha(st.g, a0)));
      s.rows.push_back(row);
    }
    for (std::size_t k = 0; k + 1 < s.rows.size(); ++k) {
      const double dt = s.rows[k + 1].t - s.rows[k].t;
      d.cost += 0.5 * dt * (control_cost(s.rows[k].u) + control_cost(s.rows[k + 1].u));
    }
    rec.agents.push_back(std::move(s));
  }
  d.residual_norm = d.residual_inf;
  return rec;
}

namespace {

void write_atomic(const fs::path& target, const std::string& content) {
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IOError("cannot create " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IOError("cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IOError("cannot rename into " + target.string());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IOError("cannot read " + path.string());
  return buf.str();
}

std::array<double, 13> row_values(const SeriesRow& r) {
  return {r.t,     r.g.theta(), r.g.x(), r.g.y(),   r.u.a,       r.u.b1,     r.u.b2,
          r.mu.m1, r.mu.m2,     r.mu.m3, r.alpha.a, r.alpha.b1, r.alpha.b2};
}

std::string series_text(const AgentSeries& s, char sep) {
  std::string out;
  for (const auto& r : s.rows) {
    const auto v = row_values(r);
    for (std::size_t c = 0; c < v.size(); ++c) {
      if (c) out += sep;
      out += format_double(v[c]);
    }
    out += '\n';
  }
  return out;
}

json diagnostics_json(const Diagnostics& d) {
  return {{"iterations", d.iterations},
          {"residual_inf", d.residual_inf},
          {"residual_norm", d.residual_norm},
          {"shooting_residual_inf", d.shooting_residual_inf},
          {"boundary_residual_inf", d.boundary_residual_inf},
          {"min_pair_distance", d.min_pair_distance},
          {"min_obstacle_distance", d.min_obstacle_distance},
          {"cost", d.cost},
          {"wall_time_s", d.wall_time_s}};
}

// JSON has no infinity; a missing obstacle or single agent stores null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or_inf(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::numeric_limits<double>::infinity();
  return j.at(key).get<double>();
}

AgentSeries read_csv(const fs::path& path, const std::string& id) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw IOError(path.string() + ": unexpected header");
  }
  AgentSeries s{id, {}};
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::array<double, 13> v{};
    std::size_t c = 0, pos = 0;
    while (true) {
      const std::size_t comma = line.find(',', pos);
      const std::string_view field =
          std::string_view(line).substr(pos, comma == std::string::npos ? std::string::npos
                                                                        : comma - pos);
      if (c >= v.size()) throw IOError(path.string() + ":" + std::to_string(lineno) + ": too many columns");
      try {
        v[c++] = parse_double(field);
      } catch (const IOError& e) {
        throw IOError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (c != v.size()) throw IOError(path.string() + ":" + std::to_string(lineno) + ": expected 13 columns");
    s.rows.push_back({v[0], Pose(v[1], v[2], v[3]), {v[4], v[5], v[6]}, {v[7], v[8], v[9]},
                      {v[10], v[11], v[12]}});
  }
  return s;
}

}  // namespace

void write_solution(const SolutionRecord& rec, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IOError("cannot create directory " + dir.string());

  json summary;
  summary["kind"] = std::string(to_string(rec.kind));
  summary["converged"] = rec.converged;
  summary["message"] = rec.message;
  summary["steps"] = rec.scenario.steps;
  summary["horizon"] = rec.scenario.horizon;
  summary["retraction"] = std::string(to_string(rec.scenario.retraction));
  summary["mode"] = std::string(to_string(rec.scenario.mode));
  json diag = diagnostics_json(rec.diagnostics);
  diag["min_pair_distance"] = finite_or_null(rec.diagnostics.min_pair_distance);
  diag["min_obstacle_distance"] = finite_or_null(rec.diagnostics.min_obstacle_distance);
  summary["diagnostics"] = diag;
  summary["agents"] = json::array();

  std::string plot = "# columns: " + std::string(kCsvHeader) + "\n";
  for (std::size_t i = 0; i < rec.agents.size(); ++i) {
    const AgentSeries& s = rec.agents[i];
    const std::string file = csv_file_name(s.id);
    write_atomic(dir / file, std::string(kCsvHeader) + "\n" + series_text(s, ','));
    summary["agents"].push_back({{"id", s.id}, {"file", file}});
    if (i) plot += "\n\n";
    plot += "# agent " + s.id + "\n" + series_text(s, ' ');
  }
  write_atomic(dir / "plot.dat", plot);
  write_atomic(dir / "scenario.json", scenario_to_json(rec.scenario));
  write_atomic(dir / "summary.json", summary.dump(2) + "\n");
}

SolutionRecord read_solution(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IOError("not a directory: " + dir.string());
  SolutionRecord rec;
  rec.scenario = parse_scenario(read_file(dir / "scenario.json"));

  json summary;
  try {
    summary = json::parse(read_file(dir / "summary.json"));
    const std::string kind = summary.at("kind").get<std::string>();
    if (kind == "discrete_bvp") {
      rec.kind = SolutionKind::discrete_bvp;
    } else if (kind == "continuous_ivp") {
      rec.kind = SolutionKind::continuous_ivp;
    } else {
      throw ParseError("summary.json: unknown kind '" + kind + "'");
    }
    rec.converged = summary.at("converged").get<bool>();
    rec.message = summary.value("message", "");
    const json& d = summary.at("diagnostics");
    Diagnostics& out = rec.diagnostics;
    out.iterations = d.at("iterations").get<int>();
    out.residual_inf = d.at("residual_inf").get<double>();
    out.residual_norm = d.at("residual_norm").get<double>();
    out.shooting_residual_inf = d.at("shooting_residual_inf").get<double>();
    out.boundary_residual_inf = d.at("boundary_residual_inf").get<double>();
    out.min_pair_distance = number_or_inf(d, "min_pair_distance");
    out.min_obstacle_distance = number_or_inf(d, "min_obstacle_distance");
    out.cost = d.at("cost").get<double>();
    out.wall_time_s = d.at("wall_time_s").get<double>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("summary.json: ") + e.what());
  }

  for (const auto& a : rec.scenario.agents) {
    rec.agents.push_back(read_csv(dir / csv_file_name(a.id), a.id));
  }
  return rec;
}

namespace {

class Checker {
 public:
  explicit Checker(CheckReport& report) : report_(report) {}

  void expect(double value, double limit, const std::string& agent, std::size_t step,
              const std::string& what) {
    ++report_.checks;
    if (!(value <= limit)) report_.failures.push_back({agent, step, what, value, limit});
  }

 private:
  CheckReport& report_;
};

double pose_gap(const Pose& a, const Pose& b) {
  return std::max({std::abs(wrap_angle(a.theta() - b.theta())), std::abs(a.x() - b.x()),
                   std::abs(a.y() - b.y())});
}

double rel_gap(const AlgebraVec& a, const AlgebraVec& b) {
  return max_abs(a - b) / (1.0 + max_abs(b));
}

void check_feasibility(const SolutionRecord& rec, Checker& chk) {
  const Scenario& sc = rec.scenario;
  const std::size_t rows = rec.agents.empty() ? 0 : rec.agents.front().rows.size();
  for (std::size_t k = 0; k < rows; ++k) {
    for (const auto& e : sc.edges) {
      const std::size_t i = *sc.index_of(e.first), j = *sc.index_of(e.second);
      const Pose& gi = rec.agents[i].rows[k].g;
      const Pose& gj = rec.agents[j].rows[k].g;
      const double d = std::hypot(gi.x() - gj.x(), gi.y() - gj.y());
      chk.expect(2.0 * sc.rbar - d, 0.0, e.first + "," + e.second, k,
                 "pair clearance (2 rbar - distance)");
    }
    if (sc.obstacle) {
      for (const auto& a : rec.agents) {
        const Pose& g = a.rows[k].g;
        const double d =
            std::hypot(g.x() - sc.obstacle->center.x(), g.y() - sc.obstacle->center.y());
        chk.expect(sc.rbar + sc.obstacle->radius - d, 0.0, a.id, k,
                   "obstacle clearance (rbar + radius - distance)");
      }
    }
  }
}

void check_discrete(const SolutionRecord& rec, Checker& chk) {
  const Scenario& sc = rec.scenario;
  const std::size_t N = sc.steps;
  const double h = sc.horizon / static_cast<double>(N);
  const RetractionKind kind = sc.retraction;
  const double tol = 10.0 * sc.solver.tol;
  const double exact = 1e-12;
  const AlgebraVec a0 = sc.alpha0();

  DiscreteSolution sol;
  sol.h = h;
  sol.steps = N;
  for (std::size_t i = 0; i < rec.agents.size(); ++i) {
    const AgentSeries& s = rec.agents[i];
    const AgentSpec& spec = sc.agents[i];
    AgentTrack tr;
    for (std::size_t k = 0; k <= N; ++k) {
      const SeriesRow& r = s.rows[k];
      chk.expect(std::abs(r.t - static_cast<double>(k) * h), exact * (1.0 + sc.horizon), s.id, k,
                 "time stamp");
      tr.poses.push_back(r.g);
      tr.alphas.push_back(r.alpha);
      if (k < N) {
        tr.controls.push_back(r.u);
        tr.momenta.push_back(r.mu);
      }
      chk.expect(max_abs(AlgebraVec{r.mu.m1, r.mu.m2, r.mu.m3} - r.u), exact * (1.0 + max_abs(r.u)),
                 s.id, k, "momentum equals cost gradient");
    }
    chk.expect(pose_gap(s.rows[0].g, spec.start), exact, s.id, 0, "start pose");
    chk.expect(max_abs(s.rows[0].alpha - reduced_alpha(spec.start, a0)), exact, s.id, 0,
               "initial alpha");
    for (std::size_t k = 0; k < N; ++k) {
      const SeriesRow& r = s.rows[k];
      const Pose next = r.g * retract(kind, h * r.u);
      chk.expect(pose_gap(next, s.rows[k + 1].g), exact * (1.0 + max_abs(r.u)), s.id, k,
                 "pose replay");
      const AlgebraVec an = evolve_alpha_discrete(r.alpha, r.u, h, kind);
      chk.expect(rel_gap(an, s.rows[k + 1].alpha), exact, s.id, k, "alpha propagation");
    }
    sol.agents.push_back(std::move(tr));
  }

  const SystemDef sys = sc.system();
  for (std::size_t k = 1; k < N; ++k) {
    try {
      const auto res = momentum_residual(k, sol, sys, kind);
      for (std::size_t i = 0; i < res.size(); ++i) {
        chk.expect(max_abs(res[i]), tol, rec.agents[i].id, k, "momentum relation");
      }
    } catch (const InfeasibleConfiguration& e) {
      chk.expect(std::numeric_limits<double>::infinity(), tol, "*", k, e.what());
    }
  }

  std::vector<Pose> goals;
  for (const auto& a : sc.agents) goals.push_back(a.goal);
  try {
    const auto end = endpoint_residual(sol, goals, kind);
    for (std::size_t i = 0; i < end.size(); ++i) {
      chk.expect(max_abs(end[i]), tol, rec.agents[i].id, N, "endpoint residual");
    }
  } catch (const OutOfDomain& e) {
    chk.expect(std::numeric_limits<double>::infinity(), tol, "*", N, e.what());
  }

  const auto terminal = terminal_velocity(sol, kind);
  for (std::size_t i = 0; i < terminal.size(); ++i) {
    chk.expect(rel_gap(rec.agents[i].rows[N].u, terminal[i]), exact, rec.agents[i].id, N,
               "terminal velocity");
  }

  if (sc.mode == ShootingMode::fixed_pose_and_velocity) {
    const ShootingProblem prob = sc.problem();
    try {
      const auto b = boundary_momentum_residuals(sol, prob.start_velocity, prob.end_velocity,
                                                 sys, kind);
      const double limit = rec.diagnostics.boundary_residual_inf * (1.0 + 1e-9) + tol;
      for (std::size_t i = 0; i < b.size(); ++i) {
        chk.expect(max_abs(b[i].first), limit, rec.agents[i].id, 0, "initial velocity relation");
        chk.expect(max_abs(b[i].second), limit, rec.agents[i].id, N, "final velocity relation");
      }
    } catch (const InfeasibleConfiguration& e) {
      chk.expect(std::numeric_limits<double>::infinity(), tol, "*", 0, e.what());
    }
  }
}

void check_continuous(const SolutionRecord& rec, Checker& chk) {
  const Scenario& sc = rec.scenario;
  const std::size_t N = sc.steps;
  const double h = sc.horizon / static_cast<double>(N);
  const double exact = 1e-12;
  const AlgebraVec a0 = sc.alpha0();
  const SystemDef sys = sc.system();

  auto state_at = [&](std::size_t k) {
    ContinuousState st;
    for (const auto& s : rec.agents) {
      const SeriesRow& r = s.rows[k];
      st.push_back({r.g, r.u.a, r.u.b1, r.mu.m3, r.alpha});
    }
    return st;
  };

  for (const auto& s : rec.agents) {
    const std::size_t i = *sc.index_of(s.id);
    chk.expect(pose_gap(s.rows[0].g, sc.agents[i].start), exact, s.id, 0, "start pose");
    chk.expect(max_abs(s.rows[0].alpha - reduced_alpha(s.rows[0].g, a0)), exact, s.id, 0,
               "initial alpha");
    for (std::size_t k = 0; k <= N; ++k) {
      const SeriesRow& r = s.rows[k];
      chk.expect(std::abs(r.t - static_cast<double>(k) * h), exact * (1.0 + sc.horizon), s.id, k,
                 "time stamp");
      chk.expect(std::max({std::abs(r.u.b2), std::abs(r.mu.m1 - r.u.a), std::abs(r.mu.m2 - r.u.b1)}),
                 0.0, s.id, k, "split control layout");
    }
  }

  for (std::size_t k = 0; k < N; ++k) {
    ContinuousState next;
    try {
      next = rk4_step(state_at(k), sys, h);
    } catch (const StepRejected& e) {
      chk.expect(std::numeric_limits<double>::infinity(), 0.0, "*", k, e.what());
      continue;
    }
    const ContinuousState stored = state_at(k + 1);
    for (std::size_t i = 0; i < next.size(); ++i) {
      const Eigen::Vector3d a{next[i].u1, next[i].u2, next[i].lambda3};
      const Eigen::Vector3d b{stored[i].u1, stored[i].u2, stored[i].lambda3};
      const double gap = std::max(pose_gap(next[i].g, stored[i].g), (a - b).cwiseAbs().maxCoeff());
      const double scale = 1.0 + std::max({std::abs(stored[i].g.x()), std::abs(stored[i].g.y()),
                                           b.cwiseAbs().maxCoeff()});
      chk.expect(gap / scale, exact, rec.agents[i].id, k + 1, "RK4 replay");
    }
  }
}

}  // namespace

CheckReport check_solution(const SolutionRecord& rec) {
  CheckReport report;
  Checker chk(report);
  const Scenario& sc = rec.scenario;
  const std::size_t expected_rows = sc.steps + 1;
  bool shape_ok = rec.agents.size() == sc.agents.size();
  chk.expect(shape_ok ? 0.0 : 1.0, 0.0, "*", 0, "agent count matches scenario");
  for (const auto& a : rec.agents) {
    const bool rows_ok = a.rows.size() == expected_rows;
    chk.expect(rows_ok ? 0.0 : 1.0, 0.0, a.id, std::min(a.rows.size(), expected_rows),
               "series has steps + 1 rows");
    shape_ok = shape_ok && rows_ok;
  }
  if (!shape_ok) return report;

  if (rec.kind == SolutionKind::discrete_bvp) {
    check_discrete(rec, chk);
  } else {
    check_continuous(rec, chk);
  }
  check_feasibility(rec, chk);
  return report;
}

}  // namespace se2ocp
