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

#include "se2ocp/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "se2ocp/errors.hpp"

namespace se2ocp {

using nlohmann::json;

ValidationError::ValidationError(std::vector<ValidationIssue> issues)
    : Error([&] {
        std::string msg = "invalid scenario:";
        for (const auto& i : issues) msg += "\n  [" + i.code + "] " + i.message;
        return msg;
      }()),
      issues_(std::move(issues)) {}

bool ValidationError::has(const std::string& code) const {
  for (const auto& i : issues_) {
    if (i.code == code) return true;
  }
  return false;
}

namespace {

// Field access with a dotted path for error messages.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("field '" + (path_.empty() ? std::string("<root>") : path_) + "': " + what);
  }

  void expect_object(std::initializer_list<std::string_view> allowed) const {
    if (!j_.is_object()) fail("expected an object");
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      bool ok = false;
      for (auto a : allowed) ok = ok || it.key() == a;
      if (!ok) Reader(it.value(), child_path(it.key())).fail("unknown field");
    }
  }

  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  Reader at(const std::string& key) const {
    if (!j_.contains(key)) Reader(j_, child_path(key)).fail("missing");
    return {j_.at(key), child_path(key)};
  }

  Reader index(std::size_t i) const {
    return {j_.at(i), path_ + "[" + std::to_string(i) + "]"};
  }

  double number() const {
    if (!j_.is_number()) fail("expected a number");
    const double v = j_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }

  std::size_t count() const {
    if (!j_.is_number_integer() && !j_.is_number_unsigned()) fail("expected an integer");
    const auto v = j_.get<long long>();
    if (v < 0) fail("expected a nonnegative integer");
    return static_cast<std::size_t>(v);
  }

  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }

  std::size_t array_size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }

 private:
  std::string child_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& j_;
  std::string path_;
};

Pose read_pose(const Reader& r) {
  r.expect_object({"theta", "x", "y"});
  return Pose(r.at("theta").number(), r.at("x").number(), r.at("y").number());
}

AlgebraVec read_vec3(const Reader& r) {
  if (r.array_size() != 3) r.fail("expected 3 numbers");
  return {r.index(0).number(), r.index(1).number(), r.index(2).number()};
}

template <typename F>
auto translate_errors(const Reader& r, F&& f) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    r.fail(e.what());
  }
}

json pose_json(const Pose& g) { return {{"theta", g.theta()}, {"x", g.x()}, {"y", g.y()}}; }
json vec_json(const AlgebraVec& v) { return json::array({v.a, v.b1, v.b2}); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::optional<std::size_t> Scenario::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (agents[i].id == id) return i;
  }
  return std::nullopt;
}

std::vector<ValidationIssue> Scenario::issues() const {
  std::vector<ValidationIssue> out;
  auto add = [&](std::string code, std::string msg) {
    out.push_back({std::move(code), std::move(msg)});
  };

  if (agents.empty()) add("no_agents", "scenario has no agents");
  if (steps < 1) add("bad_steps", "steps must be >= 1");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) add("bad_horizon", "horizon must be > 0");
  if (!(rbar > 0.0)) add("rbar_nonpositive", "rbar must be > 0");
  if (obstacle && !(obstacle->radius >= 0.0)) {
    add("negative_radius", "obstacle radius must be >= 0");
  }
  try {
    solver.validate();
  } catch (const std::invalid_argument& e) {
    add("bad_solver_options", e.what());
  }

  std::set<std::string> ids;
  for (const auto& a : agents) {
    const bool id_ok = !a.id.empty() && std::all_of(a.id.begin(), a.id.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    });
    if (!id_ok) add("bad_id", "agent id '" + a.id + "' must be non-empty [A-Za-z0-9_-]");
    if (!ids.insert(a.id).second) add("duplicate_id", "duplicate agent id '" + a.id + "'");
    if (!(a.sigma_obstacle >= 0.0)) {
      add("negative_gain", "agent '" + a.id + "' has a negative obstacle gain");
    }
    if (mode == ShootingMode::fixed_pose_and_velocity &&
        (!a.start_velocity || !a.end_velocity)) {
      add("missing_velocity", "agent '" + a.id + "' needs start_velocity and end_velocity");
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> resolved;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : edges) {
    const auto i = index_of(e.first), j = index_of(e.second);
    const std::string name = "(" + e.first + ", " + e.second + ")";
    if (!i || !j) {
      add("unknown_agent", "edge " + name + " references an unknown agent");
      continue;
    }
    if (*i == *j) {
      add("self_edge", "edge " + name + " joins an agent to itself");
      continue;
    }
    if (!seen.insert(std::minmax(*i, *j)).second) {
      add("duplicate_edge", "edge " + name + " is listed twice");
      continue;
    }
    if (!(e.sigma >= 0.0)) add("negative_gain", "edge " + name + " has a negative gain");
    resolved.emplace_back(*i, *j);
  }
  if (!agents.empty() && !SystemDef::from_edges(agents.size(), resolved, {}).connected()) {
    add("graph_disconnected", "interaction graph is not connected");
  }

  if (rbar > 0.0) {
    for (auto [i, j] : resolved) {
      const auto& a = agents[i];
      const auto& b = agents[j];
      const double ds = std::hypot(a.start.x() - b.start.x(), a.start.y() - b.start.y());
      if (!(ds > 2.0 * rbar)) {
        add("start_collision", "start poses of '" + a.id + "' and '" + b.id + "' are " +
                                   fmt(ds) + " apart, need > " + fmt(2.0 * rbar));
      }
      const double dg = std::hypot(a.goal.x() - b.goal.x(), a.goal.y() - b.goal.y());
      if (!(dg > 2.0 * rbar)) {
        add("goal_collision", "goal poses of '" + a.id + "' and '" + b.id + "' are " + fmt(dg) +
                                  " apart, need > " + fmt(2.0 * rbar));
      }
    }
    if (obstacle && obstacle->radius >= 0.0) {
      const double clear = rbar + obstacle->radius;
      for (const auto& a : agents) {
        const Eigen::Vector2d c = obstacle->center;
        const double ds = std::hypot(a.start.x() - c.x(), a.start.y() - c.y());
        const double dg = std::hypot(a.goal.x() - c.x(), a.goal.y() - c.y());
        if (!(ds > clear)) {
          add("start_in_obstacle", "start of '" + a.id + "' is " + fmt(ds) +
                                       " from the obstacle centre, need > " + fmt(clear));
        }
        if (!(dg > clear)) {
          add("goal_in_obstacle", "goal of '" + a.id + "' is " + fmt(dg) +
                                      " from the obstacle centre, need > " + fmt(clear));
        }
      }
    }
  }
  return out;
}

void Scenario::validate() const {
  auto list = issues();
  if (!list.empty()) throw ValidationError(std::move(list));
}

SystemDef Scenario::system() const {
  const std::size_t n = agents.size();
  PotentialParams p;
  p.sigma_pair = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                       static_cast<Eigen::Index>(n));
  p.rbar = rbar;
  p.obstacle = obstacle;
  std::vector<std::pair<std::size_t, std::size_t>> edge_list;
  for (const auto& e : edges) {
    const std::size_t i = *index_of(e.first), j = *index_of(e.second);
    const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
    p.sigma_pair(ii, jj) = p.sigma_pair(jj, ii) = e.sigma;
    edge_list.emplace_back(i, j);
  }
  for (const auto& a : agents) p.sigma_obstacle.push_back(a.sigma_obstacle);
  return SystemDef::from_edges(n, edge_list, std::move(p));
}

AlgebraVec Scenario::alpha0() const {
  return obstacle ? obstacle_alpha0(obstacle->center) : AlgebraVec{1.0, 0.0, 0.0};
}

ShootingProblem Scenario::problem() const {
  ShootingProblem prob;
  prob.sys = system();
  prob.alpha0 = alpha0();
  prob.horizon = horizon;
  prob.steps = steps;
  prob.kind = retraction;
  prob.mode = mode;
  for (const auto& a : agents) {
    prob.starts.push_back(a.start);
    prob.goals.push_back(a.goal);
    if (mode == ShootingMode::fixed_pose_and_velocity) {
      prob.start_velocity.push_back(*a.start_velocity);
      prob.end_velocity.push_back(*a.end_velocity);
    }
  }
  return prob;
}

ContinuousState Scenario::initial_state() const {
  std::vector<ValidationIssue> list;
  ContinuousState state;
  const AlgebraVec a0 = alpha0();
  for (const auto& a : agents) {
    if (!a.start_velocity || !a.lambda3) {
      list.push_back({"missing_initial_state",
                      "agent '" + a.id + "' needs start_velocity and lambda3 to simulate"});
      continue;
    }
    if (a.start_velocity->b2 != 0.0) {
      list.push_back({"missing_initial_state",
                      "agent '" + a.id + "' start_velocity must have u3 = 0 to simulate"});
      continue;
    }
    state.push_back(
        make_agent_state(a.start, a.start_velocity->a, a.start_velocity->b1, *a.lambda3, a0));
  }
  if (!list.empty()) throw ValidationError(std::move(list));
  return state;
}

Scenario parse_scenario_unchecked(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                     ": malformed JSON");
  }

  const Reader root(doc, "");
  root.expect_object({"name", "horizon", "steps", "retraction", "mode", "rbar", "obstacle",
                      "agents", "edges", "solver"});
  Scenario sc;
  if (root.has("name")) sc.name = root.at("name").string();
  sc.horizon = root.at("horizon").number();
  sc.steps = root.at("steps").count();
  sc.rbar = root.at("rbar").number();
  if (root.has("retraction")) {
    const Reader r = root.at("retraction");
    sc.retraction = translate_errors(r, [&] { return parse_retraction_kind(r.string()); });
  }
  if (root.has("mode")) {
    const Reader r = root.at("mode");
    sc.mode = translate_errors(r, [&] { return parse_shooting_mode(r.string()); });
  }
  if (root.has("obstacle")) {
    const Reader o = root.at("obstacle");
    o.expect_object({"center", "radius"});
    const Reader c = o.at("center");
    if (c.array_size() != 2) c.fail("expected 2 numbers");
    Obstacle obs;
    obs.center = {c.index(0).number(), c.index(1).number()};
    obs.radius = o.at("radius").number();
    sc.obstacle = obs;
  }

  const Reader agents = root.at("agents");
  for (std::size_t i = 0; i < agents.array_size(); ++i) {
    const Reader a = agents.index(i);
    a.expect_object({"id", "start", "goal", "sigma_obstacle", "start_velocity", "end_velocity",
                     "lambda3"});
    AgentSpec spec;
    spec.id = a.at("id").string();
    spec.start = read_pose(a.at("start"));
    spec.goal = read_pose(a.at("goal"));
    if (a.has("sigma_obstacle")) spec.sigma_obstacle = a.at("sigma_obstacle").number();
    if (a.has("start_velocity")) spec.start_velocity = read_vec3(a.at("start_velocity"));
    if (a.has("end_velocity")) spec.end_velocity = read_vec3(a.at("end_velocity"));
    if (a.has("lambda3")) spec.lambda3 = a.at("lambda3").number();
    sc.agents.push_back(std::move(spec));
  }

  if (root.has("edges")) {
    const Reader edges = root.at("edges");
    for (std::size_t i = 0; i < edges.array_size(); ++i) {
      const Reader e = edges.index(i);
      e.expect_object({"between", "sigma"});
      const Reader b = e.at("between");
      if (b.array_size() != 2) b.fail("expected two agent ids");
      sc.edges.push_back({b.index(0).string(), b.index(1).string(), e.at("sigma").number()});
    }
  }

  if (root.has("solver")) {
    const Reader s = root.at("solver");
    s.expect_object({"tol", "max_outer_iters", "fd_step", "initial_guess"});
    if (s.has("tol")) sc.solver.tol = s.at("tol").number();
    if (s.has("max_outer_iters")) {
      sc.solver.max_outer_iters = static_cast<int>(s.at("max_outer_iters").count());
    }
    if (s.has("fd_step")) sc.solver.fd_step = s.at("fd_step").number();
    if (s.has("initial_guess")) {
      const Reader r = s.at("initial_guess");
      sc.solver.initial_guess = translate_errors(r, [&] { return parse_initial_guess(r.string()); });
    }
  }
  return sc;
}

Scenario parse_scenario(std::string_view text) {
  Scenario sc = parse_scenario_unchecked(text);
  sc.validate();
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IOError("cannot read " + path.string());
  return parse_scenario(buf.str());
}

std::string scenario_to_json(const Scenario& sc) {
  json j;
  j["name"] = sc.name;
  j["horizon"] = sc.horizon;
  j["steps"] = sc.steps;
  j["retraction"] = std::string(to_string(sc.retraction));
  j["mode"] = std::string(to_string(sc.mode));
  j["rbar"] = sc.rbar;
  if (sc.obstacle) {
    j["obstacle"] = {{"center", {sc.obstacle->center.x(), sc.obstacle->center.y()}},
                     {"radius", sc.obstacle->radius}};
  } else {
    j["obstacle"] = nullptr;
  }
  j["agents"] = json::array();
  for (const auto& a : sc.agents) {
    json aj = {{"id", a.id},
               {"start", pose_json(a.start)},
               {"goal", pose_json(a.goal)},
               {"sigma_obstacle", a.sigma_obstacle}};
    if (a.start_velocity) aj["start_velocity"] = vec_json(*a.start_velocity);
    if (a.end_velocity) aj["end_velocity"] = vec_json(*a.end_velocity);
    if (a.lambda3) aj["lambda3"] = *a.lambda3;
    j["agents"].push_back(std::move(aj));
  }
  j["edges"] = json::array();
  for (const auto& e : sc.edges) {
    j["edges"].push_back({{"between", {e.first, e.second}}, {"sigma", e.sigma}});
  }
  j["solver"] = {{"tol", sc.solver.tol},
                 {"max_outer_iters", sc.solver.max_outer_iters},
                 {"fd_step", sc.solver.fd_step},
                 {"initial_guess", std::string(to_string(sc.solver.initial_guess))}};
  return j.dump(2) + "\n";
}

}  // namespace se2ocp
