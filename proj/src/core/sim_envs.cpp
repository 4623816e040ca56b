// Copyright 2026 The hippomem Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sim_envs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "error.hpp"
#include "rng.hpp"

namespace hippomem {

std::string_view env_name(EnvId id) {
  switch (id) {
    case EnvId::kPointMass2d: return "point_mass_2d";
    case EnvId::kLander1d: return "lander_1d";
    case EnvId::kCartpole: return "cartpole";
  }
  return "unknown";
}

EnvId parse_env_id(std::string_view name) {
  for (EnvId id : all_envs()) {
    if (env_name(id) == name) return id;
  }
  fail(ErrorCode::kUnknownEnv, "unknown env_id '" + std::string(name) + "'");
}

std::vector<EnvId> all_envs() {
  return {EnvId::kPointMass2d, EnvId::kLander1d, EnvId::kCartpole};
}

std::size_t state_dim(EnvId id) {
  switch (id) {
    case EnvId::kPointMass2d: return 4;
    case EnvId::kLander1d: return 2;
    case EnvId::kCartpole: return 4;
  }
  return 0;
}

std::size_t action_dim(EnvId id) {
  switch (id) {
    case EnvId::kPointMass2d: return 2;
    case EnvId::kLander1d: return 1;
    case EnvId::kCartpole: return 1;
  }
  return 0;
}

EnvParams default_env(EnvId id) {
  EnvParams p;
  p.id = id;
  switch (id) {
    case EnvId::kPointMass2d:
      p.dt = 0.05;
      p.action_lo = {-1.0, -1.0};
      p.action_hi = {1.0, 1.0};
      p.goal = {0.0, 0.0, 0.0, 0.0};
      p.init_lo = {-2.0, -2.0, 0.0, 0.0};
      p.init_hi = {2.0, 2.0, 0.0, 0.0};
      p.sample_lo = {-3.0, -3.0, -2.0, -2.0};
      p.sample_hi = {3.0, 3.0, 2.0, 2.0};
      break;
    case EnvId::kLander1d:
      p.dt = 0.05;
      p.gravity = 0.5;
      p.action_lo = {0.0};
      p.action_hi = {1.5};
      p.goal = {10.0, 0.0};
      p.init_lo = {8.0, 0.0};
      p.init_hi = {12.0, 0.0};
      p.sample_lo = {0.0, -4.0};
      p.sample_hi = {14.0, 4.0};
      break;
    case EnvId::kCartpole:
      p.dt = 0.02;
      p.gravity = 9.8;
      p.cart_mass = 1.0;
      p.pole_mass = 0.1;
      p.pole_half_length = 0.5;
      p.action_lo = {-10.0};
      p.action_hi = {10.0};
      p.goal = {0.0, 0.0, 0.0, 0.0};
      p.init_lo = {0.0, -0.05, 0.0, 0.0};
      p.init_hi = {0.0, 0.05, 0.0, 0.0};
      p.sample_lo = {-0.3, -0.06, -0.3, -0.3};
      p.sample_hi = {0.3, 0.06, 0.3, 0.3};
      break;
  }
  return p;
}

std::vector<double> goal_state_from_target(EnvId id, std::span<const double> target) {
  std::vector<double> goal(state_dim(id), 0.0);
  const std::size_t n_pos = id == EnvId::kPointMass2d ? 2 : 1;
  if (target.size() != n_pos) {
    fail(ErrorCode::kDimensionMismatch,
         "goal for " + std::string(env_name(id)) + " needs " +
             std::to_string(n_pos) + " entries, got " + std::to_string(target.size()));
  }
  for (std::size_t i = 0; i < n_pos; ++i) goal[i] = target[i];
  return goal;
}

std::vector<double> target_from_goal_state(EnvId id, std::span<const double> goal) {
  const std::size_t n_pos = id == EnvId::kPointMass2d ? 2 : 1;
  return {goal.begin(), goal.begin() + static_cast<std::ptrdiff_t>(n_pos)};
}

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void check_dim(std::span<const double> v, std::size_t expected, const char* what) {
  if (v.size() != expected) {
    fail(ErrorCode::kDimensionMismatch, std::string(what) + " has dimension " +
                                            std::to_string(v.size()) + ", expected " +
                                            std::to_string(expected));
  }
}

}  // namespace

void validate_env(const EnvParams& p) {
  const std::size_t d = state_dim(p.id), k = action_dim(p.id);
  if (!(p.dt > 0.0) || !std::isfinite(p.dt)) {
    fail(ErrorCode::kInvalidArgument, "dt must be positive");
  }
  check_dim(p.action_lo, k, "action_lo");
  check_dim(p.action_hi, k, "action_hi");
  for (std::size_t i = 0; i < k; ++i) {
    if (!(p.action_lo[i] < p.action_hi[i])) {
      fail(ErrorCode::kInvalidArgument, "action bounds require lo < hi");
    }
  }
  check_dim(p.goal, d, "goal");
  check_dim(p.init_lo, d, "init_lo");
  check_dim(p.init_hi, d, "init_hi");
  check_dim(p.sample_lo, d, "sample_lo");
  check_dim(p.sample_hi, d, "sample_hi");
  for (std::size_t i = 0; i < d; ++i) {
    if (p.init_lo[i] > p.init_hi[i] || p.sample_lo[i] > p.sample_hi[i]) {
      fail(ErrorCode::kInvalidArgument, "state boxes require lo <= hi");
    }
  }
  if (p.id == EnvId::kCartpole &&
      !(p.cart_mass > 0.0 && p.pole_mass > 0.0 && p.pole_half_length > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "cartpole masses and length must be positive");
  }
}

StateVec reset(const EnvParams& p, uint64_t seed) {
  Rng rng(seed);
  StateVec s(state_dim(p.id));
  for (std::size_t i = 0; i < s.size(); ++i) {
    // Zero-width entries consume no draw so they stay exactly at the bound.
    s[i] = p.init_lo[i] == p.init_hi[i] ? p.init_lo[i]
                                        : rng.uniform(p.init_lo[i], p.init_hi[i]);
  }
  return s;
}

ActionVec clip_action(const EnvParams& p, std::span<const double> action) {
  check_dim(action, action_dim(p.id), "action");
  ActionVec a(action.begin(), action.end());
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = std::clamp(a[i], p.action_lo[i], p.action_hi[i]);
  }
  return a;
}

StateVec step(const EnvParams& p, std::span<const double> state,
              std::span<const double> action) {
  check_dim(state, state_dim(p.id), "state");
  const ActionVec a = clip_action(p, action);
  const double dt = p.dt;
  StateVec s(state.begin(), state.end());
  switch (p.id) {
    case EnvId::kPointMass2d:
      s[2] += a[0] * dt;
      s[3] += a[1] * dt;
      s[0] += s[2] * dt;
      s[1] += s[3] * dt;
      break;
    case EnvId::kLander1d:
      s[1] += (a[0] - p.gravity) * dt;
      s[0] += s[1] * dt;
      break;
    case EnvId::kCartpole: {
      const double theta = s[1], theta_dot = s[3];
      const double total_mass = p.cart_mass + p.pole_mass;
      const double pole_ml = p.pole_mass * p.pole_half_length;
      const double sin_t = std::sin(theta), cos_t = std::cos(theta);
      const double temp = (a[0] + pole_ml * theta_dot * theta_dot * sin_t) / total_mass;
      const double theta_acc =
          (p.gravity * sin_t - cos_t * temp) /
          (p.pole_half_length * (4.0 / 3.0 - p.pole_mass * cos_t * cos_t / total_mass));
      const double x_acc = temp - pole_ml * theta_acc * cos_t / total_mass;
      s[2] += x_acc * dt;
      s[3] += theta_acc * dt;
      s[0] += s[2] * dt;
      s[1] += s[3] * dt;
      break;
    }
  }
  return s;
}

bool is_diverged(const EnvParams& p, std::span<const double> state) {
  for (double x : state) {
    if (!std::isfinite(x) || std::abs(x) > p.divergence_bound) return true;
  }
  return false;
}

double goal_error(const EnvParams& p, std::span<const double> state) {
  check_dim(state, p.goal.size(), "state");
  double sum = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double e = state[i] - p.goal[i];
    sum += e * e;
  }
  return std::sqrt(sum);
}

void validate_termination(const TerminationSpec& term) {
  if (!(term.tolerance >= 0.0) || term.hold_steps < 1 || term.max_steps < 1) {
    fail(ErrorCode::kInvalidArgument,
         "termination requires tolerance >= 0, hold_steps >= 1, max_steps >= 1");
  }
}

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::kSuccess: return "Success";
    case Outcome::kTimeout: return "Timeout";
    case Outcome::kDiverged: return "Diverged";
  }
  return "Unknown";
}

Trajectory rollout(const EnvParams& p, const ActFn& act, const StateVec& init,
                   const TerminationSpec& term) {
  validate_termination(term);
  check_dim(init, state_dim(p.id), "initial state");
  const std::size_t k = action_dim(p.id);
  Trajectory traj;
  auto terminal = [&](int t, StateVec s, Outcome outcome) {
    ActionVec a = outcome == Outcome::kDiverged ? ActionVec(k, 0.0)
                                                : clip_action(p, act(s));
    traj.steps.push_back({t, std::move(s), std::move(a)});
    traj.outcome = outcome;
    return traj;
  };
  if (is_diverged(p, init)) return terminal(0, init, Outcome::kDiverged);

  StateVec s = init;
  int held = 0;
  for (int t = 0; t < term.max_steps; ++t) {
    ActionVec a = clip_action(p, act(s));
    if (!all_finite(a)) {
      traj.steps.push_back({t, s, a});
      traj.outcome = Outcome::kDiverged;
      return traj;
    }
    StateVec next = step(p, s, a);
    traj.steps.push_back({t, std::move(s), std::move(a)});
    s = std::move(next);
    if (is_diverged(p, s)) return terminal(t + 1, std::move(s), Outcome::kDiverged);
    held = goal_error(p, s) <= term.tolerance ? held + 1 : 0;
    if (held >= term.hold_steps) return terminal(t + 1, std::move(s), Outcome::kSuccess);
  }
  return terminal(term.max_steps, std::move(s), Outcome::kTimeout);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const std::size_t d = traj.steps.empty() ? 0 : traj.steps.front().state.size();
  const std::size_t k = traj.steps.empty() ? 0 : traj.steps.front().action.size();
  out << 't';
  for (std::size_t i = 0; i < d; ++i) out << ",s" << i;
  for (std::size_t i = 0; i < k; ++i) out << ",a" << i;
  out << '\n';
  char buf[40];
  for (const auto& row : traj.steps) {
    out << row.t;
    for (double v : row.state) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ',' << buf;
    }
    for (double v : row.action) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
  out << "# outcome=" << outcome_name(traj.outcome) << '\n';
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  write_trajectory_csv(out, traj);
  if (!out) fail(ErrorCode::kIo, "failed writing '" + path + "'");
}

}  // namespace hippomem
