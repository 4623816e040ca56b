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

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hippomem {

using StateVec = std::vector<double>;
using ActionVec = std::vector<double>;

enum class EnvId { kPointMass2d, kLander1d, kCartpole };

std::string_view env_name(EnvId id);
EnvId parse_env_id(std::string_view name);  // throws kUnknownEnv
std::vector<EnvId> all_envs();

// Physical constants, bounds and task target for one environment instance.
// State layouts:
//   point_mass_2d  [x, y, vx, vy]
//   lander_1d      [z, v]
//   cartpole       [x, theta, x_dot, theta_dot]
struct EnvParams {
  EnvId id = EnvId::kPointMass2d;
  double dt = 0.05;
  double gravity = 0.0;
  double cart_mass = 0.0;
  double pole_mass = 0.0;
  double pole_half_length = 0.0;
  std::vector<double> action_lo;
  std::vector<double> action_hi;
  // Full goal state; goal error is the Euclidean norm of (state - goal).
  std::vector<double> goal;
  // Box for reset().
  std::vector<double> init_lo;
  std::vector<double> init_hi;
  // Box used for dataset grids (not a constraint on the dynamics).
  std::vector<double> sample_lo;
  std::vector<double> sample_hi;
  double divergence_bound = 1e3;

  bool operator==(const EnvParams&) const = default;
};

EnvParams default_env(EnvId id);
std::size_t state_dim(EnvId id);
std::size_t action_dim(EnvId id);
inline std::size_t state_dim(const EnvParams& p) { return state_dim(p.id); }
inline std::size_t action_dim(const EnvParams& p) { return action_dim(p.id); }

// Maps a task-level target (point_mass_2d: [gx, gy]; lander_1d: [z];
// cartpole: [x]) onto a full goal state with zero velocities.
std::vector<double> goal_state_from_target(EnvId id, std::span<const double> target);
std::vector<double> target_from_goal_state(EnvId id, std::span<const double> goal);

void validate_env(const EnvParams& p);  // throws kInvalidArgument

StateVec reset(const EnvParams& p, uint64_t seed);
ActionVec clip_action(const EnvParams& p, std::span<const double> action);

// Semi-implicit Euler: velocities advance with the clipped action first,
// positions then advance with the new velocities.
StateVec step(const EnvParams& p, std::span<const double> state,
              std::span<const double> action);

bool is_diverged(const EnvParams& p, std::span<const double> state);
double goal_error(const EnvParams& p, std::span<const double> state);

struct TerminationSpec {
  double tolerance = 0.05;
  int hold_steps = 10;
  int max_steps = 400;

  bool operator==(const TerminationSpec&) const = default;
};

void validate_termination(const TerminationSpec& term);

enum class Outcome { kSuccess, kTimeout, kDiverged };
std::string_view outcome_name(Outcome o);

struct TrajectoryStep {
  int t = 0;
  StateVec state;
  ActionVec action;

  bool operator==(const TrajectoryStep&) const = default;
};

// The final entry holds the terminal state; its action is what act_fn
// returns there (not applied), or zeros when the terminal state diverged.
struct Trajectory {
  std::vector<TrajectoryStep> steps;
  Outcome outcome = Outcome::kTimeout;

  int steps_taken() const { return steps.empty() ? 0 : steps.back().t; }
  const StateVec& final_state() const { return steps.back().state; }
  bool operator==(const Trajectory&) const = default;
};

using ActFn = std::function<ActionVec(std::span<const double>)>;

Trajectory rollout(const EnvParams& p, const ActFn& act, const StateVec& init,
                   const TerminationSpec& term);

// Header `t,s0..,a0..`, %.17g floats, trailing `# outcome=<...>` line.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

}  // namespace hippomem
