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

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "sim_envs.hpp"

namespace hippomem {

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  double lo = -1.0;
  double hi = 1.0;
};

struct PidState {
  double integral = 0.0;
  double prev_error = 0.0;
};

struct PidOutput {
  double action;
  PidState state;
};

// Textbook three-term update. Kept for closed-loop baselines; dataset
// oracles use the stateless form in controller_action().
PidOutput pid_step(const PidGains& gains, const PidState& st, double error, double dt);

// Discrete-time problem x' = A x + B u with stage cost x'Qx + u'Ru.
struct LqrProblem {
  Eigen::MatrixXd A, B, Q, R;
};

struct LqrSolution {
  Eigen::MatrixXd K;  // k x d
  Eigen::MatrixXd P;  // d x d
  int iterations = 0;
};

inline constexpr double kRiccatiTol = 1e-10;
inline constexpr int kRiccatiMaxIter = 100000;

// Fixed-point iteration of the discrete algebraic Riccati equation from
// P0 = Q until the max-abs change is <= tol. Throws kNonConvergence or
// kNotPositiveDefinite.
LqrSolution lqr_solve(const LqrProblem& prob, double tol = kRiccatiTol,
                      int max_iter = kRiccatiMaxIter);
Eigen::MatrixXd lqr_gain(const LqrProblem& prob, double tol = kRiccatiTol,
                         int max_iter = kRiccatiMaxIter);

// Right-hand side of the Riccati map, exposed for residual checks.
Eigen::MatrixXd riccati_map(const LqrProblem& prob, const Eigen::MatrixXd& P);

struct LinearModel {
  Eigen::MatrixXd A, B;
};

// Exact linearization of step() about the goal state with zero action.
// Available for point_mass_2d and cartpole (the upright equilibrium).
LinearModel linearize(const EnvParams& env);

enum class ControllerKind { kPd, kLqr };

// One PD channel: action[i] = kp*(goal[pos] - s[pos]) - kd*(s[vel] - goal[vel]) + ff.
struct PdAxis {
  std::size_t pos_index = 0;
  std::size_t vel_index = 0;
  double feedforward = 0.0;
};

struct ControllerSpec {
  ControllerKind kind = ControllerKind::kPd;
  double kp = 0.0;
  double kd = 0.0;
  std::vector<PdAxis> axes;  // kPd, one per action entry
  Eigen::MatrixXd K;         // kLqr, k x d

  // Tuning inputs recorded for persistence.
  std::vector<double> lqr_q_diag;
  std::vector<double> lqr_r_diag;
};

// PD on position error with the velocity entry as derivative. lander_1d adds
// +gravity feedforward.
ControllerSpec make_pd_controller(const EnvParams& env, double kp, double kd);
ControllerSpec make_lqr_controller(const EnvParams& env, std::span<const double> q_diag,
                                   std::span<const double> r_diag);

// The stateless oracle mapping P(s), clipped to the env's action bounds.
ActionVec controller_action(const ControllerSpec& spec, const EnvParams& env,
                            std::span<const double> state);

}  // namespace hippomem
