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

#include "classical_control.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace hippomem {

PidOutput pid_step(const PidGains& gains, const PidState& st, double error, double dt) {
  if (!(dt > 0.0)) fail(ErrorCode::kInvalidArgument, "pid_step requires dt > 0");
  PidState next;
  next.integral = st.integral + error * dt;
  next.prev_error = error;
  const double derivative = (error - st.prev_error) / dt;
  const double raw = gains.kp * error + gains.ki * next.integral + gains.kd * derivative;
  return {std::clamp(raw, gains.lo, gains.hi), next};
}

namespace {

void check_lqr_dims(const LqrProblem& p) {
  const auto d = p.A.rows(), k = p.B.cols();
  if (p.A.cols() != d || p.B.rows() != d || p.Q.rows() != d || p.Q.cols() != d ||
      p.R.rows() != k || p.R.cols() != k || d == 0 || k == 0) {
    fail(ErrorCode::kDimensionMismatch, "inconsistent LQR problem dimensions");
  }
}

// (R + B'PB)^-1 B'PA via Cholesky; throws when the inner matrix is not PD.
Eigen::MatrixXd gain_for(const LqrProblem& p, const Eigen::MatrixXd& P) {
  const Eigen::MatrixXd S = p.R + p.B.transpose() * P * p.B;
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) {
    fail(ErrorCode::kNotPositiveDefinite, "R + B'PB is not positive definite");
  }
  return llt.solve(p.B.transpose() * P * p.A);
}

}  // namespace

Eigen::MatrixXd riccati_map(const LqrProblem& p, const Eigen::MatrixXd& P) {
  const Eigen::MatrixXd K = gain_for(p, P);
  return p.Q + p.A.transpose() * P * p.A - p.A.transpose() * P * p.B * K;
}

LqrSolution lqr_solve(const LqrProblem& prob, double tol, int max_iter) {
  check_lqr_dims(prob);
  Eigen::MatrixXd P = prob.Q;
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::MatrixXd next = riccati_map(prob, P);
    if (!next.allFinite()) fail(ErrorCode::kNonConvergence, "Riccati iterate is not finite");
    const double change = (next - P).cwiseAbs().maxCoeff();
    P = std::move(next);
    if (change <= tol) {
      // Symmetrize to remove round-off asymmetry before forming the gain.
      P = 0.5 * (P + P.transpose()).eval();
      return {gain_for(prob, P), P, it};
    }
  }
  fail(ErrorCode::kNonConvergence,
       "Riccati iteration did not converge within " + std::to_string(max_iter) + " iterations");
}

Eigen::MatrixXd lqr_gain(const LqrProblem& prob, double tol, int max_iter) {
  return lqr_solve(prob, tol, max_iter).K;
}

LinearModel linearize(const EnvParams& env) {
  const double dt = env.dt;
  // Second-order form: accelerations = C q + D u for positions q.
  Eigen::MatrixXd C, D;
  switch (env.id) {
    case EnvId::kPointMass2d:
      C = Eigen::MatrixXd::Zero(2, 2);
      D = Eigen::MatrixXd::Identity(2, 2);
      break;
    case EnvId::kCartpole: {
      const double total = env.cart_mass + env.pole_mass;
      const double ml = env.pole_mass * env.pole_half_length;
      const double den = env.pole_half_length * (4.0 / 3.0 - env.pole_mass / total);
      const double theta_q = env.gravity / den;
      const double theta_u = -1.0 / (total * den);
      C = Eigen::MatrixXd::Zero(2, 2);
      D = Eigen::MatrixXd::Zero(2, 1);
      C(0, 1) = -ml * theta_q / total;
      C(1, 1) = theta_q;
      D(0, 0) = 1.0 / total - ml * theta_u / total;
      D(1, 0) = theta_u;
      break;
    }
    case EnvId::kLander1d:
      C = Eigen::MatrixXd::Zero(1, 1);
      D = Eigen::MatrixXd::Identity(1, 1);
      break;
  }
  const auto n = C.rows();
  const auto I = Eigen::MatrixXd::Identity(n, n);
  LinearModel lm;
  lm.A.resize(2 * n, 2 * n);
  lm.A << I + dt * dt * C, dt * I, dt * C, I;
  lm.B.resize(2 * n, D.cols());
  lm.B << dt * dt * D, dt * D;
  return lm;
}

ControllerSpec make_pd_controller(const EnvParams& env, double kp, double kd) {
  ControllerSpec spec;
  spec.kind = ControllerKind::kPd;
  spec.kp = kp;
  spec.kd = kd;
  switch (env.id) {
    case EnvId::kPointMass2d:
      spec.axes = {{0, 2, 0.0}, {1, 3, 0.0}};
      break;
    case EnvId::kLander1d:
      spec.axes = {{0, 1, env.gravity}};
      break;
    case EnvId::kCartpole:
      fail(ErrorCode::kConfigInvalid, "cartpole has no PD binding; use an LQR controller");
  }
  return spec;
}

ControllerSpec make_lqr_controller(const EnvParams& env, std::span<const double> q_diag,
                                   std::span<const double> r_diag) {
  const auto d = static_cast<Eigen::Index>(state_dim(env));
  const auto k = static_cast<Eigen::Index>(action_dim(env));
  if (static_cast<Eigen::Index>(q_diag.size()) != d ||
      static_cast<Eigen::Index>(r_diag.size()) != k) {
    fail(ErrorCode::kDimensionMismatch, "LQR weight diagonals do not match env dimensions");
  }
  const LinearModel lm = linearize(env);
  LqrProblem prob{lm.A, lm.B, Eigen::MatrixXd::Zero(d, d), Eigen::MatrixXd::Zero(k, k)};
  for (Eigen::Index i = 0; i < d; ++i) prob.Q(i, i) = q_diag[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i < k; ++i) prob.R(i, i) = r_diag[static_cast<std::size_t>(i)];
  ControllerSpec spec;
  spec.kind = ControllerKind::kLqr;
  spec.K = lqr_gain(prob);
  spec.lqr_q_diag.assign(q_diag.begin(), q_diag.end());
  spec.lqr_r_diag.assign(r_diag.begin(), r_diag.end());
  return spec;
}

ActionVec controller_action(const ControllerSpec& spec, const EnvParams& env,
                            std::span<const double> state) {
  const std::size_t d = state_dim(env), k = action_dim(env);
  if (state.size() != d) {
    fail(ErrorCode::kDimensionMismatch, "controller input has wrong state dimension");
  }
  ActionVec a(k, 0.0);
  if (spec.kind == ControllerKind::kPd) {
    if (spec.axes.size() != k) {
      fail(ErrorCode::kDimensionMismatch, "PD controller axes do not match action dimension");
    }
    for (std::size_t i = 0; i < k; ++i) {
      const PdAxis& ax = spec.axes[i];
      a[i] = spec.kp * (env.goal[ax.pos_index] - state[ax.pos_index]) -
             spec.kd * (state[ax.vel_index] - env.goal[ax.vel_index]) + ax.feedforward;
    }
  } else {
    if (static_cast<std::size_t>(spec.K.rows()) != k ||
        static_cast<std::size_t>(spec.K.cols()) != d) {
      fail(ErrorCode::kDimensionMismatch, "LQR gain does not match env dimensions");
    }
    for (std::size_t i = 0; i < k; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        acc -= spec.K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
               (state[j] - env.goal[j]);
      }
      a[i] = acc;
    }
  }
  return clip_action(env, a);
}

}  // namespace hippomem
