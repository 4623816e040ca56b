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

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "classical_control.hpp"
#include "error.hpp"
#include "oracles.hpp"
#include "rng.hpp"

using namespace hippomem;

namespace {

Eigen::MatrixXd scalar(double v) { return Eigen::MatrixXd::Constant(1, 1, v); }

LqrProblem scalar_problem(double a, double b, double q, double r) {
  return {scalar(a), scalar(b), scalar(q), scalar(r)};
}

}  // namespace

TEST_CASE("pid examples") {
  PidGains g{2.0, 0.0, 0.0, -10.0, 10.0};
  CHECK(pid_step(g, {}, 0.0, 0.1).action == 0.0);
  CHECK(pid_step(g, {}, 0.5, 0.1).action == 1.0);

  PidGains gi{1.0, 1.0, 0.0, -10.0, 10.0};
  auto first = pid_step(gi, {}, 1.0, 0.1);
  CHECK(first.action == doctest::Approx(1.1).epsilon(1e-14));
  auto second = pid_step(gi, first.state, 1.0, 0.1);
  CHECK(second.action == doctest::Approx(1.2).epsilon(1e-14));
  CHECK_THROWS_AS(pid_step(gi, {}, 1.0, 0.0), Error);
}

TEST_CASE("pid matches an independent three-term formula") {
  Rng rng(9);
  for (int i = 0; i < 500; ++i) {
    PidGains g{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3), -2.0, 2.0};
    double integral = rng.uniform(-1, 1), prev = rng.uniform(-1, 1);
    const double e = rng.uniform(-2, 2), dt = rng.uniform(0.01, 0.2);
    const auto out = pid_step(g, {integral, prev}, e, dt);
    const double i2 = integral + e * dt;
    const double expect = std::min(2.0, std::max(-2.0, g.kp * e + g.ki * i2 + g.kd * (e - prev) / dt));
    CHECK(out.action == doctest::Approx(expect).epsilon(1e-14));
    CHECK(out.state.integral == i2);
    CHECK(out.state.prev_error == e);
  }
}

TEST_CASE("scalar DARE closed form") {
  const auto sol = lqr_solve(scalar_problem(1, 1, 1, 1));
  const double p = (1 + std::sqrt(5.0)) / 2;
  CHECK(std::abs(sol.P(0, 0) - p) <= 1e-8);
  CHECK(std::abs(sol.K(0, 0) - p / (1 + p)) <= 1e-9);
  CHECK(std::abs(sol.P(0, 0) - oracle::scalar_dare(1, 1, 1, 1)) <= 1e-9);
}

TEST_CASE("scalar DARE against the quadratic root on random problems") {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const double a = rng.uniform(-1.5, 1.5), b = rng.uniform(0.2, 2), q = rng.uniform(0.1, 5),
                 r = rng.uniform(0.1, 5);
    const auto sol = lqr_solve(scalar_problem(a, b, q, r));
    const double p = oracle::scalar_dare(a, b, q, r);
    CHECK(std::abs(sol.P(0, 0) - p) <= 1e-8 * std::max(1.0, p));
    CHECK(std::abs(sol.K(0, 0) - b * p * a / (r + b * b * p)) <= 1e-8);
  }
}

TEST_CASE("larger Q gives a larger gain") {
  const double k1 = lqr_gain(scalar_problem(1, 1, 1, 1))(0, 0);
  const double k4 = lqr_gain(scalar_problem(1, 1, 4, 1))(0, 0);
  CHECK(k4 > k1);
}

TEST_CASE("no drift gives zero gain") {
  for (double b : {0.5, 1.0, -2.0}) {
    const auto K = lqr_gain(scalar_problem(0, b, 1, 1));
    CHECK(K(0, 0) == 0.0);
  }
  LqrProblem p{Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Ones(2, 1), Eigen::MatrixXd::Identity(2, 2),
               scalar(1)};
  CHECK(lqr_gain(p).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Riccati residual and DP equivalence on random 2x2 systems") {
  Rng rng(17);
  int done = 0;
  while (done < 20) {
    Eigen::MatrixXd A(2, 2), B(2, 1);
    for (int i = 0; i < 4; ++i) A(i / 2, i % 2) = rng.uniform(-1.2, 1.2);
    B << rng.uniform(0.2, 1.0), rng.uniform(-1, 1);
    Eigen::MatrixXd ctrb(2, 2);
    ctrb << B, A * B;
    if (std::abs(ctrb.determinant()) < 0.05) continue;
    LqrProblem prob{A, B, Eigen::MatrixXd::Identity(2, 2) * rng.uniform(0.5, 2),
                    scalar(rng.uniform(0.2, 2))};
    const auto sol = lqr_solve(prob);
    const double residual = (sol.P - riccati_map(prob, sol.P)).cwiseAbs().maxCoeff();
    CHECK(residual <= 10 * kRiccatiTol * std::max(1.0, sol.P.cwiseAbs().maxCoeff()));
    const auto Kdp = oracle::dp_gain(A, B, prob.Q, prob.R, 500);
    CHECK((sol.K - Kdp).cwiseAbs().maxCoeff() <= 1e-6);
    ++done;
  }
}

TEST_CASE("indefinite R is rejected") {
  CHECK_THROWS_AS(lqr_solve(scalar_problem(1, 1, 1, -5)), Error);
}

TEST_CASE("linearization matches finite differences of step") {
  for (EnvId id : all_envs()) {
    const auto env = default_env(id);
    const auto lin = linearize(env);
    const std::size_t d = state_dim(id), k = action_dim(id);
    std::vector<double> s0 = env.goal;
    std::vector<double> u0(k, 0.0);
    if (id == EnvId::kLander1d) u0[0] = env.gravity;
    const double h = 1e-6;
    for (std::size_t j = 0; j < d; ++j) {
      auto up = s0, dn = s0;
      up[j] += h;
      dn[j] -= h;
      const auto fu = step(env, up, u0), fd = step(env, dn, u0);
      for (std::size_t i = 0; i < d; ++i) CHECK(lin.A(i, j) == doctest::Approx((fu[i] - fd[i]) / (2 * h)).epsilon(1e-6));
    }
    for (std::size_t j = 0; j < k; ++j) {
      auto up = u0, dn = u0;
      up[j] += h;
      dn[j] -= h;
      const auto fu = step(env, s0, up), fd = step(env, s0, dn);
      for (std::size_t i = 0; i < d; ++i) CHECK(lin.B(i, j) == doctest::Approx((fu[i] - fd[i]) / (2 * h)).epsilon(1e-6));
    }
  }
}

TEST_CASE("controller examples") {
  const auto pm = default_env(EnvId::kPointMass2d);
  const auto pd = make_pd_controller(pm, 1.0, 1.8);
  CHECK(controller_action(pd, pm, pm.goal) == ActionVec{0.0, 0.0});

  const auto ld = default_env(EnvId::kLander1d);
  const auto lpd = make_pd_controller(ld, 0.6, 1.2);
  CHECK(controller_action(lpd, ld, std::vector<double>{12, 0}) == ActionVec{0.0});
  CHECK(controller_action(lpd, ld, ld.goal)[0] == doctest::Approx(ld.gravity));

  const auto cp = default_env(EnvId::kCartpole);
  const std::vector<double> q{1, 1, 1, 1}, r{0.1};
  const auto lqr = make_lqr_controller(cp, q, r);
  CHECK(controller_action(lqr, cp, std::vector<double>{0, 0, 0, 0})[0] == 0.0);
  CHECK_THROWS_AS(make_pd_controller(cp, 1, 1), Error);
}

TEST_CASE("shipped controllers succeed on 10 seeds") {
  const auto pm = default_env(EnvId::kPointMass2d);
  const auto ld = default_env(EnvId::kLander1d);
  const auto cp = default_env(EnvId::kCartpole);
  const std::vector<double> q{1, 1, 1, 1}, r{0.1};
  struct Case {
    EnvParams env;
    ControllerSpec ctrl;
    TerminationSpec term;
  };
  const std::vector<Case> cases{{pm, make_pd_controller(pm, 1.0, 1.8), {0.05, 10, 400}},
                                {ld, make_pd_controller(ld, 0.6, 1.2), {0.05, 10, 600}},
                                {cp, make_lqr_controller(cp, q, r), {0.01, 25, 500}}};
  for (const auto& c : cases) {
    const ActFn act = [&](std::span<const double> s) { return controller_action(c.ctrl, c.env, s); };
    for (uint64_t seed = 1000; seed < 1010; ++seed) {
      CHECK(rollout(c.env, act, reset(c.env, seed), c.term).outcome == Outcome::kSuccess);
    }
  }
}
