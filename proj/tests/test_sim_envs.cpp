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

#include <cmath>
#include <limits>
#include <sstream>

#include "error.hpp"
#include "oracles.hpp"
#include "rng.hpp"
#include "sim_envs.hpp"

using namespace hippomem;

namespace {

ActFn zero_act(std::size_t k) {
  return [k](std::span<const double>) { return ActionVec(k, 0.0); };
}

}  // namespace

TEST_CASE("reset is deterministic per seed") {
  const auto p = default_env(EnvId::kPointMass2d);
  CHECK(reset(p, 7) == reset(p, 7));
  CHECK(reset(p, 7) != reset(p, 8));
}

TEST_CASE("lander reset keeps velocity exactly zero") {
  const auto p = default_env(EnvId::kLander1d);
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = reset(p, seed);
    CHECK(s[1] == 0.0);
    CHECK(s[0] >= 8.0);
    CHECK(s[0] <= 12.0);
  }
}

TEST_CASE("point mass reset stays in the init box") {
  const auto p = default_env(EnvId::kPointMass2d);
  for (uint64_t seed = 1; seed <= 100; ++seed) {
    const auto s = reset(p, seed);
    CHECK(std::abs(s[0]) <= 2.0);
    CHECK(std::abs(s[1]) <= 2.0);
    CHECK(s[2] == 0.0);
    CHECK(s[3] == 0.0);
  }
}

TEST_CASE("step examples") {
  const auto pm = default_env(EnvId::kPointMass2d);
  auto s = step(pm, std::vector<double>{0, 0, 1, 0}, std::vector<double>{0, 0});
  CHECK(s == std::vector<double>{0.05, 0, 1, 0});
  s = step(pm, std::vector<double>{0, 0, 0, 0}, std::vector<double>{1, 0});
  CHECK(s[0] == doctest::Approx(0.0025).epsilon(1e-15));
  CHECK(s[2] == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(s[1] == 0.0);
  CHECK(s[3] == 0.0);

  const auto ld = default_env(EnvId::kLander1d);
  CHECK(step(ld, std::vector<double>{10, 0}, std::vector<double>{0.5}) ==
        std::vector<double>{10, 0});
}

TEST_CASE("step matches the independent integrator on random inputs") {
  const auto pm = default_env(EnvId::kPointMass2d);
  const auto ld = default_env(EnvId::kLander1d);
  Rng rng(42);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> s{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-2, 2),
                          rng.uniform(-2, 2)};
    const double ax = rng.uniform(-1, 1), ay = rng.uniform(-1, 1);
    CHECK(step(pm, s, std::vector<double>{ax, ay}) == oracle::point_mass_step(s, ax, ay, pm.dt));
    std::vector<double> z{rng.uniform(0, 14), rng.uniform(-4, 4)};
    const double u = rng.uniform(0, 1.5);
    CHECK(step(ld, z, std::vector<double>{u}) == oracle::lander_step(z, u, ld.gravity, ld.dt));
  }
}

TEST_CASE("zero action moves position by v*dt each step") {
  const auto pm = default_env(EnvId::kPointMass2d);
  std::vector<double> s{0.3, -0.2, 0.7, -1.1};
  for (int i = 0; i < 20; ++i) {
    const auto next = step(pm, s, std::vector<double>{0, 0});
    CHECK(next[0] == s[0] + s[2] * pm.dt);
    CHECK(next[1] == s[1] + s[3] * pm.dt);
    CHECK(next[2] == s[2]);
    s = next;
  }
}

TEST_CASE("applied actions are clipped to bounds") {
  for (EnvId id : all_envs()) {
    const auto p = default_env(id);
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
      ActionVec a(action_dim(id));
      for (auto& x : a) x = rng.uniform(-50, 50);
      const auto c = clip_action(p, a);
      for (std::size_t j = 0; j < c.size(); ++j) {
        CHECK(c[j] >= p.action_lo[j]);
        CHECK(c[j] <= p.action_hi[j]);
      }
    }
  }
  // a huge action steps the same as the bound
  const auto pm = default_env(EnvId::kPointMass2d);
  CHECK(step(pm, std::vector<double>{0, 0, 0, 0}, std::vector<double>{99, -99}) ==
        step(pm, std::vector<double>{0, 0, 0, 0}, std::vector<double>{1, -1}));
}

TEST_CASE("rollout: zero action at goal succeeds at hold_steps") {
  const auto p = default_env(EnvId::kPointMass2d);
  TerminationSpec term;
  const auto traj = rollout(p, zero_act(2), p.goal, term);
  CHECK(traj.outcome == Outcome::kSuccess);
  CHECK(traj.steps_taken() == term.hold_steps);
  CHECK(traj.steps.size() == static_cast<std::size_t>(term.hold_steps) + 1);
}

TEST_CASE("rollout: lander free fall does not succeed") {
  const auto p = default_env(EnvId::kLander1d);
  const auto traj = rollout(p, zero_act(1), {10.0, 0.0}, TerminationSpec{});
  CHECK(traj.outcome != Outcome::kSuccess);
}

TEST_CASE("rollout: PD lander succeeds on 10 seeds") {
  const auto p = default_env(EnvId::kLander1d);
  const ActFn act = [&](std::span<const double> s) {
    return ActionVec{0.6 * (p.goal[0] - s[0]) - 1.2 * s[1] + p.gravity};
  };
  TerminationSpec term{0.05, 10, 600};
  for (uint64_t seed = 1000; seed < 1010; ++seed) {
    CHECK(rollout(p, act, reset(p, seed), term).outcome == Outcome::kSuccess);
  }
}

TEST_CASE("rollout outcome soundness") {
  const auto p = default_env(EnvId::kPointMass2d);
  SUBCASE("divergence on non-finite action") {
    const ActFn nan_act = [](std::span<const double>) {
      return ActionVec{std::numeric_limits<double>::quiet_NaN(), 0.0};
    };
    // clipping NaN keeps NaN
    const auto traj = rollout(p, nan_act, {1, 1, 0, 0}, TerminationSpec{});
    CHECK(traj.outcome == Outcome::kDiverged);
  }
  SUBCASE("divergence on out-of-box state") {
    auto q = p;
    q.divergence_bound = 1.5;
    const ActFn push = [](std::span<const double>) { return ActionVec{1.0, 0.0}; };
    const auto traj = rollout(q, push, {1, 0, 0, 0}, TerminationSpec{});
    CHECK(traj.outcome == Outcome::kDiverged);
    CHECK(is_diverged(q, traj.final_state()));
    for (std::size_t i = 0; i + 1 < traj.steps.size(); ++i) CHECK_FALSE(is_diverged(q, traj.steps[i].state));
  }
  SUBCASE("success only after hold_steps consecutive in-tolerance states") {
    TerminationSpec term{0.05, 10, 400};
    const ActFn pd = [](std::span<const double> s) {
      return ActionVec{-s[0] - 1.8 * s[2], -s[1] - 1.8 * s[3]};
    };
    const auto traj = rollout(p, pd, {1.5, -1.0, 0, 0}, term);
    REQUIRE(traj.outcome == Outcome::kSuccess);
    const std::size_t n = traj.steps.size();
    for (std::size_t i = n - term.hold_steps; i < n; ++i) {
      CHECK(goal_error(p, traj.steps[i].state) <= term.tolerance);
    }
    // no earlier window of hold_steps
    int held = 0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      held = goal_error(p, traj.steps[i].state) <= term.tolerance ? held + 1 : 0;
      CHECK(held < term.hold_steps);
    }
  }
  SUBCASE("timeout") {
    TerminationSpec term{0.0, 10, 30};
    const auto traj = rollout(p, zero_act(2), {1, 1, 0, 0}, term);
    CHECK(traj.outcome == Outcome::kTimeout);
    CHECK(traj.steps_taken() == 30);
  }
}

TEST_CASE("rollout is bit-deterministic") {
  const auto p = default_env(EnvId::kCartpole);
  const ActFn act = [](std::span<const double> s) {
    return ActionVec{2.78 * s[0] + 43.9 * s[1] + 5.1 * s[2] + 11.2 * s[3]};
  };
  const auto a = rollout(p, act, reset(p, 3), TerminationSpec{0.01, 25, 500});
  const auto b = rollout(p, act, reset(p, 3), TerminationSpec{0.01, 25, 500});
  CHECK(a == b);
}

TEST_CASE("trajectory CSV format") {
  const auto p = default_env(EnvId::kLander1d);
  const auto traj = rollout(p, zero_act(1), {10.0, 0.0}, TerminationSpec{0.05, 10, 3});
  std::ostringstream os;
  write_trajectory_csv(os, traj);
  const std::string text = os.str();
  CHECK(text.rfind("t,s0,s1,a0\n", 0) == 0);
  CHECK(text.find("# outcome=Timeout") != std::string::npos);
  std::istringstream is(text);
  std::string line;
  int rows = 0;
  while (std::getline(is, line)) rows += (!line.empty() && line[0] != '#' && line[0] != 't');
  CHECK(rows == 4);
}

TEST_CASE("env validation and errors") {
  CHECK_THROWS_AS(parse_env_id("flying"), Error);
  auto p = default_env(EnvId::kPointMass2d);
  p.dt = -1;
  CHECK_THROWS_AS(validate_env(p), Error);
  const auto q = default_env(EnvId::kPointMass2d);
  CHECK_THROWS_AS(step(q, std::vector<double>{0, 0}, std::vector<double>{0, 0}), Error);
}
