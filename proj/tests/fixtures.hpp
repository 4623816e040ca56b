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

// Store builders shared by the unit tests and the acceptance binary.
#pragma once

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>
#include <vector>

#include "rng.hpp"
#include "skill_store.hpp"

namespace fixtures {

using namespace hippomem;

// Exact PD law as a [4, 2] linear policy on point_mass_2d.
inline ParamVector linear_pd(double gx, double gy, double kp = 1.0, double kd = 1.8) {
  return ParamVector{{-kp, 0.0, -kd, 0.0, 0.0, -kp, 0.0, -kd, kp * gx, kp * gy}};
}

inline SkillRecord pd_record(const std::string& name, const std::string& family, double gx,
                             double gy) {
  SkillRecord r;
  r.name = name;
  r.family = family;
  r.params = linear_pd(gx, gy);
  r.env = default_env(EnvId::kPointMass2d);
  const std::vector<double> target{gx, gy};
  r.env.goal = goal_state_from_target(EnvId::kPointMass2d, target);
  r.termination = TerminationSpec{};
  r.oracle_success_rate = 1.0;
  for (uint64_t s = 1000; s < 1010; ++s) r.eval_seeds.push_back(s);
  return r;
}

// Small store of linear PD skills, memory not yet built.
inline SkillStore linear_store(const std::vector<std::pair<std::string, std::vector<double>>>& goals) {
  SkillStore st;
  st.env = default_env(EnvId::kPointMass2d);
  st.policy = PolicySpec{{4, 2}, st.env.action_lo, st.env.action_hi};
  st.ae_spec = AutoencoderSpec{10, {32}, 3};
  st.ae_hyper.fidelity_target = 1e-4;
  st.ae_hyper.max_epochs = 20000;
  st.ae_hyper.adam.lr = 1e-3;
  st.ae_seed = 5;
  for (const auto& [name, g] : goals) add_skill(st, pd_record(name, "nav", g[0], g[1]));
  return st;
}

inline double awkward(Rng& rng) {
  switch (rng.index(8)) {
    case 0: return -0.0;
    case 1: return std::numeric_limits<double>::denorm_min() * static_cast<double>(1 + rng.index(1000));
    case 2: return std::ldexp(rng.uniform(-1, 1), static_cast<int>(rng.index(600)) - 300);
    case 3: return 0.1 * static_cast<double>(rng.index(100));
    default: return rng.uniform(-5, 5);
  }
}

inline std::vector<double> awkward_vec(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = awkward(rng);
  return v;
}

// Randomized store covering every persisted field.
inline SkillStore random_store(uint64_t seed) {
  Rng rng(seed);
  SkillStore st;
  const EnvId id = all_envs()[rng.index(3)];
  st.env = default_env(id);
  st.env.dt = rng.uniform(0.01, 0.1);
  st.env.divergence_bound = rng.uniform(10, 1e4);
  const std::size_t d = state_dim(id), k = action_dim(id);
  LayerDims dims{d};
  for (std::size_t h = rng.index(3); h > 0; --h) dims.push_back(1 + rng.index(6));
  dims.push_back(k);
  std::vector<double> lo(k), hi(k);
  for (std::size_t i = 0; i < k; ++i) {
    lo[i] = -std::abs(awkward(rng)) - rng.uniform(0.0, 1.0) - 1e-9;
    hi[i] = std::abs(awkward(rng)) + rng.uniform(0.0, 1.0);
  }
  st.policy = PolicySpec{dims, lo, hi};
  st.termination = TerminationSpec{rng.uniform(0.001, 0.5), 1 + static_cast<int>(rng.index(30)),
                                   50 + static_cast<int>(rng.index(500))};
  const std::size_t m = st.policy.param_count();
  st.ae_spec = AutoencoderSpec{m, {1 + rng.index(8)}, 1};
  st.ae_hyper.adam.lr = rng.uniform(1e-5, 1e-2);
  st.ae_hyper.fidelity_target = rng.uniform(1e-4, 0.1);
  st.ae_hyper.max_epochs = 1 + static_cast<int>(rng.index(50000));
  st.ae_seed = rng.next_u64();
  st.rebuild_counter = rng.index(100);
  st.needs_rebuild = rng.index(2) == 1;
  st.ae_epochs = static_cast<int>(rng.index(20000));
  st.below_target_fidelity = rng.index(2) == 1;
  st.stats = NormalizationStats{awkward_vec(rng, m), awkward_vec(rng, m)};
  st.ae = AeParams{awkward_vec(rng, st.ae_spec.param_count())};
  const std::size_t n_skills = rng.index(6);
  for (std::size_t i = 0; i < n_skills; ++i) {
    SkillRecord r;
    r.name = "skill_" + std::to_string(rng.next_u64() % 100000) + "_" + std::to_string(i);
    r.family = rng.index(2) ? "fam" : "";
    r.params = ParamVector{awkward_vec(rng, m)};
    r.skill = SkillVector{awkward_vec(rng, st.ae_spec.n)};
    r.recon_error = rng.index(4) == 0 ? std::numeric_limits<double>::quiet_NaN() : awkward(rng);
    r.encoded_at = rng.index(100);
    r.env = st.env;
    r.env.goal = awkward_vec(rng, d);
    r.termination = st.termination;
    r.metrics = SkillMetrics{awkward(rng), awkward(rng), rng.uniform(), rng.index(3) == 0
                                                                            ? std::numeric_limits<double>::quiet_NaN()
                                                                            : awkward(rng),
                             static_cast<int>(rng.index(20))};
    r.oracle_success_rate = rng.uniform();
    for (std::size_t s = rng.index(12); s > 0; --s) r.eval_seeds.push_back(rng.next_u64());
    add_skill(st, std::move(r));
  }
  st.needs_rebuild = rng.index(2) == 1;
  return st;
}

inline bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

inline bool same_bits(double a, double b) {
  return std::bit_cast<uint64_t>(a) == std::bit_cast<uint64_t>(b);
}

}  // namespace fixtures
