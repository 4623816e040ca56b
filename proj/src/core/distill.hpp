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
#include <vector>

#include "classical_control.hpp"
#include "neural_core.hpp"
#include "sim_envs.hpp"

namespace hippomem {

struct DistillConfig {
  int n_rollout_states = 4096;
  int n_grid_states = 1024;
  double noise_sigma = 0.05;
  int rollout_horizon = 200;
  double train_fraction = 0.9;
  int epochs = 500;
  int batch_size = 128;
  AdamHyper adam{};
  uint64_t seed = 1;
  int eval_seeds = 10;
  uint64_t eval_seed_base = 1000;
};

void validate_distill_config(const DistillConfig& cfg);

struct SkillMetrics {
  double train_mse = 0.0;
  double holdout_mse = 0.0;
  double success_rate = 0.0;
  // NaN when no evaluation episode succeeded.
  double mean_steps_to_success = 0.0;
  int n_eval = 0;
};

struct EvalResult {
  std::vector<Outcome> outcomes;  // one per evaluation seed, in seed order
  double success_rate = 0.0;
  double mean_steps_to_success = 0.0;
};

std::vector<uint64_t> eval_seed_list(const DistillConfig& cfg);

// Oracle-driven rollouts with Gaussian action noise, then a Halton grid
// over the env's sample box.
std::vector<StateVec> sample_states(const EnvParams& env, const ControllerSpec& oracle,
                                    const DistillConfig& cfg);
std::vector<StateVec> halton_grid(std::span<const double> lo, std::span<const double> hi,
                                  int count);

Batch build_dataset(const std::vector<StateVec>& states, const ControllerSpec& oracle,
                    const EnvParams& env);

struct TrainResult {
  ParamVector params;
  double train_mse = 0.0;
  double holdout_mse = 0.0;
  int best_epoch = 0;
};

// Adam on MSE from init_params(spec, cfg.seed); returns the best-holdout
// checkpoint. Throws kNonFinite on a NaN loss.
TrainResult train_policy(const PolicySpec& spec, const Batch& batch, const DistillConfig& cfg);

EvalResult evaluate_act_fn(const EnvParams& env, const ActFn& act, const TerminationSpec& term,
                           std::span<const uint64_t> seeds);
EvalResult evaluate_policy(const EnvParams& env, const PolicySpec& spec, const ParamVector& params,
                           const TerminationSpec& term, std::span<const uint64_t> seeds);
EvalResult evaluate_controller(const EnvParams& env, const ControllerSpec& oracle,
                               const TerminationSpec& term, std::span<const uint64_t> seeds);

PolicySpec policy_spec_for(const EnvParams& env, const std::vector<std::size_t>& hidden);

}  // namespace hippomem
