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

#include "distill.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "error.hpp"
#include "rng.hpp"

namespace hippomem {

namespace {

enum Stream : uint64_t { kRolloutInit = 1, kRolloutNoise = 2, kSplit = 3, kShuffle = 4 };

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

double radical_inverse(uint64_t index, int base) {
  double result = 0.0, f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % static_cast<uint64_t>(base));
    index /= static_cast<uint64_t>(base);
    f /= base;
  }
  return result;
}

Eigen::MatrixXd gather_columns(const Eigen::MatrixXd& m, std::span<const std::size_t> idx) {
  Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = m.col(static_cast<Eigen::Index>(idx[j]));
  }
  return out;
}

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.index(i)]);
  }
}

}  // namespace

void validate_distill_config(const DistillConfig& cfg) {
  if (cfg.n_rollout_states < 0 || cfg.n_grid_states < 0 ||
      cfg.n_rollout_states + cfg.n_grid_states < 1) {
    fail(ErrorCode::kConfigInvalid, "distill needs at least one state");
  }
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0)) {
    fail(ErrorCode::kConfigInvalid, "train_fraction must lie in (0, 1)");
  }
  if (cfg.epochs < 1 || cfg.batch_size < 1 || cfg.rollout_horizon < 1 || cfg.eval_seeds < 1) {
    fail(ErrorCode::kConfigInvalid, "epochs, batch_size, rollout_horizon, eval_seeds must be >= 1");
  }
  if (!(cfg.noise_sigma >= 0.0) || !(cfg.adam.lr > 0.0)) {
    fail(ErrorCode::kConfigInvalid, "noise_sigma must be >= 0 and lr > 0");
  }
}

std::vector<uint64_t> eval_seed_list(const DistillConfig& cfg) {
  std::vector<uint64_t> seeds(static_cast<std::size_t>(cfg.eval_seeds));
  std::iota(seeds.begin(), seeds.end(), cfg.eval_seed_base);
  return seeds;
}

std::vector<StateVec> halton_grid(std::span<const double> lo, std::span<const double> hi,
                                  int count) {
  if (lo.size() != hi.size() || lo.size() > std::size(kPrimes)) {
    fail(ErrorCode::kDimensionMismatch, "grid box dimensions unsupported");
  }
  std::vector<StateVec> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int i = 1; i <= count; ++i) {
    StateVec s(lo.size());
    for (std::size_t d = 0; d < lo.size(); ++d) {
      s[d] = lo[d] + (hi[d] - lo[d]) * radical_inverse(static_cast<uint64_t>(i), kPrimes[d]);
    }
    pts.push_back(std::move(s));
  }
  return pts;
}

std::vector<StateVec> sample_states(const EnvParams& env, const ControllerSpec& oracle,
                                    const DistillConfig& cfg) {
  validate_distill_config(cfg);
  std::vector<StateVec> states;
  const auto target = static_cast<std::size_t>(cfg.n_rollout_states);
  states.reserve(target + static_cast<std::size_t>(cfg.n_grid_states));
  Rng noise(derive_seed(cfg.seed, kRolloutNoise));
  for (uint64_t episode = 0; states.size() < target; ++episode) {
    StateVec s = reset(env, derive_seed(derive_seed(cfg.seed, kRolloutInit), episode));
    for (int t = 0; t < cfg.rollout_horizon && states.size() < target; ++t) {
      states.push_back(s);
      ActionVec a = controller_action(oracle, env, s);
      if (cfg.noise_sigma > 0.0) {
        for (double& x : a) x += cfg.noise_sigma * noise.normal();
      }
      s = step(env, s, a);
      if (is_diverged(env, s)) break;
    }
  }
  for (auto& p : halton_grid(env.sample_lo, env.sample_hi, cfg.n_grid_states)) {
    states.push_back(std::move(p));
  }
  return states;
}

Batch build_dataset(const std::vector<StateVec>& states, const ControllerSpec& oracle,
                    const EnvParams& env) {
  std::vector<std::vector<double>> targets;
  targets.reserve(states.size());
  for (const auto& s : states) targets.push_back(controller_action(oracle, env, s));
  return make_batch(states, targets);
}

TrainResult train_policy(const PolicySpec& spec, const Batch& batch, const DistillConfig& cfg) {
  validate_policy_spec(spec);
  validate_distill_config(cfg);
  const auto n = static_cast<std::size_t>(batch.size());
  if (n < 2) fail(ErrorCode::kEmptyInput, "training needs at least two samples");
  if (batch.inputs.rows() != static_cast<Eigen::Index>(spec.input_dim()) ||
      batch.targets.rows() != static_cast<Eigen::Index>(spec.output_dim())) {
    fail(ErrorCode::kDimensionMismatch, "dataset does not match policy spec");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng split_rng(derive_seed(cfg.seed, kSplit));
  shuffle(order, split_rng);
  std::size_t n_train = static_cast<std::size_t>(std::floor(cfg.train_fraction * static_cast<double>(n)));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
  std::vector<std::size_t> train_idx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  const std::vector<std::size_t> hold_idx(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  const Batch train{gather_columns(batch.inputs, train_idx), gather_columns(batch.targets, train_idx)};
  const Batch hold{gather_columns(batch.inputs, hold_idx), gather_columns(batch.targets, hold_idx)};

  const LayerDims& dims = spec.layer_dims;
  ParamVector w = init_params(dims, cfg.seed);
  AdamState adam(w.size());
  Rng shuffle_rng(derive_seed(cfg.seed, kShuffle));
  std::vector<std::size_t> local(n_train);
  std::iota(local.begin(), local.end(), std::size_t{0});

  TrainResult best;
  best.params = w;
  best.holdout_mse = batch_loss(dims, w.data, hold);
  const auto bs = static_cast<std::size_t>(cfg.batch_size);
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    shuffle(local, shuffle_rng);
    for (std::size_t start = 0; start < n_train; start += bs) {
      const std::span<const std::size_t> idx(local.data() + start, std::min(bs, n_train - start));
      const Batch mb{gather_columns(train.inputs, idx), gather_columns(train.targets, idx)};
      LossGrad lg = loss_and_grad(dims, w, mb);
      if (!std::isfinite(lg.loss)) {
        fail(ErrorCode::kNonFinite, "training loss became non-finite at epoch " + std::to_string(epoch));
      }
      adam_step(w.data, lg.grad.data, adam, cfg.adam);
    }
    const double h = batch_loss(dims, w.data, hold);
    if (!std::isfinite(h)) fail(ErrorCode::kNonFinite, "holdout loss became non-finite");
    if (h < best.holdout_mse) {
      best.holdout_mse = h;
      best.params = w;
      best.best_epoch = epoch;
    }
  }
  best.train_mse = batch_loss(dims, best.params.data, train);
  return best;
}

EvalResult evaluate_act_fn(const EnvParams& env, const ActFn& act, const TerminationSpec& term,
                           std::span<const uint64_t> seeds) {
  EvalResult r;
  int successes = 0;
  double steps = 0.0;
  for (uint64_t seed : seeds) {
    const Trajectory traj = rollout(env, act, reset(env, seed), term);
    r.outcomes.push_back(traj.outcome);
    if (traj.outcome == Outcome::kSuccess) {
      ++successes;
      steps += traj.steps_taken();
    }
  }
  r.success_rate = seeds.empty() ? 0.0 : static_cast<double>(successes) / static_cast<double>(seeds.size());
  r.mean_steps_to_success =
      successes > 0 ? steps / successes : std::numeric_limits<double>::quiet_NaN();
  return r;
}

EvalResult evaluate_policy(const EnvParams& env, const PolicySpec& spec, const ParamVector& params,
                           const TerminationSpec& term, std::span<const uint64_t> seeds) {
  if (spec.input_dim() != state_dim(env) || spec.output_dim() != action_dim(env)) {
    fail(ErrorCode::kDimensionMismatch, "policy spec does not match env");
  }
  return evaluate_act_fn(
      env, [&](std::span<const double> s) { return forward(spec, params, s); }, term, seeds);
}

EvalResult evaluate_controller(const EnvParams& env, const ControllerSpec& oracle,
                               const TerminationSpec& term, std::span<const uint64_t> seeds) {
  return evaluate_act_fn(
      env, [&](std::span<const double> s) { return controller_action(oracle, env, s); }, term,
      seeds);
}

PolicySpec policy_spec_for(const EnvParams& env, const std::vector<std::size_t>& hidden) {
  PolicySpec spec;
  spec.layer_dims.push_back(state_dim(env));
  spec.layer_dims.insert(spec.layer_dims.end(), hidden.begin(), hidden.end());
  spec.layer_dims.push_back(action_dim(env));
  spec.out_lo = env.action_lo;
  spec.out_hi = env.action_hi;
  validate_policy_spec(spec);
  return spec;
}

}  // namespace hippomem
