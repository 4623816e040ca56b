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
#include <optional>
#include <span>
#include <vector>

#include "neural_core.hpp"
#include "sim_envs.hpp"

namespace hippomem {

// Mirrored autoencoder over parameter vectors: encoder [m, hidden..., n],
// decoder [n, reversed hidden..., m]. tanh on hidden layers, identity on the
// latent and the output.
struct AutoencoderSpec {
  std::size_t m = 0;
  std::vector<std::size_t> hidden;
  std::size_t n = 8;

  LayerDims encoder_dims() const;
  LayerDims decoder_dims() const;
  std::size_t encoder_param_count() const { return hippomem::param_count(encoder_dims()); }
  std::size_t param_count() const;
  bool operator==(const AutoencoderSpec&) const = default;
};

void validate_ae_spec(const AutoencoderSpec& spec);

// Encoder parameters followed by decoder parameters, each in the neural_core
// flatten layout.
struct AeParams {
  std::vector<double> data;
  bool operator==(const AeParams&) const = default;
};

struct SkillVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  bool operator==(const SkillVector&) const = default;
};

inline constexpr double kScaleFloor = 1e-6;

struct NormalizationStats {
  std::vector<double> mean;
  std::vector<double> scale;
  bool operator==(const NormalizationStats&) const = default;
};

// Per-dimension z-score over the skill set (population std). A single
// vector uses its global entry std for every dimension. Scales are floored
// at kScaleFloor.
NormalizationStats fit_normalization(const std::vector<ParamVector>& skills);
std::vector<double> normalize(std::span<const double> w, const NormalizationStats& stats);
std::vector<double> denormalize(std::span<const double> w, const NormalizationStats& stats);

struct Hippocampus {
  AutoencoderSpec spec;
  AeParams params;
  NormalizationStats stats;
};

struct AeHyper {
  AdamHyper adam{};
  int max_epochs = 20000;
  double fidelity_target = 0.05;
  int check_every = 25;
};

struct AeTrainResult {
  AeParams params;
  std::vector<double> recon_errors;  // raw-space relative, per skill
  int epochs = 0;
  double final_loss = 0.0;
  // Set when the epoch budget ran out before every skill met the target.
  bool below_target_fidelity = false;
};

AeParams init_ae_params(const AutoencoderSpec& spec, uint64_t seed);

// Full-batch Adam on the normalized skill set. Stops once every skill's
// relative reconstruction error is <= fidelity_target or the budget ends.
AeTrainResult train_autoencoder(const std::vector<ParamVector>& skills,
                                const AutoencoderSpec& spec, const NormalizationStats& stats,
                                const AeHyper& hyper, uint64_t seed,
                                const std::optional<AeParams>& warm_start = std::nullopt);

SkillVector encode(const Hippocampus& hc, const ParamVector& w);
// Total on all of R^n; throws kNonFinite if decoding yields a non-finite entry.
ParamVector recall(const Hippocampus& hc, const SkillVector& s);
double relative_recon_error(const Hippocampus& hc, const ParamVector& w);
double relative_distance(std::span<const double> a, std::span<const double> reference);

double skill_distance(const SkillVector& a, const SkillVector& b);
SkillVector interpolate(const SkillVector& a, const SkillVector& b, double alpha);

ActionVec act_through_memory(const PolicySpec& policy, const Hippocampus& hc,
                             const SkillVector& s, std::span<const double> state);

}  // namespace hippomem
