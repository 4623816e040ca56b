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

#include "hippocampus.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "rng.hpp"

namespace hippomem {

LayerDims AutoencoderSpec::encoder_dims() const {
  LayerDims d{m};
  d.insert(d.end(), hidden.begin(), hidden.end());
  d.push_back(n);
  return d;
}

LayerDims AutoencoderSpec::decoder_dims() const {
  LayerDims d{n};
  d.insert(d.end(), hidden.rbegin(), hidden.rend());
  d.push_back(m);
  return d;
}

std::size_t AutoencoderSpec::param_count() const {
  return hippomem::param_count(encoder_dims()) + hippomem::param_count(decoder_dims());
}

void validate_ae_spec(const AutoencoderSpec& spec) {
  if (spec.n < 1 || spec.m < 1 || spec.n >= spec.m) {
    fail(ErrorCode::kInvalidArgument, "autoencoder requires 1 <= n < m");
  }
  for (std::size_t h : spec.hidden) {
    if (h == 0) fail(ErrorCode::kInvalidArgument, "autoencoder hidden widths must be >= 1");
  }
}

NormalizationStats fit_normalization(const std::vector<ParamVector>& skills) {
  if (skills.empty()) fail(ErrorCode::kEmptyInput, "normalization over an empty skill set");
  const std::size_t m = skills.front().size();
  for (const auto& w : skills) {
    if (w.size() != m) fail(ErrorCode::kDimensionMismatch, "skills differ in parameter length");
  }
  NormalizationStats st;
  st.mean.assign(m, 0.0);
  st.scale.assign(m, 0.0);
  const double k = static_cast<double>(skills.size());
  if (skills.size() == 1) {
    const auto& w = skills.front().data;
    st.mean = w;
    double mu = 0.0;
    for (double x : w) mu += x;
    mu /= static_cast<double>(m);
    double var = 0.0;
    for (double x : w) var += (x - mu) * (x - mu);
    const double sd = std::max(std::sqrt(var / static_cast<double>(m)), kScaleFloor);
    st.scale.assign(m, sd);
    return st;
  }
  for (std::size_t i = 0; i < m; ++i) {
    double mu = 0.0;
    for (const auto& w : skills) mu += w.data[i];
    mu /= k;
    double var = 0.0;
    for (const auto& w : skills) var += (w.data[i] - mu) * (w.data[i] - mu);
    st.mean[i] = mu;
    st.scale[i] = std::max(std::sqrt(var / k), kScaleFloor);
  }
  return st;
}

namespace {

void check_stats(std::size_t n, const NormalizationStats& stats) {
  if (stats.mean.size() != n || stats.scale.size() != n) {
    fail(ErrorCode::kDimensionMismatch, "normalization stats do not match vector length");
  }
}

}  // namespace

std::vector<double> normalize(std::span<const double> w, const NormalizationStats& stats) {
  check_stats(w.size(), stats);
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = (w[i] - stats.mean[i]) / stats.scale[i];
  return out;
}

std::vector<double> denormalize(std::span<const double> w, const NormalizationStats& stats) {
  check_stats(w.size(), stats);
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[i] * stats.scale[i] + stats.mean[i];
  return out;
}

AeParams init_ae_params(const AutoencoderSpec& spec, uint64_t seed) {
  validate_ae_spec(spec);
  AeParams p;
  p.data = init_params(spec.encoder_dims(), seed).data;
  const auto dec = init_params(spec.decoder_dims(), derive_seed(seed, 1)).data;
  p.data.insert(p.data.end(), dec.begin(), dec.end());
  return p;
}

double relative_distance(std::span<const double> a, std::span<const double> reference) {
  if (a.size() != reference.size()) {
    fail(ErrorCode::kDimensionMismatch, "relative distance over different lengths");
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - reference[i]) * (a[i] - reference[i]);
    den += reference[i] * reference[i];
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

namespace {

std::span<const double> encoder_part(const Hippocampus& hc) {
  return std::span<const double>(hc.params.data).first(hc.spec.encoder_param_count());
}

std::span<const double> decoder_part(const Hippocampus& hc) {
  return std::span<const double>(hc.params.data).subspan(hc.spec.encoder_param_count());
}

void check_hippocampus(const Hippocampus& hc) {
  validate_ae_spec(hc.spec);
  if (hc.params.data.size() != hc.spec.param_count()) {
    fail(ErrorCode::kDimensionMismatch, "autoencoder parameters do not match spec");
  }
  check_stats(hc.spec.m, hc.stats);
}

}  // namespace

AeTrainResult train_autoencoder(const std::vector<ParamVector>& skills,
                                const AutoencoderSpec& spec, const NormalizationStats& stats,
                                const AeHyper& hyper, uint64_t seed,
                                const std::optional<AeParams>& warm_start) {
  validate_ae_spec(spec);
  if (skills.empty()) fail(ErrorCode::kEmptyInput, "autoencoder over an empty skill set");
  if (hyper.max_epochs < 0 || hyper.check_every < 1 || !(hyper.fidelity_target > 0.0)) {
    fail(ErrorCode::kConfigInvalid, "invalid autoencoder hyperparameters");
  }
  check_stats(spec.m, stats);
  const auto k = static_cast<Eigen::Index>(skills.size());
  const auto m = static_cast<Eigen::Index>(spec.m);
  Eigen::MatrixXd x(m, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto& w = skills[static_cast<std::size_t>(j)];
    if (w.size() != spec.m) fail(ErrorCode::kDimensionMismatch, "skill length != autoencoder m");
    const auto xn = normalize(w.data, stats);
    x.col(j) = Eigen::Map<const Eigen::VectorXd>(xn.data(), m);
  }

  Hippocampus hc{spec, {}, stats};
  if (warm_start && warm_start->data.size() == spec.param_count()) {
    hc.params = *warm_start;
  } else {
    hc.params = init_ae_params(spec, seed);
  }
  const LayerDims enc = spec.encoder_dims(), dec = spec.decoder_dims();
  const std::size_t n_enc = spec.encoder_param_count();
  AdamState adam(hc.params.data.size());
  std::vector<double> grad(hc.params.data.size());

  AeTrainResult result;
  auto measure = [&] {
    result.recon_errors.clear();
    for (const auto& w : skills) result.recon_errors.push_back(relative_recon_error(hc, w));
    return std::all_of(result.recon_errors.begin(), result.recon_errors.end(),
                       [&](double e) { return e <= hyper.fidelity_target; });
  };

  bool done = measure();
  int epoch = 0;
  while (!done && epoch < hyper.max_epochs) {
    const std::span<const double> all(hc.params.data);
    ForwardCache enc_pass(enc, all.first(n_enc), x);
    ForwardCache dec_pass(dec, all.subspan(n_enc), enc_pass.output());
    const Eigen::MatrixXd diff = dec_pass.output() - x;
    result.final_loss = diff.squaredNorm() / static_cast<double>(k);
    if (!std::isfinite(result.final_loss)) {
      fail(ErrorCode::kNonFinite, "autoencoder loss became non-finite");
    }
    std::fill(grad.begin(), grad.end(), 0.0);
    const std::span<double> g(grad);
    const Eigen::MatrixXd d_latent =
        dec_pass.backward((2.0 / static_cast<double>(k)) * diff, g.subspan(n_enc));
    enc_pass.backward(d_latent, g.first(n_enc));
    adam_step(hc.params.data, grad, adam, hyper.adam);
    ++epoch;
    if (epoch % hyper.check_every == 0 || epoch == hyper.max_epochs) done = measure();
  }
  result.params = hc.params;
  result.epochs = epoch;
  result.below_target_fidelity = !done;
  return result;
}

SkillVector encode(const Hippocampus& hc, const ParamVector& w) {
  check_hippocampus(hc);
  if (w.size() != hc.spec.m) {
    fail(ErrorCode::kDimensionMismatch, "parameter vector length " + std::to_string(w.size()) +
                                            " != autoencoder m " + std::to_string(hc.spec.m));
  }
  return {forward_raw(hc.spec.encoder_dims(), encoder_part(hc), normalize(w.data, hc.stats))};
}

ParamVector recall(const Hippocampus& hc, const SkillVector& s) {
  check_hippocampus(hc);
  if (s.size() != hc.spec.n) {
    fail(ErrorCode::kDimensionMismatch, "skill vector length " + std::to_string(s.size()) +
                                            " != latent n " + std::to_string(hc.spec.n));
  }
  ParamVector w{denormalize(forward_raw(hc.spec.decoder_dims(), decoder_part(hc), s.values),
                            hc.stats)};
  if (!std::all_of(w.data.begin(), w.data.end(), [](double v) { return std::isfinite(v); })) {
    fail(ErrorCode::kNonFinite, "recalled parameters are not finite");
  }
  return w;
}

double relative_recon_error(const Hippocampus& hc, const ParamVector& w) {
  return relative_distance(recall(hc, encode(hc, w)).data, w.data);
}

double skill_distance(const SkillVector& a, const SkillVector& b) {
  if (a.size() != b.size()) fail(ErrorCode::kDimensionMismatch, "skill vectors differ in length");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

SkillVector interpolate(const SkillVector& a, const SkillVector& b, double alpha) {
  if (a.size() != b.size()) fail(ErrorCode::kDimensionMismatch, "skill vectors differ in length");
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    fail(ErrorCode::kInvalidArgument, "interpolation alpha must lie in [0, 1]");
  }
  // Endpoints are returned exactly.
  if (alpha == 0.0) return a;
  if (alpha == 1.0) return b;
  SkillVector out{std::vector<double>(a.size())};
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.values[i] = (1.0 - alpha) * a.values[i] + alpha * b.values[i];
  }
  return out;
}

ActionVec act_through_memory(const PolicySpec& policy, const Hippocampus& hc,
                             const SkillVector& s, std::span<const double> state) {
  const ParamVector w = recall(hc, s);
  if (w.size() != policy.param_count()) {
    fail(ErrorCode::kDimensionMismatch, "recalled parameters do not fit the policy spec");
  }
  return forward(policy, w, state);
}

}  // namespace hippomem
