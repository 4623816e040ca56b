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
#include <cstdint>
#include <span>
#include <vector>

namespace hippomem {

// Layer widths [d0, d1, ..., dL]; tanh on hidden layers, identity output.
using LayerDims = std::vector<std::size_t>;

std::size_t param_count(const LayerDims& dims);
void validate_dims(const LayerDims& dims);

// The fixed policy architecture. Output clipping applies only at inference;
// the training graph sees unclipped outputs.
struct PolicySpec {
  LayerDims layer_dims;
  std::vector<double> out_lo;
  std::vector<double> out_hi;

  std::size_t input_dim() const { return layer_dims.front(); }
  std::size_t output_dim() const { return layer_dims.back(); }
  std::size_t param_count() const { return hippomem::param_count(layer_dims); }
  bool operator==(const PolicySpec&) const = default;
};

void validate_policy_spec(const PolicySpec& spec);

// Flattened parameters. Layout: layers in order; per layer the weight matrix
// row-major (rows = output units) followed by the bias vector.
struct ParamVector {
  std::vector<double> data;

  std::size_t size() const { return data.size(); }
  bool operator==(const ParamVector&) const = default;
};

struct GradVector {
  std::vector<double> data;
};

struct LayerTensors {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weights;  // out x in, row-major
  std::vector<double> bias;     // out

  bool operator==(const LayerTensors&) const = default;
};

ParamVector flatten(const LayerDims& dims, const std::vector<LayerTensors>& layers);
std::vector<LayerTensors> unflatten(const LayerDims& dims, const ParamVector& params);

// Glorot-uniform weights, zero biases.
ParamVector init_params(const LayerDims& dims, uint64_t seed);

// Column-per-sample training data.
struct Batch {
  Eigen::MatrixXd inputs;   // d0 x N
  Eigen::MatrixXd targets;  // dL x N

  Eigen::Index size() const { return inputs.cols(); }
};

Batch make_batch(const std::vector<std::vector<double>>& inputs,
                 const std::vector<std::vector<double>>& targets);

// Unclipped network output for one input.
std::vector<double> forward_raw(const LayerDims& dims, std::span<const double> params,
                                std::span<const double> input);
// Policy evaluation: forward_raw then clip to the spec's bounds.
std::vector<double> forward(const PolicySpec& spec, const ParamVector& params,
                            std::span<const double> input);

Eigen::MatrixXd forward_batch(const LayerDims& dims, std::span<const double> params,
                              const Eigen::MatrixXd& inputs);

struct LossGrad {
  double loss = 0.0;
  GradVector grad;
};

// Mean over samples of the squared Euclidean output error, with the exact
// reverse-mode gradient.
LossGrad loss_and_grad(const LayerDims& dims, const ParamVector& params, const Batch& batch);
double batch_loss(const LayerDims& dims, std::span<const double> params, const Batch& batch);

// Reverse-mode pass reusable for composed networks (the autoencoder chains
// two of these). Caches activations of one forward pass.
class ForwardCache {
 public:
  ForwardCache(const LayerDims& dims, std::span<const double> params,
               const Eigen::MatrixXd& inputs);

  const Eigen::MatrixXd& output() const { return acts_.back(); }

  // Accumulates dLoss/dparams into grad (same layout as params) and returns
  // dLoss/dinputs.
  Eigen::MatrixXd backward(const Eigen::MatrixXd& d_output, std::span<double> grad) const;

 private:
  const LayerDims& dims_;
  std::span<const double> params_;
  std::vector<Eigen::MatrixXd> acts_;
};

struct AdamHyper {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long long t = 0;

  explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

void adam_step(std::span<double> params, std::span<const double> grad, AdamState& state,
               const AdamHyper& hyper);

}  // namespace hippomem
