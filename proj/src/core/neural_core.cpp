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

#include "neural_core.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "rng.hpp"

namespace hippomem {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstRowMap = Eigen::Map<const RowMat>;
using RowMap = Eigen::Map<RowMat>;
using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;
using VecMap = Eigen::Map<Eigen::VectorXd>;

}  // namespace

void validate_dims(const LayerDims& dims) {
  if (dims.size() < 2) fail(ErrorCode::kInvalidArgument, "a network needs at least one layer");
  for (std::size_t d : dims) {
    if (d == 0) fail(ErrorCode::kInvalidArgument, "layer widths must be >= 1");
  }
}

std::size_t param_count(const LayerDims& dims) {
  std::size_t m = 0;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) m += dims[i] * dims[i + 1] + dims[i + 1];
  return m;
}

void validate_policy_spec(const PolicySpec& spec) {
  validate_dims(spec.layer_dims);
  const std::size_t k = spec.output_dim();
  if (spec.out_lo.size() != k || spec.out_hi.size() != k) {
    fail(ErrorCode::kDimensionMismatch, "policy output bounds do not match output width");
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (!(spec.out_lo[i] < spec.out_hi[i])) {
      fail(ErrorCode::kInvalidArgument, "policy output bounds require lo < hi");
    }
  }
}

ParamVector flatten(const LayerDims& dims, const std::vector<LayerTensors>& layers) {
  validate_dims(dims);
  if (layers.size() + 1 != dims.size()) {
    fail(ErrorCode::kDimensionMismatch, "layer count does not match schema");
  }
  ParamVector out;
  out.data.reserve(param_count(dims));
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const LayerTensors& t = layers[l];
    if (t.in != dims[l] || t.out != dims[l + 1] || t.weights.size() != t.in * t.out ||
        t.bias.size() != t.out) {
      fail(ErrorCode::kDimensionMismatch, "layer " + std::to_string(l) + " shape mismatch");
    }
    out.data.insert(out.data.end(), t.weights.begin(), t.weights.end());
    out.data.insert(out.data.end(), t.bias.begin(), t.bias.end());
  }
  return out;
}

std::vector<LayerTensors> unflatten(const LayerDims& dims, const ParamVector& params) {
  validate_dims(dims);
  if (params.size() != param_count(dims)) {
    fail(ErrorCode::kDimensionMismatch, "parameter vector length " +
                                            std::to_string(params.size()) + " != " +
                                            std::to_string(param_count(dims)));
  }
  std::vector<LayerTensors> layers;
  auto it = params.data.begin();
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    LayerTensors t;
    t.in = dims[l];
    t.out = dims[l + 1];
    t.weights.assign(it, it + static_cast<std::ptrdiff_t>(t.in * t.out));
    it += static_cast<std::ptrdiff_t>(t.in * t.out);
    t.bias.assign(it, it + static_cast<std::ptrdiff_t>(t.out));
    it += static_cast<std::ptrdiff_t>(t.out);
    layers.push_back(std::move(t));
  }
  return layers;
}

ParamVector init_params(const LayerDims& dims, uint64_t seed) {
  validate_dims(dims);
  Rng rng(seed);
  ParamVector p;
  p.data.reserve(param_count(dims));
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const double fan_in = static_cast<double>(dims[l]);
    const double fan_out = static_cast<double>(dims[l + 1]);
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    for (std::size_t i = 0; i < dims[l] * dims[l + 1]; ++i) {
      p.data.push_back(rng.uniform(-bound, bound));
    }
    p.data.insert(p.data.end(), dims[l + 1], 0.0);
  }
  return p;
}

Batch make_batch(const std::vector<std::vector<double>>& inputs,
                 const std::vector<std::vector<double>>& targets) {
  if (inputs.size() != targets.size()) {
    fail(ErrorCode::kDimensionMismatch, "inputs and targets differ in length");
  }
  Batch b;
  if (inputs.empty()) return b;
  const auto n = static_cast<Eigen::Index>(inputs.size());
  const auto din = static_cast<Eigen::Index>(inputs.front().size());
  const auto dout = static_cast<Eigen::Index>(targets.front().size());
  b.inputs.resize(din, n);
  b.targets.resize(dout, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& x = inputs[static_cast<std::size_t>(j)];
    const auto& y = targets[static_cast<std::size_t>(j)];
    if (static_cast<Eigen::Index>(x.size()) != din ||
        static_cast<Eigen::Index>(y.size()) != dout) {
      fail(ErrorCode::kDimensionMismatch, "ragged batch");
    }
    b.inputs.col(j) = ConstVecMap(x.data(), din);
    b.targets.col(j) = ConstVecMap(y.data(), dout);
  }
  return b;
}

namespace {

void check_params(const LayerDims& dims, std::span<const double> params) {
  if (params.size() != param_count(dims)) {
    fail(ErrorCode::kDimensionMismatch, "parameter vector length " +
                                            std::to_string(params.size()) + " != " +
                                            std::to_string(param_count(dims)));
  }
}

}  // namespace

std::vector<double> forward_raw(const LayerDims& dims, std::span<const double> params,
                                std::span<const double> input) {
  validate_dims(dims);
  check_params(dims, params);
  if (input.size() != dims.front()) {
    fail(ErrorCode::kDimensionMismatch, "input has dimension " + std::to_string(input.size()) +
                                            ", expected " + std::to_string(dims.front()));
  }
  Eigen::VectorXd a = ConstVecMap(input.data(), static_cast<Eigen::Index>(input.size()));
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const auto in = static_cast<Eigen::Index>(dims[l]);
    const auto out = static_cast<Eigen::Index>(dims[l + 1]);
    ConstRowMap W(params.data() + off, out, in);
    off += dims[l] * dims[l + 1];
    ConstVecMap b(params.data() + off, out);
    off += dims[l + 1];
    Eigen::VectorXd z = W * a + b;
    a = l + 2 < dims.size() ? Eigen::VectorXd(z.array().tanh()) : z;
  }
  return {a.data(), a.data() + a.size()};
}

std::vector<double> forward(const PolicySpec& spec, const ParamVector& params,
                            std::span<const double> input) {
  std::vector<double> y = forward_raw(spec.layer_dims, params.data, input);
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = std::clamp(y[i], spec.out_lo[i], spec.out_hi[i]);
  }
  return y;
}

Eigen::MatrixXd forward_batch(const LayerDims& dims, std::span<const double> params,
                              const Eigen::MatrixXd& inputs) {
  return ForwardCache(dims, params, inputs).output();
}

ForwardCache::ForwardCache(const LayerDims& dims, std::span<const double> params,
                           const Eigen::MatrixXd& inputs)
    : dims_(dims), params_(params) {
  validate_dims(dims);
  check_params(dims, params);
  if (inputs.rows() != static_cast<Eigen::Index>(dims.front())) {
    fail(ErrorCode::kDimensionMismatch, "batch input width does not match network");
  }
  acts_.reserve(dims.size());
  acts_.push_back(inputs);
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const auto in = static_cast<Eigen::Index>(dims[l]);
    const auto out = static_cast<Eigen::Index>(dims[l + 1]);
    ConstRowMap W(params.data() + off, out, in);
    off += dims[l] * dims[l + 1];
    ConstVecMap b(params.data() + off, out);
    off += dims[l + 1];
    Eigen::MatrixXd z = W * acts_.back();
    z.colwise() += b;
    if (l + 2 < dims.size()) z = z.array().tanh().matrix();
    acts_.push_back(std::move(z));
  }
}

Eigen::MatrixXd ForwardCache::backward(const Eigen::MatrixXd& d_output,
                                       std::span<double> grad) const {
  if (grad.size() != params_.size()) {
    fail(ErrorCode::kDimensionMismatch, "gradient buffer length mismatch");
  }
  const std::size_t L = dims_.size() - 1;
  std::vector<std::size_t> offsets(L);
  std::size_t off = 0;
  for (std::size_t l = 0; l < L; ++l) {
    offsets[l] = off;
    off += dims_[l] * dims_[l + 1] + dims_[l + 1];
  }
  Eigen::MatrixXd delta = d_output;
  for (std::size_t l = L; l-- > 0;) {
    const auto in = static_cast<Eigen::Index>(dims_[l]);
    const auto out = static_cast<Eigen::Index>(dims_[l + 1]);
    ConstRowMap W(params_.data() + offsets[l], out, in);
    RowMap gW(grad.data() + offsets[l], out, in);
    VecMap gb(grad.data() + offsets[l] + dims_[l] * dims_[l + 1], out);
    gW.noalias() += delta * acts_[l].transpose();
    gb.noalias() += delta.rowwise().sum();
    Eigen::MatrixXd d_in = W.transpose() * delta;
    if (l > 0) {
      delta = d_in.array() * (1.0 - acts_[l].array().square());
    } else {
      return d_in;
    }
  }
  return delta;
}

LossGrad loss_and_grad(const LayerDims& dims, const ParamVector& params, const Batch& batch) {
  if (batch.size() == 0) fail(ErrorCode::kEmptyInput, "loss over an empty batch");
  ForwardCache cache(dims, params.data, batch.inputs);
  if (batch.targets.rows() != static_cast<Eigen::Index>(dims.back()) ||
      batch.targets.cols() != batch.size()) {
    fail(ErrorCode::kDimensionMismatch, "batch targets do not match network output");
  }
  const double n = static_cast<double>(batch.size());
  const Eigen::MatrixXd diff = cache.output() - batch.targets;
  LossGrad out;
  out.loss = diff.squaredNorm() / n;
  out.grad.data.assign(params.size(), 0.0);
  cache.backward((2.0 / n) * diff, out.grad.data);
  return out;
}

double batch_loss(const LayerDims& dims, std::span<const double> params, const Batch& batch) {
  if (batch.size() == 0) fail(ErrorCode::kEmptyInput, "loss over an empty batch");
  return (forward_batch(dims, params, batch.inputs) - batch.targets).squaredNorm() /
         static_cast<double>(batch.size());
}

void adam_step(std::span<double> params, std::span<const double> grad, AdamState& state,
               const AdamHyper& hyper) {
  if (params.size() != grad.size() || state.m.size() != params.size() ||
      state.v.size() != params.size()) {
    fail(ErrorCode::kDimensionMismatch, "Adam buffers are not aligned");
  }
  ++state.t;
  const double c1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = hyper.beta1 * state.m[i] + (1.0 - hyper.beta1) * grad[i];
    state.v[i] = hyper.beta2 * state.v[i] + (1.0 - hyper.beta2) * grad[i] * grad[i];
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    params[i] -= hyper.lr * m_hat / (std::sqrt(v_hat) + hyper.eps);
  }
}

}  // namespace hippomem
