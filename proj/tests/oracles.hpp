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

// Independent reference implementations used by the tests. None of these
// call into the library code they are checking.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

// Plain-loop MLP: tanh hidden, identity output, per-layer [W row-major | b].
inline std::vector<double> mlp(const std::vector<std::size_t>& dims, const std::vector<double>& w,
                               std::vector<double> x) {
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const std::size_t in = dims[l], out = dims[l + 1];
    std::vector<double> y(out, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      double acc = 0.0;
      for (std::size_t i = 0; i < in; ++i) acc += w[off + o * in + i] * x[i];
      y[o] = acc + w[off + out * in + o];
      if (l + 2 < dims.size()) y[o] = std::tanh(y[o]);
    }
    off += out * in + out;
    x = std::move(y);
  }
  return x;
}

inline double mse(const std::vector<std::size_t>& dims, const std::vector<double>& w,
                  const std::vector<std::vector<double>>& xs,
                  const std::vector<std::vector<double>>& ys) {
  double total = 0.0;
  for (std::size_t n = 0; n < xs.size(); ++n) {
    const auto out = mlp(dims, w, xs[n]);
    for (std::size_t k = 0; k < out.size(); ++k) total += (out[k] - ys[n][k]) * (out[k] - ys[n][k]);
  }
  return total / static_cast<double>(xs.size());
}

inline std::vector<double> fd_grad(const std::vector<std::size_t>& dims, std::vector<double> w,
                                   const std::vector<std::vector<double>>& xs,
                                   const std::vector<std::vector<double>>& ys, double h) {
  std::vector<double> g(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double keep = w[i];
    w[i] = keep + h;
    const double up = mse(dims, w, xs, ys);
    w[i] = keep - h;
    const double dn = mse(dims, w, xs, ys);
    w[i] = keep;
    g[i] = (up - dn) / (2 * h);
  }
  return g;
}

// Finite-horizon backward recursion in Joseph form; returns the stage-0 gain.
inline Eigen::MatrixXd dp_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                               const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R, int horizon) {
  Eigen::MatrixXd P = Q;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(B.cols(), A.rows());
  for (int t = 0; t < horizon; ++t) {
    const Eigen::MatrixXd S = R + B.transpose() * P * B;
    K = S.ldlt().solve(B.transpose() * P * A);
    const Eigen::MatrixXd Acl = A - B * K;
    P = Q + K.transpose() * R * K + Acl.transpose() * P * Acl;
    P = 0.5 * (P + P.transpose()).eval();
  }
  return K;
}

// Scalar DARE p = q + a^2 p - a^2 b^2 p^2 / (r + b^2 p), positive root.
inline double scalar_dare(double a, double b, double q, double r) {
  const double b2 = b * b;
  // b2 p^2 + (r - a^2 r - q b2) p - q r = 0
  const double qa = b2, qb = r - a * a * r - q * b2, qc = -q * r;
  return (-qb + std::sqrt(qb * qb - 4 * qa * qc)) / (2 * qa);
}

// Kahn with a priority set, written against adjacency lists built here.
inline std::vector<std::string> topo_lex(const std::vector<std::string>& nodes,
                                         const std::vector<std::pair<std::string, std::string>>& edges) {
  std::map<std::string, int> indeg;
  std::map<std::string, std::vector<std::string>> succ;
  for (const auto& n : nodes) indeg[n] = 0;
  for (const auto& [u, v] : edges) {
    succ[u].push_back(v);
    ++indeg[v];
  }
  std::set<std::string> ready;
  for (const auto& [n, d] : indeg)
    if (d == 0) ready.insert(n);
  std::vector<std::string> order;
  while (!ready.empty()) {
    const std::string n = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(n);
    for (const auto& v : succ[n])
      if (--indeg[v] == 0) ready.insert(v);
  }
  return order;
}

// Bitwise CRC-32C, reflected, poly 0x82F63B78.
inline uint32_t crc32c(const std::string& s) {
  uint32_t crc = 0xFFFFFFFFu;
  for (unsigned char c : s) {
    crc ^= c;
    for (int k = 0; k < 8; ++k) crc = (crc >> 1) ^ (0x82F63B78u & (0u - (crc & 1u)));
  }
  return ~crc;
}

// Semi-implicit Euler for the two simple envs.
inline std::vector<double> point_mass_step(const std::vector<double>& s, double ax, double ay,
                                           double dt) {
  const double vx = s[2] + ax * dt, vy = s[3] + ay * dt;
  return {s[0] + vx * dt, s[1] + vy * dt, vx, vy};
}

inline std::vector<double> lander_step(const std::vector<double>& s, double u, double g,
                                       double dt) {
  const double v = s[1] + (u - g) * dt;
  return {s[0] + v * dt, v};
}

}  // namespace oracle
