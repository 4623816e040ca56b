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

#include "checks.hpp"

#include <algorithm>
#include <cmath>

#include "classical_control.hpp"
#include "neural_core.hpp"
#include "rng.hpp"

namespace hippomem {

GradCheckReport grad_check(uint64_t seed, int cases, double h, double rel_tol, double abs_tol) {
  GradCheckReport rep;
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    LayerDims dims;
    const int depth = 1 + static_cast<int>(rng.index(3));
    for (int l = 0; l <= depth; ++l) dims.push_back(1 + rng.index(5));
    ParamVector w = init_params(dims, rng.next_u64());
    for (double& x : w.data) x += rng.uniform(-0.5, 0.5);
    const int n = 1 + static_cast<int>(rng.index(6));
    std::vector<std::vector<double>> xs, ys;
    for (int i = 0; i < n; ++i) {
      std::vector<double> x(dims.front()), y(dims.back());
      for (double& v : x) v = rng.uniform(-2.0, 2.0);
      for (double& v : y) v = rng.uniform(-1.0, 1.0);
      xs.push_back(x);
      ys.push_back(y);
    }
    const Batch batch = make_batch(xs, ys);
    const LossGrad lg = loss_and_grad(dims, w, batch);
    for (std::size_t i = 0; i < w.size(); ++i) {
      ParamVector plus = w, minus = w;
      plus.data[i] += h;
      minus.data[i] -= h;
      const double fd =
          (batch_loss(dims, plus.data, batch) - batch_loss(dims, minus.data, batch)) / (2.0 * h);
      const double an = lg.grad.data[i];
      const double mag = std::max(std::abs(fd), std::abs(an));
      if (mag < 1e-8) {
        rep.max_abs_error_small = std::max(rep.max_abs_error_small, std::abs(fd - an));
      } else {
        rep.max_rel_error = std::max(rep.max_rel_error, std::abs(fd - an) / mag);
      }
    }
    ++rep.cases;
  }
  rep.ok = rep.max_rel_error <= rel_tol && rep.max_abs_error_small <= abs_tol;
  return rep;
}

RiccatiCheckReport riccati_check(uint64_t seed, int cases) {
  RiccatiCheckReport rep;
  {
    LqrProblem p{Eigen::MatrixXd::Ones(1, 1), Eigen::MatrixXd::Ones(1, 1),
                 Eigen::MatrixXd::Ones(1, 1), Eigen::MatrixXd::Ones(1, 1)};
    const LqrSolution sol = lqr_solve(p);
    const double p_star = (1.0 + std::sqrt(5.0)) / 2.0;
    rep.scalar_p_error = std::abs(sol.P(0, 0) - p_star);
    rep.scalar_k_error = std::abs(sol.K(0, 0) - p_star / (1.0 + p_star));
  }
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    LqrProblem p;
    p.A = Eigen::MatrixXd(2, 2);
    p.B = Eigen::MatrixXd(2, 1);
    for (Eigen::Index i = 0; i < 4; ++i) p.A(i) = rng.uniform(-1.2, 1.2);
    p.B << rng.uniform(0.2, 1.0), rng.uniform(-1.0, 1.0);
    p.Q = Eigen::MatrixXd::Identity(2, 2) * rng.uniform(0.5, 2.0);
    p.R = Eigen::MatrixXd::Identity(1, 1) * rng.uniform(0.5, 2.0);
    const LqrSolution sol = lqr_solve(p);
    // Backward recursion in Joseph form over a finite horizon.
    Eigen::MatrixXd P = p.Q, K;
    for (int t = 0; t < 500; ++t) {
      K = (p.R + p.B.transpose() * P * p.B).ldlt().solve(p.B.transpose() * P * p.A);
      const Eigen::MatrixXd Acl = p.A - p.B * K;
      P = p.Q + K.transpose() * p.R * K + Acl.transpose() * P * Acl;
    }
    rep.max_dp_gap = std::max(rep.max_dp_gap, (K - sol.K).cwiseAbs().maxCoeff());
    rep.max_residual =
        std::max(rep.max_residual, (sol.P - riccati_map(p, sol.P)).cwiseAbs().maxCoeff());
    ++rep.random_cases;
  }
  rep.ok = rep.scalar_p_error <= 1e-8 && rep.scalar_k_error <= 1e-8 && rep.max_dp_gap <= 1e-6 &&
           rep.max_residual <= 10 * kRiccatiTol;
  return rep;
}

}  // namespace hippomem
