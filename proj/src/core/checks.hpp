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

namespace hippomem {

struct GradCheckReport {
  int cases = 0;
  double max_rel_error = 0.0;
  double max_abs_error_small = 0.0;  // over entries with magnitude < 1e-8
  bool ok = false;
};

// Random (architecture, params, batch) instances; analytic gradients against
// central differences with step h.
GradCheckReport grad_check(uint64_t seed, int cases = 20, double h = 1e-5, double rel_tol = 1e-5,
                           double abs_tol = 1e-8);

struct RiccatiCheckReport {
  double scalar_p_error = 0.0;
  double scalar_k_error = 0.0;
  int random_cases = 0;
  double max_dp_gap = 0.0;  // max-abs gap to horizon-500 backward recursion
  double max_residual = 0.0;
  bool ok = false;
};

RiccatiCheckReport riccati_check(uint64_t seed, int cases = 20);

}  // namespace hippomem
