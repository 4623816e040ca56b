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

#include "error.hpp"

namespace hippomem {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kDimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::kUnknownEnv: return "UNKNOWN_ENV";
    case ErrorCode::kUnknownSkill: return "UNKNOWN_SKILL";
    case ErrorCode::kDuplicateSkill: return "DUPLICATE_SKILL";
    case ErrorCode::kConfigInvalid: return "CONFIG_INVALID";
    case ErrorCode::kGraphInvalid: return "GRAPH_INVALID";
    case ErrorCode::kNonConvergence: return "NON_CONVERGENCE";
    case ErrorCode::kNotPositiveDefinite: return "NOT_POSITIVE_DEFINITE";
    case ErrorCode::kNonFinite: return "NON_FINITE";
    case ErrorCode::kEmptyInput: return "EMPTY_INPUT";
    case ErrorCode::kStoreNotBuilt: return "STORE_NOT_BUILT";
    case ErrorCode::kStoreStale: return "STORE_STALE";
    case ErrorCode::kVersionMismatch: return "VERSION_MISMATCH";
    case ErrorCode::kChecksumMismatch: return "CHECKSUM_MISMATCH";
    case ErrorCode::kMalformedStore: return "MALFORMED_STORE";
    case ErrorCode::kIo: return "IO_ERROR";
    case ErrorCode::kFidelity: return "FIDELITY_FAILURE";
    case ErrorCode::kCheckFailed: return "CHECK_FAILED";
    case ErrorCode::kExecutionAborted: return "EXECUTION_ABORTED";
  }
  return "UNKNOWN";
}

}  // namespace hippomem
