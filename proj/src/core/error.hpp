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

#include <stdexcept>
#include <string>
#include <string_view>

namespace hippomem {

// Stable, machine-parsable failure categories. The C API maps these one to
// one onto hm_status values.
enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kUnknownEnv,
  kUnknownSkill,
  kDuplicateSkill,
  kConfigInvalid,
  kGraphInvalid,
  kNonConvergence,
  kNotPositiveDefinite,
  kNonFinite,
  kEmptyInput,
  kStoreNotBuilt,
  kStoreStale,
  kVersionMismatch,
  kChecksumMismatch,
  kMalformedStore,
  kIo,
  kFidelity,
  kCheckFailed,
  kExecutionAborted,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace hippomem
