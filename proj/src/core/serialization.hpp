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

#include <json.hpp>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "classical_control.hpp"
#include "distill.hpp"
#include "hippocampus.hpp"
#include "sim_envs.hpp"

namespace hippomem {

using Json = nlohmann::json;

// Little-endian IEEE-754 binary64, base64 encoded (RFC 4648, padded).
std::string encode_f64_array(std::span<const double> values);
std::vector<double> decode_f64_array(std::string_view text);  // throws kMalformedStore

std::string base64_encode(std::span<const unsigned char> bytes);
std::vector<unsigned char> base64_decode(std::string_view text);

// Plain JSON numbers round-trip binary64 exactly; NaN is written as null.
Json number_or_null(double v);
double number_or_nan(const Json& j);

Json env_to_json(const EnvParams& p);
// Starts from default_env(id) and applies any fields present. Unknown keys
// are rejected.
EnvParams env_from_json(const Json& j);

Json termination_to_json(const TerminationSpec& t);
TerminationSpec termination_from_json(const Json& j, const TerminationSpec& base = {});

Json metrics_to_json(const SkillMetrics& m);
SkillMetrics metrics_from_json(const Json& j);

Json policy_spec_to_json(const PolicySpec& spec);
PolicySpec policy_spec_from_json(const Json& j);

Json ae_spec_to_json(const AutoencoderSpec& spec);
AutoencoderSpec ae_spec_from_json(const Json& j);

Json ae_hyper_to_json(const AeHyper& h);
AeHyper ae_hyper_from_json(const Json& j, const AeHyper& base = {});

// Rejects keys outside `allowed` with kConfigInvalid, naming `where`.
void check_keys(const Json& j, std::initializer_list<std::string_view> allowed,
                std::string_view where);

}  // namespace hippomem
