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

#include "serialization.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

#include "error.hpp"

namespace hippomem {

namespace {

constexpr char kAlphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int b64_value(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}

}  // namespace

std::string base64_encode(std::span<const unsigned char> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const unsigned v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  if (const std::size_t rest = bytes.size() - i; rest > 0) {
    unsigned v = bytes[i] << 16;
    if (rest == 2) v |= bytes[i + 1] << 8;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += rest == 2 ? kAlphabet[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

std::vector<unsigned char> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) fail(ErrorCode::kMalformedStore, "base64 length not a multiple of 4");
  std::vector<unsigned char> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int v[4];
    int pad = 0;
    for (int j = 0; j < 4; ++j) {
      const char c = text[i + static_cast<std::size_t>(j)];
      if (c == '=' && i + 4 == text.size() && j >= 2) {
        v[j] = 0;
        ++pad;
      } else if (pad > 0 || (v[j] = b64_value(c)) < 0) {
        fail(ErrorCode::kMalformedStore, "invalid base64 character");
      }
    }
    const unsigned word = (static_cast<unsigned>(v[0]) << 18) | (static_cast<unsigned>(v[1]) << 12) |
                          (static_cast<unsigned>(v[2]) << 6) | static_cast<unsigned>(v[3]);
    out.push_back(static_cast<unsigned char>(word >> 16));
    if (pad < 2) out.push_back(static_cast<unsigned char>(word >> 8));
    if (pad < 1) out.push_back(static_cast<unsigned char>(word));
  }
  return out;
}

std::string encode_f64_array(std::span<const double> values) {
  std::vector<unsigned char> bytes(values.size() * 8);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto bits = std::bit_cast<uint64_t>(values[i]);
    for (int b = 0; b < 8; ++b) bytes[i * 8 + static_cast<std::size_t>(b)] =
        static_cast<unsigned char>(bits >> (8 * b));
  }
  return base64_encode(bytes);
}

std::vector<double> decode_f64_array(std::string_view text) {
  const auto bytes = base64_decode(text);
  if (bytes.size() % 8 != 0) fail(ErrorCode::kMalformedStore, "float array byte length not a multiple of 8");
  std::vector<double> out(bytes.size() / 8);
  for (std::size_t i = 0; i < out.size(); ++i) {
    uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<uint64_t>(bytes[i * 8 + static_cast<std::size_t>(b)]) << (8 * b);
    out[i] = std::bit_cast<double>(bits);
  }
  return out;
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double number_or_nan(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

void check_keys(const Json& j, std::initializer_list<std::string_view> allowed,
                std::string_view where) {
  if (!j.is_object()) fail(ErrorCode::kConfigInvalid, std::string(where) + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(ErrorCode::kConfigInvalid, "unknown key '" + key + "' in " + std::string(where));
    }
  }
}

Json env_to_json(const EnvParams& p) {
  return Json{{"id", env_name(p.id)},
              {"dt", p.dt},
              {"gravity", p.gravity},
              {"cart_mass", p.cart_mass},
              {"pole_mass", p.pole_mass},
              {"pole_half_length", p.pole_half_length},
              {"action_lo", p.action_lo},
              {"action_hi", p.action_hi},
              {"goal", p.goal},
              {"init_lo", p.init_lo},
              {"init_hi", p.init_hi},
              {"sample_lo", p.sample_lo},
              {"sample_hi", p.sample_hi},
              {"divergence_bound", p.divergence_bound}};
}

EnvParams env_from_json(const Json& j) {
  check_keys(j, {"id", "dt", "gravity", "cart_mass", "pole_mass", "pole_half_length", "action_lo",
                 "action_hi", "goal", "target", "init_lo", "init_hi", "sample_lo", "sample_hi",
                 "divergence_bound"},
             "env");
  if (!j.contains("id")) fail(ErrorCode::kConfigInvalid, "env.id is required");
  EnvParams p = default_env(parse_env_id(j.at("id").get<std::string>()));
  auto num = [&](const char* key, double& out) {
    if (j.contains(key)) out = j.at(key).get<double>();
  };
  auto vec = [&](const char* key, std::vector<double>& out) {
    if (j.contains(key)) out = j.at(key).get<std::vector<double>>();
  };
  num("dt", p.dt);
  num("gravity", p.gravity);
  num("cart_mass", p.cart_mass);
  num("pole_mass", p.pole_mass);
  num("pole_half_length", p.pole_half_length);
  num("divergence_bound", p.divergence_bound);
  vec("action_lo", p.action_lo);
  vec("action_hi", p.action_hi);
  vec("goal", p.goal);
  vec("init_lo", p.init_lo);
  vec("init_hi", p.init_hi);
  vec("sample_lo", p.sample_lo);
  vec("sample_hi", p.sample_hi);
  if (j.contains("target")) {
    p.goal = goal_state_from_target(p.id, j.at("target").get<std::vector<double>>());
  }
  validate_env(p);
  return p;
}

Json termination_to_json(const TerminationSpec& t) {
  return Json{{"tolerance", t.tolerance}, {"hold_steps", t.hold_steps}, {"max_steps", t.max_steps}};
}

TerminationSpec termination_from_json(const Json& j, const TerminationSpec& base) {
  check_keys(j, {"tolerance", "hold_steps", "max_steps"}, "termination");
  TerminationSpec t = base;
  if (j.contains("tolerance")) t.tolerance = j.at("tolerance").get<double>();
  if (j.contains("hold_steps")) t.hold_steps = j.at("hold_steps").get<int>();
  if (j.contains("max_steps")) t.max_steps = j.at("max_steps").get<int>();
  validate_termination(t);
  return t;
}

Json metrics_to_json(const SkillMetrics& m) {
  return Json{{"train_mse", number_or_null(m.train_mse)},
              {"holdout_mse", number_or_null(m.holdout_mse)},
              {"success_rate", number_or_null(m.success_rate)},
              {"mean_steps_to_success", number_or_null(m.mean_steps_to_success)},
              {"n_eval", m.n_eval}};
}

SkillMetrics metrics_from_json(const Json& j) {
  SkillMetrics m;
  m.train_mse = number_or_nan(j.at("train_mse"));
  m.holdout_mse = number_or_nan(j.at("holdout_mse"));
  m.success_rate = number_or_nan(j.at("success_rate"));
  m.mean_steps_to_success = number_or_nan(j.at("mean_steps_to_success"));
  m.n_eval = j.at("n_eval").get<int>();
  return m;
}

Json policy_spec_to_json(const PolicySpec& spec) {
  return Json{{"layer_dims", spec.layer_dims}, {"out_lo", spec.out_lo}, {"out_hi", spec.out_hi}};
}

PolicySpec policy_spec_from_json(const Json& j) {
  PolicySpec spec;
  spec.layer_dims = j.at("layer_dims").get<LayerDims>();
  spec.out_lo = j.at("out_lo").get<std::vector<double>>();
  spec.out_hi = j.at("out_hi").get<std::vector<double>>();
  validate_policy_spec(spec);
  return spec;
}

Json ae_spec_to_json(const AutoencoderSpec& spec) {
  return Json{{"m", spec.m}, {"hidden", spec.hidden}, {"n", spec.n}};
}

AutoencoderSpec ae_spec_from_json(const Json& j) {
  AutoencoderSpec spec;
  spec.m = j.at("m").get<std::size_t>();
  spec.hidden = j.at("hidden").get<std::vector<std::size_t>>();
  spec.n = j.at("n").get<std::size_t>();
  validate_ae_spec(spec);
  return spec;
}

Json ae_hyper_to_json(const AeHyper& h) {
  return Json{{"lr", h.adam.lr},
              {"beta1", h.adam.beta1},
              {"beta2", h.adam.beta2},
              {"eps", h.adam.eps},
              {"max_epochs", h.max_epochs},
              {"fidelity_target", h.fidelity_target},
              {"check_every", h.check_every}};
}

AeHyper ae_hyper_from_json(const Json& j, const AeHyper& base) {
  AeHyper h = base;
  if (j.contains("lr")) h.adam.lr = j.at("lr").get<double>();
  if (j.contains("beta1")) h.adam.beta1 = j.at("beta1").get<double>();
  if (j.contains("beta2")) h.adam.beta2 = j.at("beta2").get<double>();
  if (j.contains("eps")) h.adam.eps = j.at("eps").get<double>();
  if (j.contains("max_epochs")) h.max_epochs = j.at("max_epochs").get<int>();
  if (j.contains("fidelity_target")) h.fidelity_target = j.at("fidelity_target").get<double>();
  if (j.contains("check_every")) h.check_every = j.at("check_every").get<int>();
  return h;
}

}  // namespace hippomem
