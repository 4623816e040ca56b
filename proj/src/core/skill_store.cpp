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

#include "skill_store.hpp"

#include <algorithm>
#include <bit>
#include <boost/crc.hpp>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "error.hpp"
#include "serialization.hpp"

namespace hippomem {

void add_skill(SkillStore& store, SkillRecord record) {
  if (record.name.empty()) fail(ErrorCode::kInvalidArgument, "skill name must be nonempty");
  if (record.params.size() != store.policy.param_count()) {
    fail(ErrorCode::kDimensionMismatch, "skill '" + record.name + "' has " +
                                            std::to_string(record.params.size()) +
                                            " parameters, store policy has " +
                                            std::to_string(store.policy.param_count()));
  }
  auto it = std::lower_bound(store.skills.begin(), store.skills.end(), record.name,
                             [](const SkillRecord& r, const std::string& n) { return r.name < n; });
  if (it != store.skills.end() && it->name == record.name) {
    fail(ErrorCode::kDuplicateSkill, "skill '" + record.name + "' already exists");
  }
  store.skills.insert(it, std::move(record));
  store.needs_rebuild = true;
}

const SkillRecord& get_skill(const SkillStore& store, const std::string& name) {
  auto it = std::lower_bound(store.skills.begin(), store.skills.end(), name,
                             [](const SkillRecord& r, const std::string& n) { return r.name < n; });
  if (it == store.skills.end() || it->name != name) {
    fail(ErrorCode::kUnknownSkill, "no skill named '" + name + "'");
  }
  return *it;
}

std::vector<std::string> list_skills(const SkillStore& store) {
  std::vector<std::string> names;
  for (const auto& r : store.skills) names.push_back(r.name);
  return names;
}

AeTrainResult build_memory(SkillStore& store) {
  if (store.skills.empty()) fail(ErrorCode::kEmptyInput, "store has no skills to memorize");
  std::vector<ParamVector> ws;
  for (const auto& r : store.skills) ws.push_back(r.params);
  store.ae_spec.m = store.policy.param_count();
  validate_ae_spec(store.ae_spec);
  store.stats = fit_normalization(ws);
  std::optional<AeParams> warm;
  if (store.ae.data.size() == store.ae_spec.param_count()) warm = store.ae;
  AeTrainResult res = train_autoencoder(ws, store.ae_spec, store.stats, store.ae_hyper,
                                        store.ae_seed, warm);
  store.ae = res.params;
  store.ae_epochs = res.epochs;
  store.below_target_fidelity = res.below_target_fidelity;
  ++store.rebuild_counter;
  const Hippocampus hc = store.hippocampus();
  for (auto& r : store.skills) {
    r.skill = encode(hc, r.params);
    r.recon_error = relative_recon_error(hc, r.params);
    r.encoded_at = store.rebuild_counter;
  }
  store.needs_rebuild = false;
  return res;
}

VerifyReport verify_store(const SkillStore& store) {
  if (!store.built()) fail(ErrorCode::kStoreNotBuilt, "memory has never been built for this store");
  if (store.needs_rebuild) {
    fail(ErrorCode::kStoreStale, "skills were added since the last memory build");
  }
  const Hippocampus hc = store.hippocampus();
  VerifyReport report;
  report.ok = true;
  for (const auto& r : store.skills) {
    SkillAudit a;
    a.name = r.name;
    const SkillVector s = encode(hc, r.params);
    a.recon_error = relative_recon_error(hc, r.params);
    a.skill_vector_matches =
        r.encoded_at == store.rebuild_counter && s.size() == r.skill.size() &&
        std::equal(s.values.begin(), s.values.end(), r.skill.values.begin(),
                   [](double x, double y) { return std::bit_cast<uint64_t>(x) == std::bit_cast<uint64_t>(y); });
    a.recon_error_matches =
        std::bit_cast<uint64_t>(a.recon_error) == std::bit_cast<uint64_t>(r.recon_error);
    a.fidelity_ok = a.recon_error <= kFidelityThreshold;
    const EvalResult orig = evaluate_policy(r.env, store.policy, r.params, r.termination, r.eval_seeds);
    const EvalResult mem =
        evaluate_policy(r.env, store.policy, recall(hc, s), r.termination, r.eval_seeds);
    for (std::size_t i = 0; i < orig.outcomes.size(); ++i) {
      if (orig.outcomes[i] != Outcome::kSuccess) continue;
      ++a.original_successes;
      if (mem.outcomes[i] == Outcome::kSuccess) ++a.preserved_successes;
    }
    a.behavior_ok = 10 * a.preserved_successes >= 9 * a.original_successes;
    report.ok = report.ok && a.skill_vector_matches && a.recon_error_matches && a.fidelity_ok &&
                a.behavior_ok;
    report.skills.push_back(std::move(a));
  }
  return report;
}

uint32_t crc32c(std::string_view bytes) {
  boost::crc_optimal<32, 0x1EDC6F41, 0xFFFFFFFF, 0xFFFFFFFF, true, true> crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

namespace {

constexpr const char* kFormatTag = "hippomem.skillstore";

Json record_to_json(const SkillRecord& r) {
  return Json{{"name", r.name},
              {"family", r.family},
              {"params", encode_f64_array(r.params.data)},
              {"skill_vector", encode_f64_array(r.skill.values)},
              {"recon_error", encode_f64_array(std::span<const double>(&r.recon_error, 1))},
              {"encoded_at", r.encoded_at},
              {"env", env_to_json(r.env)},
              {"termination", termination_to_json(r.termination)},
              {"metrics", metrics_to_json(r.metrics)},
              {"oracle_success_rate", r.oracle_success_rate},
              {"eval_seeds", r.eval_seeds}};
}

double decode_scalar(const Json& j) {
  const auto v = decode_f64_array(j.get<std::string>());
  if (v.size() != 1) fail(ErrorCode::kMalformedStore, "expected a single binary64 value");
  return v.front();
}

SkillRecord record_from_json(const Json& j) {
  SkillRecord r;
  r.name = j.at("name").get<std::string>();
  r.family = j.at("family").get<std::string>();
  r.params.data = decode_f64_array(j.at("params").get<std::string>());
  r.skill.values = decode_f64_array(j.at("skill_vector").get<std::string>());
  r.recon_error = decode_scalar(j.at("recon_error"));
  r.encoded_at = j.at("encoded_at").get<uint64_t>();
  r.env = env_from_json(j.at("env"));
  r.termination = termination_from_json(j.at("termination"));
  r.metrics = metrics_from_json(j.at("metrics"));
  r.oracle_success_rate = j.at("oracle_success_rate").get<double>();
  r.eval_seeds = j.at("eval_seeds").get<std::vector<uint64_t>>();
  return r;
}

std::string checksum_text(const Json& body) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%08x", crc32c(body.dump()));
  return std::string("crc32c:") + buf;
}

}  // namespace

std::string serialize_store(const SkillStore& store) {
  Json skills = Json::array();
  for (const auto& r : store.skills) skills.push_back(record_to_json(r));
  Json body{{"format", kFormatTag},
            {"version", store.version},
            {"rebuild_counter", store.rebuild_counter},
            {"needs_rebuild", store.needs_rebuild},
            {"policy", policy_spec_to_json(store.policy)},
            {"env", env_to_json(store.env)},
            {"termination", termination_to_json(store.termination)},
            {"autoencoder",
             {{"spec", ae_spec_to_json(store.ae_spec)},
              {"hyper", ae_hyper_to_json(store.ae_hyper)},
              {"seed", store.ae_seed},
              {"params", encode_f64_array(store.ae.data)},
              {"epochs", store.ae_epochs},
              {"below_target_fidelity", store.below_target_fidelity}}},
            {"stats",
             {{"mean", encode_f64_array(store.stats.mean)},
              {"scale", encode_f64_array(store.stats.scale)}}},
            {"skills", std::move(skills)}};
  body["checksum"] = checksum_text(body);
  return body.dump(1) + "\n";
}

SkillStore deserialize_store(const std::string& text) {
  Json doc = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    fail(ErrorCode::kMalformedStore, "store is not a well-formed JSON document");
  }
  if (!doc.contains("format") || doc["format"] != kFormatTag) {
    fail(ErrorCode::kMalformedStore, "not a skill store document");
  }
  if (!doc.contains("version") || !doc["version"].is_number_integer()) {
    fail(ErrorCode::kMalformedStore, "store has no integer version");
  }
  if (const int v = doc["version"].get<int>(); v != kStoreFormatVersion) {
    fail(ErrorCode::kVersionMismatch, "store format version " + std::to_string(v) +
                                          " is not supported (expected " +
                                          std::to_string(kStoreFormatVersion) + ")");
  }
  if (!doc.contains("checksum") || !doc["checksum"].is_string()) {
    fail(ErrorCode::kChecksumMismatch, "store has no checksum");
  }
  const std::string recorded = doc["checksum"].get<std::string>();
  doc.erase("checksum");
  if (checksum_text(doc) != recorded) {
    fail(ErrorCode::kChecksumMismatch, "store checksum does not match its contents");
  }
  try {
    SkillStore s;
    s.version = doc.at("version").get<int>();
    s.rebuild_counter = doc.at("rebuild_counter").get<uint64_t>();
    s.needs_rebuild = doc.at("needs_rebuild").get<bool>();
    s.policy = policy_spec_from_json(doc.at("policy"));
    s.env = env_from_json(doc.at("env"));
    s.termination = termination_from_json(doc.at("termination"));
    const Json& ae = doc.at("autoencoder");
    s.ae_spec = ae_spec_from_json(ae.at("spec"));
    s.ae_hyper = ae_hyper_from_json(ae.at("hyper"));
    s.ae_seed = ae.at("seed").get<uint64_t>();
    s.ae.data = decode_f64_array(ae.at("params").get<std::string>());
    s.ae_epochs = ae.at("epochs").get<int>();
    s.below_target_fidelity = ae.at("below_target_fidelity").get<bool>();
    s.stats.mean = decode_f64_array(doc.at("stats").at("mean").get<std::string>());
    s.stats.scale = decode_f64_array(doc.at("stats").at("scale").get<std::string>());
    for (const auto& r : doc.at("skills")) s.skills.push_back(record_from_json(r));
    if (!s.ae.data.empty() && s.ae.data.size() != s.ae_spec.param_count()) {
      fail(ErrorCode::kMalformedStore, "autoencoder parameter count does not match its spec");
    }
    for (const auto& r : s.skills) {
      if (r.params.size() != s.policy.param_count()) {
        fail(ErrorCode::kMalformedStore, "skill '" + r.name + "' does not match the policy spec");
      }
    }
    if (!std::is_sorted(s.skills.begin(), s.skills.end(),
                        [](const SkillRecord& a, const SkillRecord& b) { return a.name < b.name; }) ||
        std::adjacent_find(s.skills.begin(), s.skills.end(), [](const SkillRecord& a, const SkillRecord& b) {
          return a.name == b.name;
        }) != s.skills.end()) {
      fail(ErrorCode::kMalformedStore, "skill names must be unique and sorted");
    }
    return s;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kMalformedStore) throw;
    fail(ErrorCode::kMalformedStore, std::string("invalid store field: ") + e.what());
  } catch (const Json::exception& e) {
    fail(ErrorCode::kMalformedStore, std::string("invalid store field: ") + e.what());
  }
}

void save_store(const SkillStore& store, const std::string& path) {
  const std::string text = serialize_store(store);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::kIo, "cannot open '" + tmp + "' for writing");
    out << text;
    if (!out.flush()) fail(ErrorCode::kIo, "failed writing '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    fail(ErrorCode::kIo, "cannot move store into place at '" + path + "'");
  }
}

SkillStore load_store(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open store '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_store(ss.str());
}

namespace {

bool bits_equal(std::span<const double> a, std::span<const double> b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](double x, double y) {
           return std::bit_cast<uint64_t>(x) == std::bit_cast<uint64_t>(y);
         });
}

bool bits_equal(double a, double b) { return std::bit_cast<uint64_t>(a) == std::bit_cast<uint64_t>(b); }

bool env_bits_equal(const EnvParams& a, const EnvParams& b) {
  return a.id == b.id && bits_equal(a.dt, b.dt) && bits_equal(a.gravity, b.gravity) &&
         bits_equal(a.cart_mass, b.cart_mass) && bits_equal(a.pole_mass, b.pole_mass) &&
         bits_equal(a.pole_half_length, b.pole_half_length) && bits_equal(a.action_lo, b.action_lo) &&
         bits_equal(a.action_hi, b.action_hi) && bits_equal(a.goal, b.goal) &&
         bits_equal(a.init_lo, b.init_lo) && bits_equal(a.init_hi, b.init_hi) &&
         bits_equal(a.sample_lo, b.sample_lo) && bits_equal(a.sample_hi, b.sample_hi) &&
         bits_equal(a.divergence_bound, b.divergence_bound);
}

bool metrics_bits_equal(const SkillMetrics& a, const SkillMetrics& b) {
  return bits_equal(a.train_mse, b.train_mse) && bits_equal(a.holdout_mse, b.holdout_mse) &&
         bits_equal(a.success_rate, b.success_rate) &&
         bits_equal(a.mean_steps_to_success, b.mean_steps_to_success) && a.n_eval == b.n_eval;
}

}  // namespace

bool stores_bit_equal(const SkillStore& a, const SkillStore& b) {
  if (a.version != b.version || a.rebuild_counter != b.rebuild_counter ||
      a.needs_rebuild != b.needs_rebuild || a.policy.layer_dims != b.policy.layer_dims ||
      !bits_equal(a.policy.out_lo, b.policy.out_lo) || !bits_equal(a.policy.out_hi, b.policy.out_hi) ||
      !env_bits_equal(a.env, b.env) || !bits_equal(a.termination.tolerance, b.termination.tolerance) ||
      a.termination.hold_steps != b.termination.hold_steps ||
      a.termination.max_steps != b.termination.max_steps || !(a.ae_spec == b.ae_spec) ||
      !bits_equal(a.ae_hyper.adam.lr, b.ae_hyper.adam.lr) ||
      !bits_equal(a.ae_hyper.adam.beta1, b.ae_hyper.adam.beta1) ||
      !bits_equal(a.ae_hyper.adam.beta2, b.ae_hyper.adam.beta2) ||
      !bits_equal(a.ae_hyper.adam.eps, b.ae_hyper.adam.eps) ||
      a.ae_hyper.max_epochs != b.ae_hyper.max_epochs ||
      !bits_equal(a.ae_hyper.fidelity_target, b.ae_hyper.fidelity_target) ||
      a.ae_hyper.check_every != b.ae_hyper.check_every || a.ae_seed != b.ae_seed ||
      !bits_equal(a.stats.mean, b.stats.mean) || !bits_equal(a.stats.scale, b.stats.scale) ||
      !bits_equal(a.ae.data, b.ae.data) || a.ae_epochs != b.ae_epochs ||
      a.below_target_fidelity != b.below_target_fidelity || a.skills.size() != b.skills.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.skills.size(); ++i) {
    const SkillRecord &x = a.skills[i], &y = b.skills[i];
    if (x.name != y.name || x.family != y.family || !bits_equal(x.params.data, y.params.data) ||
        !bits_equal(x.skill.values, y.skill.values) || !bits_equal(x.recon_error, y.recon_error) ||
        x.encoded_at != y.encoded_at || !env_bits_equal(x.env, y.env) ||
        !bits_equal(x.termination.tolerance, y.termination.tolerance) ||
        x.termination.hold_steps != y.termination.hold_steps ||
        x.termination.max_steps != y.termination.max_steps ||
        !metrics_bits_equal(x.metrics, y.metrics) ||
        !bits_equal(x.oracle_success_rate, y.oracle_success_rate) || x.eval_seeds != y.eval_seeds) {
      return false;
    }
  }
  return true;
}

}  // namespace hippomem
