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
#include <limits>
#include <string>
#include <vector>

#include "distill.hpp"
#include "hippocampus.hpp"
#include "sim_envs.hpp"

namespace hippomem {

inline constexpr int kStoreFormatVersion = 1;

struct SkillRecord {
  std::string name;
  // Optional grouping tag (e.g. "nav_goal") for skills that differ only in
  // their task target.
  std::string family;
  ParamVector params;
  // Empty until the memory has been built with this skill in it.
  SkillVector skill;
  double recon_error = std::numeric_limits<double>::quiet_NaN();
  // Rebuild counter at which `skill` and `recon_error` were computed; 0 = never.
  uint64_t encoded_at = 0;
  EnvParams env;
  TerminationSpec termination;
  SkillMetrics metrics;
  double oracle_success_rate = 0.0;
  std::vector<uint64_t> eval_seeds;
};

struct SkillStore {
  int version = kStoreFormatVersion;
  uint64_t rebuild_counter = 0;
  bool needs_rebuild = false;
  PolicySpec policy;
  EnvParams env;
  TerminationSpec termination;
  AutoencoderSpec ae_spec;
  AeHyper ae_hyper;
  uint64_t ae_seed = 0;
  NormalizationStats stats;
  AeParams ae;
  int ae_epochs = 0;
  bool below_target_fidelity = false;
  std::vector<SkillRecord> skills;  // sorted by name

  bool built() const { return rebuild_counter > 0 && !ae.data.empty(); }
  Hippocampus hippocampus() const { return {ae_spec, ae, stats}; }
};

// Throws kDuplicateSkill / kDimensionMismatch. Marks the store for rebuild.
void add_skill(SkillStore& store, SkillRecord record);
const SkillRecord& get_skill(const SkillStore& store, const std::string& name);  // kUnknownSkill
std::vector<std::string> list_skills(const SkillStore& store);

// Fits normalization, trains the autoencoder (warm-started from the current
// parameters when shapes agree), re-encodes every skill and bumps the
// rebuild counter.
AeTrainResult build_memory(SkillStore& store);

struct SkillAudit {
  std::string name;
  bool skill_vector_matches = false;  // bitwise
  bool recon_error_matches = false;   // bitwise
  double recon_error = 0.0;
  bool fidelity_ok = false;
  int original_successes = 0;
  int preserved_successes = 0;  // seeds where both original and recalled succeed
  bool behavior_ok = false;
};

struct VerifyReport {
  std::vector<SkillAudit> skills;
  bool ok = false;
};

inline constexpr double kFidelityThreshold = 0.05;

// Throws kStoreNotBuilt / kStoreStale before auditing.
VerifyReport verify_store(const SkillStore& store);

std::string serialize_store(const SkillStore& store);
SkillStore deserialize_store(const std::string& text);
void save_store(const SkillStore& store, const std::string& path);
SkillStore load_store(const std::string& path);

uint32_t crc32c(std::string_view bytes);

// Bitwise equality of every field, including every binary64 payload.
bool stores_bit_equal(const SkillStore& a, const SkillStore& b);

}  // namespace hippomem
