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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "classical_control.hpp"
#include "distill.hpp"
#include "hippocampus.hpp"
#include "serialization.hpp"
#include "skill_store.hpp"
#include "task_graph.hpp"

namespace hippomem {

struct ControllerConfig {
  ControllerKind kind = ControllerKind::kPd;
  double kp = 1.0;
  double kd = 1.8;
  std::vector<double> q_diag;
  std::vector<double> r_diag;
};

struct SkillConfig {
  std::string name;
  std::string family;
  EnvParams env;  // base env with this skill's target applied
  ControllerConfig controller;
};

struct ExperimentConfig {
  EnvParams env;
  TerminationSpec termination;
  std::vector<std::size_t> policy_hidden{16, 16};
  DistillConfig distill;
  AutoencoderSpec ae;  // m is derived from the policy
  AeHyper ae_hyper;
  uint64_t ae_seed = 11;
  ControllerConfig controller;
  std::map<std::string, SkillConfig> skills;
};

ExperimentConfig config_from_json(const Json& j);  // throws kConfigInvalid
ExperimentConfig load_config(const std::string& path);

ControllerSpec make_controller(const ControllerConfig& cc, const EnvParams& env);
PolicySpec policy_spec_for(const ExperimentConfig& cfg);

// Fresh, unbuilt store carrying the config's architecture and AE settings.
SkillStore new_store(const ExperimentConfig& cfg);
// Throws kConfigInvalid when the store was created from an incompatible
// policy architecture or env.
void check_store_compatible(const SkillStore& store, const ExperimentConfig& cfg);

struct TrainedSkill {
  SkillRecord record;
  EvalResult oracle_eval;
  EvalResult policy_eval;
  int best_epoch = 0;
};

// Samples states, builds the oracle dataset, distills, then evaluates both
// the policy and its oracle on the configured evaluation seeds.
TrainedSkill train_skill(const ExperimentConfig& cfg, const std::string& name);

Json skill_report_json(const SkillRecord& r);
std::string skill_report_text(const SkillRecord& r);

Trajectory run_recall(const SkillStore& store, const std::string& name,
                      const std::optional<std::vector<double>>& target, uint64_t seed);

struct InterpResult {
  SkillVector skill;
  std::vector<double> target;
  EvalResult eval;
  double param_rel_norm = 0.0;  // to the nearest stored skill
};

// Decodes (1-alpha)*S_from + alpha*S_to and runs it closed-loop toward the
// equally interpolated target. Reporting only.
InterpResult run_interp(const SkillStore& store, const std::string& from, const std::string& to,
                        double alpha);

// Writes report.json and one <node>.csv per executed node into out_dir.
ExecutionReport run_graph(const SkillStore& store, const TaskGraph& graph, uint64_t seed,
                          const std::string& out_dir);

}  // namespace hippomem
