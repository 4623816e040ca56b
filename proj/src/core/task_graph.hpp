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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hippocampus.hpp"
#include "serialization.hpp"
#include "sim_envs.hpp"
#include "skill_store.hpp"

namespace hippomem {

struct TaskNode {
  std::string id;
  // Exactly one of skill_name / skill_vector is set.
  std::optional<std::string> skill_name;
  std::optional<SkillVector> skill_vector;
  // Task-level target (see goal_state_from_target); overrides the env goal.
  std::optional<std::vector<double>> goal;
  TerminationSpec termination;
};

struct TaskGraph {
  std::vector<TaskNode> nodes;
  std::vector<std::pair<std::string, std::string>> edges;
  // Base env for every node; falls back to the store's env when absent.
  std::optional<EnvParams> env;
};

// Parses the task graph document. Structural problems (cycles, dangling
// edges) are left for validate(); shape errors throw kGraphInvalid.
TaskGraph graph_from_json(const Json& j);
TaskGraph load_graph(const std::string& path);
Json graph_to_json(const TaskGraph& g);

enum class GraphIssueKind {
  kEmptyId,
  kDuplicateId,
  kDanglingEdge,
  kCycle,
  kUnresolvedSkill,
  kDimensionMismatch,
  kBadSkillSpec,
};

struct GraphIssue {
  GraphIssueKind kind;
  std::string message;
  std::vector<std::string> witness;  // cycle path, first id repeated at the end
};

std::string_view issue_kind_name(GraphIssueKind k);

// Empty result means valid.
std::vector<GraphIssue> validate(const TaskGraph& graph, const SkillStore& store);

// Kahn's algorithm; among ready nodes the lexicographically smallest id goes
// first. Throws kGraphInvalid on a cycle.
std::vector<std::string> traversal_order(const TaskGraph& graph);

struct NodeExecution {
  std::string node_id;
  // min over stored skills of ||W - W_i|| / ||W_i|| for the recalled W.
  double param_rel_norm = 0.0;
  Trajectory trajectory;
  Outcome outcome = Outcome::kTimeout;
  std::string diagnostic;
};

struct ExecutionReport {
  std::vector<NodeExecution> nodes;
  bool completed = true;
  std::string aborted_at;
  std::string diagnostic;
};

EnvParams node_env(const TaskGraph& graph, const TaskNode& node, const SkillStore& store);
SkillVector resolve_skill(const TaskNode& node, const SkillStore& store);

// Executes nodes one at a time in traversal order; stops at the first
// non-Success node. Consecutive nodes on the same env_id hand over the
// terminal state; otherwise the node starts from reset(env, seed).
ExecutionReport execute(const TaskGraph& graph, const SkillStore& store, uint64_t seed);

Json report_to_json(const ExecutionReport& report);

}  // namespace hippomem
