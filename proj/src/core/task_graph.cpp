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

#include "task_graph.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "error.hpp"

namespace hippomem {

TaskGraph graph_from_json(const Json& j) {
  try {
    check_keys(j, {"nodes", "edges", "env"}, "task graph");
    TaskGraph g;
    if (j.contains("env")) g.env = env_from_json(j.at("env"));
    for (const auto& jn : j.value("nodes", Json::array())) {
      check_keys(jn, {"id", "skill", "skill_vector", "goal", "termination"}, "task node");
      TaskNode n;
      n.id = jn.at("id").get<std::string>();
      if (jn.contains("skill")) n.skill_name = jn.at("skill").get<std::string>();
      if (jn.contains("skill_vector")) {
        n.skill_vector = SkillVector{jn.at("skill_vector").get<std::vector<double>>()};
      }
      if (jn.contains("goal")) n.goal = jn.at("goal").get<std::vector<double>>();
      if (jn.contains("termination")) n.termination = termination_from_json(jn.at("termination"));
      g.nodes.push_back(std::move(n));
    }
    for (const auto& je : j.value("edges", Json::array())) {
      const auto pair = je.get<std::vector<std::string>>();
      if (pair.size() != 2) fail(ErrorCode::kGraphInvalid, "each edge must be [from, to]");
      g.edges.emplace_back(pair[0], pair[1]);
    }
    return g;
  } catch (const Json::exception& e) {
    fail(ErrorCode::kGraphInvalid, std::string("malformed task graph: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kGraphInvalid) throw;
    fail(ErrorCode::kGraphInvalid, std::string("malformed task graph: ") + e.what());
  }
}

TaskGraph load_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open task graph '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  Json j = Json::parse(ss.str(), nullptr, false);
  if (j.is_discarded()) fail(ErrorCode::kGraphInvalid, "task graph is not valid JSON");
  return graph_from_json(j);
}

Json graph_to_json(const TaskGraph& g) {
  Json nodes = Json::array();
  for (const auto& n : g.nodes) {
    Json jn{{"id", n.id}, {"termination", termination_to_json(n.termination)}};
    if (n.skill_name) jn["skill"] = *n.skill_name;
    if (n.skill_vector) jn["skill_vector"] = n.skill_vector->values;
    if (n.goal) jn["goal"] = *n.goal;
    nodes.push_back(std::move(jn));
  }
  Json edges = Json::array();
  for (const auto& [a, b] : g.edges) edges.push_back({a, b});
  Json j{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
  if (g.env) j["env"] = env_to_json(*g.env);
  return j;
}

std::string_view issue_kind_name(GraphIssueKind k) {
  switch (k) {
    case GraphIssueKind::kEmptyId: return "EMPTY_ID";
    case GraphIssueKind::kDuplicateId: return "DUPLICATE_ID";
    case GraphIssueKind::kDanglingEdge: return "DANGLING_EDGE";
    case GraphIssueKind::kCycle: return "CYCLE";
    case GraphIssueKind::kUnresolvedSkill: return "UNRESOLVED_SKILL";
    case GraphIssueKind::kDimensionMismatch: return "DIMENSION_MISMATCH";
    case GraphIssueKind::kBadSkillSpec: return "BAD_SKILL_SPEC";
  }
  return "UNKNOWN";
}

namespace {

using Adjacency = std::map<std::string, std::vector<std::string>>;

// Successor lists over known ids, each sorted for deterministic search.
Adjacency adjacency(const TaskGraph& g, const std::set<std::string>& ids) {
  Adjacency adj;
  for (const auto& id : ids) adj[id];
  for (const auto& [a, b] : g.edges) {
    if (ids.count(a) && ids.count(b)) adj[a].push_back(b);
  }
  for (auto& [_, succ] : adj) std::sort(succ.begin(), succ.end());
  return adj;
}

std::optional<std::vector<std::string>> find_cycle(const Adjacency& adj) {
  enum class Mark { kWhite, kGray, kBlack };
  std::map<std::string, Mark> mark;
  std::vector<std::string> stack;
  std::optional<std::vector<std::string>> cycle;
  std::function<bool(const std::string&)> visit = [&](const std::string& u) {
    mark[u] = Mark::kGray;
    stack.push_back(u);
    for (const auto& v : adj.at(u)) {
      if (mark[v] == Mark::kGray) {
        auto it = std::find(stack.begin(), stack.end(), v);
        cycle = std::vector<std::string>(it, stack.end());
        cycle->push_back(v);
        return true;
      }
      if (mark[v] == Mark::kWhite && visit(v)) return true;
    }
    stack.pop_back();
    mark[u] = Mark::kBlack;
    return false;
  };
  for (const auto& [u, _] : adj) {
    if (mark[u] == Mark::kWhite && visit(u)) return cycle;
  }
  return std::nullopt;
}

}  // namespace

EnvParams node_env(const TaskGraph& graph, const TaskNode& node, const SkillStore& store) {
  EnvParams env = graph.env ? *graph.env : store.env;
  if (node.goal) {
    env.goal = goal_state_from_target(env.id, *node.goal);
  } else if (node.skill_name && !graph.env) {
    // Without an explicit env, a named skill runs toward its own target.
    const SkillRecord& r = get_skill(store, *node.skill_name);
    if (r.env.id == env.id) env.goal = r.env.goal;
  }
  return env;
}

SkillVector resolve_skill(const TaskNode& node, const SkillStore& store) {
  if (node.skill_vector) return *node.skill_vector;
  const SkillRecord& r = get_skill(store, *node.skill_name);
  if (r.encoded_at != store.rebuild_counter || r.skill.size() == 0) {
    fail(ErrorCode::kStoreStale, "skill '" + r.name + "' has no current skill vector");
  }
  return r.skill;
}

std::vector<GraphIssue> validate(const TaskGraph& graph, const SkillStore& store) {
  std::vector<GraphIssue> issues;
  std::set<std::string> ids;
  for (const auto& n : graph.nodes) {
    if (n.id.empty()) {
      issues.push_back({GraphIssueKind::kEmptyId, "node with empty id", {}});
      continue;
    }
    if (!ids.insert(n.id).second) {
      issues.push_back({GraphIssueKind::kDuplicateId, "duplicate node id '" + n.id + "'", {n.id}});
    }
  }
  for (const auto& [a, b] : graph.edges) {
    for (const auto* end : {&a, &b}) {
      if (!ids.count(*end)) {
        issues.push_back({GraphIssueKind::kDanglingEdge,
                          "edge [" + a + ", " + b + "] references unknown node '" + *end + "'",
                          {a, b}});
      }
    }
  }
  if (auto cycle = find_cycle(adjacency(graph, ids))) {
    std::string path;
    for (const auto& id : *cycle) path += (path.empty() ? "" : " -> ") + id;
    issues.push_back({GraphIssueKind::kCycle, "cycle: " + path, *cycle});
  }
  const EnvParams base = graph.env ? *graph.env : store.env;
  if (state_dim(base) != store.policy.input_dim() || action_dim(base) != store.policy.output_dim()) {
    issues.push_back({GraphIssueKind::kDimensionMismatch,
                      "env " + std::string(env_name(base.id)) +
                          " does not match the store's policy dimensions",
                      {}});
  }
  for (const auto& n : graph.nodes) {
    if (n.skill_name.has_value() == n.skill_vector.has_value()) {
      issues.push_back({GraphIssueKind::kBadSkillSpec,
                        "node '" + n.id + "' needs exactly one of skill / skill_vector", {n.id}});
      continue;
    }
    if (n.skill_name) {
      const auto names = list_skills(store);
      if (!std::binary_search(names.begin(), names.end(), *n.skill_name)) {
        issues.push_back({GraphIssueKind::kUnresolvedSkill,
                          "node '" + n.id + "' references unknown skill '" + *n.skill_name + "'",
                          {n.id}});
      }
    } else if (n.skill_vector->size() != store.ae_spec.n) {
      issues.push_back({GraphIssueKind::kDimensionMismatch,
                        "node '" + n.id + "' skill_vector has length " +
                            std::to_string(n.skill_vector->size()) + ", latent n is " +
                            std::to_string(store.ae_spec.n),
                        {n.id}});
    }
    if (n.goal) {
      const std::size_t want = base.id == EnvId::kPointMass2d ? 2 : 1;
      if (n.goal->size() != want) {
        issues.push_back({GraphIssueKind::kDimensionMismatch,
                          "node '" + n.id + "' goal has " + std::to_string(n.goal->size()) +
                              " entries, expected " + std::to_string(want),
                          {n.id}});
      }
    }
  }
  return issues;
}

std::vector<std::string> traversal_order(const TaskGraph& graph) {
  std::map<std::string, int> indegree;
  std::map<std::string, std::vector<std::string>> succ;
  for (const auto& n : graph.nodes) indegree[n.id];
  for (const auto& [a, b] : graph.edges) {
    if (!indegree.count(a) || !indegree.count(b)) {
      fail(ErrorCode::kGraphInvalid, "edge references an unknown node");
    }
    succ[a].push_back(b);
    ++indegree[b];
  }
  std::set<std::string> ready;
  for (const auto& [id, deg] : indegree) {
    if (deg == 0) ready.insert(id);
  }
  std::vector<std::string> order;
  while (!ready.empty()) {
    std::string u = *ready.begin();
    ready.erase(ready.begin());
    for (const auto& v : succ[u]) {
      if (--indegree[v] == 0) ready.insert(v);
    }
    order.push_back(std::move(u));
  }
  if (order.size() != indegree.size()) fail(ErrorCode::kGraphInvalid, "task graph has a cycle");
  return order;
}

ExecutionReport execute(const TaskGraph& graph, const SkillStore& store, uint64_t seed) {
  ExecutionReport report;
  if (const auto issues = validate(graph, store); !issues.empty()) {
    fail(ErrorCode::kGraphInvalid, issues.front().message);
  }
  if (graph.nodes.empty()) return report;
  if (!store.built()) fail(ErrorCode::kStoreNotBuilt, "memory has never been built for this store");

  std::map<std::string, const TaskNode*> by_id;
  for (const auto& n : graph.nodes) by_id[n.id] = &n;
  const Hippocampus hc = store.hippocampus();
  std::optional<EnvParams> prev_env;
  std::optional<StateVec> prev_state;

  for (const auto& id : traversal_order(graph)) {
    const TaskNode& node = *by_id.at(id);
    NodeExecution ne;
    ne.node_id = id;
    try {
      const EnvParams env = node_env(graph, node, store);
      const SkillVector s = resolve_skill(node, store);
      const ParamVector w = recall(hc, s);
      ne.param_rel_norm = std::numeric_limits<double>::infinity();
      for (const auto& r : store.skills) {
        ne.param_rel_norm = std::min(ne.param_rel_norm, relative_distance(w.data, r.params.data));
      }
      const StateVec init =
          prev_env && prev_env->id == env.id ? *prev_state : reset(env, seed);
      const PolicySpec& policy = store.policy;
      ne.trajectory = rollout(
          env, [&](std::span<const double> st) { return forward(policy, w, st); }, init,
          node.termination);
      ne.outcome = ne.trajectory.outcome;
      prev_env = env;
      prev_state = ne.trajectory.final_state();
    } catch (const Error& e) {
      ne.outcome = Outcome::kDiverged;
      ne.diagnostic = std::string(error_code_name(e.code())) + ": " + e.what();
    }
    const bool ok = ne.outcome == Outcome::kSuccess;
    if (!ok && ne.diagnostic.empty()) {
      ne.diagnostic = "node finished with outcome " + std::string(outcome_name(ne.outcome));
    }
    report.nodes.push_back(std::move(ne));
    if (!ok) {
      report.completed = false;
      report.aborted_at = id;
      report.diagnostic = report.nodes.back().diagnostic;
      break;
    }
  }
  return report;
}

Json report_to_json(const ExecutionReport& report) {
  Json nodes = Json::array();
  for (const auto& n : report.nodes) {
    nodes.push_back({{"id", n.node_id},
                     {"param_rel_norm", number_or_null(n.param_rel_norm)},
                     {"outcome", outcome_name(n.outcome)},
                     {"steps", n.trajectory.steps_taken()},
                     {"diagnostic", n.diagnostic}});
  }
  Json j{{"status", report.completed ? "Completed" : "Aborted"}, {"nodes", std::move(nodes)}};
  if (!report.completed) {
    j["aborted_at"] = report.aborted_at;
    j["diagnostic"] = report.diagnostic;
  }
  return j;
}

}  // namespace hippomem
