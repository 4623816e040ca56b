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

#include <doctest.h>

#include <algorithm>
#include <map>

#include "error.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "serialization.hpp"
#include "task_graph.hpp"

using namespace hippomem;

namespace {

TaskNode node(const std::string& id, const std::string& skill) {
  TaskNode n;
  n.id = id;
  n.skill_name = skill;
  return n;
}

TaskGraph chain3() {
  TaskGraph g;
  g.nodes = {node("A", "east"), node("B", "north"), node("C", "west")};
  g.edges = {{"A", "B"}, {"B", "C"}};
  return g;
}

bool has_kind(const std::vector<GraphIssue>& issues, GraphIssueKind k) {
  return std::any_of(issues.begin(), issues.end(), [&](const GraphIssue& i) { return i.kind == k; });
}

const SkillStore& built_store() {
  static const SkillStore st = [] {
    auto s = fixtures::linear_store({{"east", {2, 0}}, {"north", {0, 2}}, {"west", {-2, -1}}});
    build_memory(s);
    return s;
  }();
  return st;
}

}  // namespace

TEST_CASE("validate examples") {
  const auto& st = built_store();
  CHECK(validate(chain3(), st).empty());

  auto loop = chain3();
  loop.edges.push_back({"A", "A"});
  const auto issues = validate(loop, st);
  REQUIRE(has_kind(issues, GraphIssueKind::kCycle));
  for (const auto& i : issues)
    if (i.kind == GraphIssueKind::kCycle) CHECK(i.witness == std::vector<std::string>{"A", "A"});

  auto flying = chain3();
  flying.nodes[1].skill_name = "flying";
  CHECK(has_kind(validate(flying, st), GraphIssueKind::kUnresolvedSkill));

  auto dangling = chain3();
  dangling.edges.push_back({"C", "Q"});
  CHECK(has_kind(validate(dangling, st), GraphIssueKind::kDanglingEdge));

  auto dup = chain3();
  dup.nodes.push_back(node("A", "east"));
  CHECK(has_kind(validate(dup, st), GraphIssueKind::kDuplicateId));

  auto wrong_dim = chain3();
  wrong_dim.nodes[0].skill_name.reset();
  wrong_dim.nodes[0].skill_vector = SkillVector{{1.0, 2.0}};
  CHECK(has_kind(validate(wrong_dim, st), GraphIssueKind::kDimensionMismatch));

  auto both = chain3();
  both.nodes[0].skill_vector = st.skills[0].skill;
  CHECK(has_kind(validate(both, st), GraphIssueKind::kBadSkillSpec));
}

TEST_CASE("longer cycle witness closes on itself") {
  TaskGraph g;
  g.nodes = {node("A", "east"), node("B", "east"), node("C", "east")};
  g.edges = {{"A", "B"}, {"B", "C"}, {"C", "A"}};
  const auto issues = validate(g, built_store());
  REQUIRE(has_kind(issues, GraphIssueKind::kCycle));
  for (const auto& i : issues) {
    if (i.kind != GraphIssueKind::kCycle) continue;
    REQUIRE(i.witness.size() == 4);
    CHECK(i.witness.front() == i.witness.back());
    for (std::size_t k = 0; k + 1 < i.witness.size(); ++k) {
      const std::pair<std::string, std::string> e{i.witness[k], i.witness[k + 1]};
      CHECK(std::find(g.edges.begin(), g.edges.end(), e) != g.edges.end());
    }
  }
  CHECK_THROWS_AS(traversal_order(g), Error);
}

TEST_CASE("traversal order examples") {
  CHECK(traversal_order(chain3()) == std::vector<std::string>{"A", "B", "C"});
  TaskGraph diamond;
  diamond.nodes = {node("D", "x"), node("C", "x"), node("B", "x"), node("A", "x")};
  diamond.edges = {{"A", "B"}, {"A", "C"}, {"B", "D"}, {"C", "D"}};
  CHECK(traversal_order(diamond) == std::vector<std::string>{"A", "B", "C", "D"});
  TaskGraph iso;
  iso.nodes = {node("Z", "x"), node("M", "x")};
  CHECK(traversal_order(iso) == std::vector<std::string>{"M", "Z"});
}

TEST_CASE("traversal order matches the oracle on random DAGs") {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.index(15);
    std::vector<std::string> ids;
    while (ids.size() < n) {
      std::string id(1 + rng.index(3), 'a');
      for (auto& c : id) c = static_cast<char>('a' + rng.index(6));
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    }
    TaskGraph g;
    for (const auto& id : ids) g.nodes.push_back(node(id, "east"));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (rng.uniform() < 0.25) g.edges.push_back({ids[i], ids[j]});
    const auto order = traversal_order(g);
    CHECK(order == oracle::topo_lex(ids, g.edges));
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    for (const auto& [u, v] : g.edges) CHECK(pos[u] < pos[v]);
  }
}

TEST_CASE("execute: chain completes with state continuity") {
  const auto& st = built_store();
  auto g = chain3();
  g.nodes[0].goal = std::vector<double>{2, 0};
  g.nodes[1].goal = std::vector<double>{0, 2};
  g.nodes[2].goal = std::vector<double>{-2, -1};
  const auto rep = execute(g, st, 3);
  REQUIRE(rep.completed);
  REQUIRE(rep.nodes.size() == 3);
  for (const auto& n : rep.nodes) CHECK(n.outcome == Outcome::kSuccess);
  for (std::size_t i = 0; i + 1 < rep.nodes.size(); ++i) {
    CHECK(rep.nodes[i].trajectory.final_state() == rep.nodes[i + 1].trajectory.steps.front().state);
  }
  CHECK(rep.nodes[0].trajectory.steps.front().state == reset(st.env, 3));

  // per-node equivalence with the memory chain step by step
  const Hippocampus hc = st.hippocampus();
  for (std::size_t i = 0; i < rep.nodes.size(); ++i) {
    const auto& s = get_skill(st, *g.nodes[i].skill_name).skill;
    const auto& traj = rep.nodes[i].trajectory;
    const auto env = node_env(g, g.nodes[i], st);
    for (std::size_t t = 0; t + 1 < traj.steps.size(); ++t) {
      const auto a = clip_action(env, act_through_memory(st.policy, hc, s, traj.steps[t].state));
      CHECK(a == traj.steps[t].action);
    }
  }

  const auto again = execute(g, st, 3);
  CHECK(report_to_json(again).dump() == report_to_json(rep).dump());
  for (std::size_t i = 0; i < rep.nodes.size(); ++i) CHECK(again.nodes[i].trajectory == rep.nodes[i].trajectory);
}

TEST_CASE("execute: unsatisfiable tolerance aborts at the first node") {
  auto g = chain3();
  g.nodes[0].termination = TerminationSpec{0.0, 10, 100};
  const auto rep = execute(g, built_store(), 1);
  CHECK_FALSE(rep.completed);
  CHECK(rep.aborted_at == "A");
  REQUIRE(rep.nodes.size() == 1);
  CHECK(rep.nodes[0].outcome == Outcome::kTimeout);
}

TEST_CASE("execute: empty graph completes") {
  const auto rep = execute(TaskGraph{}, built_store(), 1);
  CHECK(rep.completed);
  CHECK(rep.nodes.empty());
}

TEST_CASE("execute rejects invalid graphs") {
  auto g = chain3();
  g.edges.push_back({"C", "A"});
  CHECK_THROWS_AS(execute(g, built_store(), 1), Error);
}

TEST_CASE("graph json roundtrip and strict keys") {
  auto g = chain3();
  g.nodes[0].goal = std::vector<double>{1.0, 2.0};
  g.nodes[1].termination = TerminationSpec{0.1, 3, 50};
  const auto back = graph_from_json(graph_to_json(g));
  CHECK(graph_to_json(back) == graph_to_json(g));
  CHECK(back.edges == g.edges);
  CHECK_THROWS_AS(graph_from_json(Json::parse(R"({"nodes":[{"id":"a","skil":"x"}]})")), Error);
  CHECK_THROWS_AS(graph_from_json(Json::parse(R"({"nodes":[],"edges":[["a"]]})")), Error);
}
