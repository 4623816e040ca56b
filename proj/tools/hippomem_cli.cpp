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

// Command-line driver for the hippomem pipeline. Talks to the library only
// through the C API in hippomem/hippomem.h.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hippomem/hippomem.h"

namespace {

using Json = nlohmann::json;

// Thrown to unwind to main with an exit code after reporting.
struct CliFailure {
  int exit_code;
};

class Owned {
 public:
  Owned() = default;
  ~Owned() { hm_string_free(p_); }
  Owned(const Owned&) = delete;
  Owned& operator=(const Owned&) = delete;
  char** out() { return &p_; }
  bool empty() const { return p_ == nullptr; }
  std::string str() const { return p_ ? p_ : ""; }

 private:
  char* p_ = nullptr;
};

struct StoreHandle {
  hm_store* p = nullptr;
  ~StoreHandle() { hm_store_free(p); }
};

struct ConfigHandle {
  hm_config* p = nullptr;
  ~ConfigHandle() { hm_config_free(p); }
};

[[noreturn]] void die(hm_status st) {
  std::cerr << "error: " << hm_status_name(st) << ": " << hm_last_error() << '\n';
  throw CliFailure{hm_status_exit_code(st)};
}

void check(hm_status st) {
  if (st != HM_OK) die(st);
}

void flatten(const Json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array() && !j.empty() && j.front().is_structured()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix.empty() ? std::to_string(i) : prefix + "." + std::to_string(i), out);
  } else if (j.is_string()) {
    out << prefix << '=' << j.get<std::string>() << '\n';
  } else {
    out << prefix << '=' << j.dump() << '\n';
  }
}

// key=value lines followed by the JSON block.
void print_report(const Owned& report) {
  if (report.empty()) return;
  const Json j = Json::parse(report.str());
  flatten(j, "", std::cout);
  std::cout << "--- json\n" << j.dump(1) << '\n';
}

void run_or_report(hm_status st, const Owned& report) {
  print_report(report);
  check(st);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      std::cerr << "error: INVALID_ARGUMENT: cannot parse number '" << item << "'\n";
      throw CliFailure{1};
    }
  }
  return out;
}

bool file_exists(const std::string& path) {
  if (FILE* f = std::fopen(path.c_str(), "rb")) {
    std::fclose(f);
    return true;
  }
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hippomem: classical-control distillation, parameter memory and skill graphs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hm_version()));

  // env list
  auto* env = app.add_subcommand("env", "Environment catalogue");
  env->require_subcommand(1);
  auto* env_list = env->add_subcommand("list", "List environments with dimensions and bounds");

  // skill ...
  auto* skill = app.add_subcommand("skill", "Train, recall and interpolate skills");
  skill->require_subcommand(1);
  std::string config_path, store_path, name, out_path, goal_text, from, to;
  std::vector<std::string> names;
  std::optional<uint64_t> seed_override;
  uint64_t seed = 0;
  int jobs = 1;
  bool train_all = false;
  double alpha = 0.5;

  auto* train = skill->add_subcommand("train", "Distill config skills into the store");
  train->add_option("--config", config_path, "Experiment config (JSON)")->required();
  train->add_option("--name", names, "Skill name from the config (repeatable)");
  train->add_flag("--all", train_all, "Train every config skill not yet in the store");
  train->add_option("--store", store_path, "Skill store file (created if missing)")->required();
  train->add_option("--seed", seed_override, "Override the config seed");
  train->add_option("--jobs", jobs, "Train independent skills concurrently")->check(CLI::PositiveNumber);

  auto* recall = skill->add_subcommand("recall", "Run the policy decoded from a stored skill vector");
  recall->add_option("--store", store_path)->required();
  recall->add_option("--name", name)->required();
  recall->add_option("--out", out_path, "Trajectory CSV path")->required();
  recall->add_option("--env-goal", goal_text, "Override the goal target, e.g. 1.5,-1");
  recall->add_option("--seed", seed, "Initial-state seed");

  auto* interp = skill->add_subcommand("interp", "Decode an interpolated skill vector and report closed-loop metrics");
  interp->add_option("--store", store_path)->required();
  interp->add_option("--from", from)->required();
  interp->add_option("--to", to)->required();
  interp->add_option("--alpha", alpha)->required();

  // memory ...
  auto* memory = app.add_subcommand("memory", "Build and audit the parameter memory");
  memory->require_subcommand(1);
  auto* build = memory->add_subcommand("build", "Train the autoencoder over all stored skills");
  build->add_option("--store", store_path)->required();
  auto* verify = memory->add_subcommand("verify", "Recompute skill vectors, fidelity and behavior");
  verify->add_option("--store", store_path)->required();
  auto* info = memory->add_subcommand("info", "Summarize a store");
  info->add_option("--store", store_path)->required();

  // graph ...
  auto* graph = app.add_subcommand("graph", "Task graphs over skill vectors");
  graph->require_subcommand(1);
  std::string graph_path;
  auto* graph_run = graph->add_subcommand("run", "Validate, traverse and execute a task graph");
  graph_run->add_option("--store", store_path)->required();
  graph_run->add_option("--graph", graph_path)->required();
  graph_run->add_option("--seed", seed);
  graph_run->add_option("--out", out_path, "Output directory")->required();
  auto* graph_validate = graph->add_subcommand("validate", "Validate a task graph against a store");
  graph_validate->add_option("--store", store_path)->required();
  graph_validate->add_option("--graph", graph_path)->required();

  // numerical oracles
  int cases = 20;
  uint64_t check_seed = 1;
  auto* grad = app.add_subcommand("grad", "Gradient oracle");
  grad->require_subcommand(1);
  auto* grad_check = grad->add_subcommand("check", "Analytic gradients vs central differences");
  grad_check->add_option("--seed", check_seed);
  grad_check->add_option("--cases", cases)->check(CLI::PositiveNumber);
  auto* riccati = app.add_subcommand("riccati", "Riccati oracle");
  riccati->require_subcommand(1);
  auto* riccati_check = riccati->add_subcommand("check", "LQR gains vs closed form and dynamic programming");
  riccati_check->add_option("--seed", check_seed);
  riccati_check->add_option("--cases", cases)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: USAGE: " << e.what() << '\n';
    return 1;
  }

  try {
    Owned report;
    if (env_list->parsed()) {
      check(hm_env_list_json(report.out()));
      std::cout << Json::parse(report.str()).dump(1) << '\n';
    } else if (train->parsed()) {
      ConfigHandle cfg;
      check(hm_config_load(config_path.c_str(), &cfg.p));
      if (seed_override) check(hm_config_set_seed(cfg.p, *seed_override));
      StoreHandle store;
      if (file_exists(store_path)) {
        check(hm_store_load(store_path.c_str(), &store.p));
        check(hm_store_check_config(store.p, cfg.p));
      } else {
        check(hm_store_create(cfg.p, &store.p));
      }
      if (train_all) {
        Owned listed, info_json;
        check(hm_config_skills_json(cfg.p, listed.out()));
        check(hm_store_info_json(store.p, info_json.out()));
        const Json have = Json::parse(info_json.str())["skills"];
        for (const auto& n : Json::parse(listed.str())) {
          bool present = false;
          for (const auto& s : have) present = present || s["name"] == n;
          if (!present) names.push_back(n.get<std::string>());
        }
      }
      if (names.empty() && !train_all) {
        std::cerr << "error: USAGE: give --name at least once or --all\n";
        return 1;
      }
      std::vector<const char*> cnames;
      for (const auto& n : names) cnames.push_back(n.c_str());
      check(hm_skill_train_many(cfg.p, store.p, cnames.data(), cnames.size(), jobs, report.out()));
      check(hm_store_save(store.p, store_path.c_str()));
      print_report(report);
    } else if (recall->parsed()) {
      StoreHandle store;
      check(hm_store_load(store_path.c_str(), &store.p));
      std::vector<double> goal;
      if (!goal_text.empty()) goal = parse_list(goal_text);
      check(hm_skill_recall(store.p, name.c_str(), goal_text.empty() ? nullptr : goal.data(),
                            goal.size(), seed, out_path.c_str(), report.out()));
      print_report(report);
    } else if (interp->parsed()) {
      StoreHandle store;
      check(hm_store_load(store_path.c_str(), &store.p));
      check(hm_skill_interp(store.p, from.c_str(), to.c_str(), alpha, report.out()));
      print_report(report);
    } else if (build->parsed()) {
      StoreHandle store;
      check(hm_store_load(store_path.c_str(), &store.p));
      const hm_status st = hm_memory_build(store.p, report.out());
      if (st == HM_OK || st == HM_ERR_FIDELITY) check(hm_store_save(store.p, store_path.c_str()));
      run_or_report(st, report);
    } else if (verify->parsed()) {
      StoreHandle store;
      check(hm_store_load(store_path.c_str(), &store.p));
      run_or_report(hm_memory_verify(store.p, report.out()), report);
    } else if (info->parsed()) {
      StoreHandle store;
      check(hm_store_load(store_path.c_str(), &store.p));
      check(hm_store_info_json(store.p, report.out()));
      print_report(report);
    } else if (graph_run->parsed()) {
      StoreHandle store;
      check(hm_store_load(store_path.c_str(), &store.p));
      run_or_report(hm_graph_run(store.p, graph_path.c_str(), seed, out_path.c_str(), report.out()), report);
    } else if (graph_validate->parsed()) {
      StoreHandle store;
      check(hm_store_load(store_path.c_str(), &store.p));
      run_or_report(hm_graph_validate(store.p, graph_path.c_str(), report.out()), report);
    } else if (grad_check->parsed()) {
      run_or_report(hm_grad_check(check_seed, cases, report.out()), report);
    } else if (riccati_check->parsed()) {
      run_or_report(hm_riccati_check(check_seed, cases, report.out()), report);
    }
  } catch (const CliFailure& f) {
    return f.exit_code;
  }
  return 0;
}
