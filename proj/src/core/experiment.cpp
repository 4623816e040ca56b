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

#include "experiment.hpp"

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "error.hpp"

namespace hippomem {

namespace {

ControllerConfig controller_from_json(const Json& j, const ControllerConfig& base) {
  check_keys(j, {"kind", "kp", "kd", "q_diag", "r_diag"}, "controller");
  ControllerConfig cc = base;
  if (j.contains("kind")) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "pd") {
      cc.kind = ControllerKind::kPd;
    } else if (kind == "lqr") {
      cc.kind = ControllerKind::kLqr;
    } else {
      fail(ErrorCode::kConfigInvalid, "controller.kind must be 'pd' or 'lqr'");
    }
  }
  if (j.contains("kp")) cc.kp = j.at("kp").get<double>();
  if (j.contains("kd")) cc.kd = j.at("kd").get<double>();
  if (j.contains("q_diag")) cc.q_diag = j.at("q_diag").get<std::vector<double>>();
  if (j.contains("r_diag")) cc.r_diag = j.at("r_diag").get<std::vector<double>>();
  return cc;
}

DistillConfig distill_from_json(const Json& j, DistillConfig d) {
  check_keys(j, {"n_rollout_states", "n_grid_states", "noise_sigma", "rollout_horizon",
                 "train_fraction", "epochs", "batch_size", "lr", "eval_seeds", "eval_seed_base"},
             "distill");
  if (j.contains("n_rollout_states")) d.n_rollout_states = j.at("n_rollout_states").get<int>();
  if (j.contains("n_grid_states")) d.n_grid_states = j.at("n_grid_states").get<int>();
  if (j.contains("noise_sigma")) d.noise_sigma = j.at("noise_sigma").get<double>();
  if (j.contains("rollout_horizon")) d.rollout_horizon = j.at("rollout_horizon").get<int>();
  if (j.contains("train_fraction")) d.train_fraction = j.at("train_fraction").get<double>();
  if (j.contains("epochs")) d.epochs = j.at("epochs").get<int>();
  if (j.contains("batch_size")) d.batch_size = j.at("batch_size").get<int>();
  if (j.contains("lr")) d.adam.lr = j.at("lr").get<double>();
  if (j.contains("eval_seeds")) d.eval_seeds = j.at("eval_seeds").get<int>();
  if (j.contains("eval_seed_base")) d.eval_seed_base = j.at("eval_seed_base").get<uint64_t>();
  return d;
}

}  // namespace

ExperimentConfig config_from_json(const Json& j) {
  try {
    check_keys(j, {"name", "seed", "env", "termination", "policy", "distill", "controller",
                   "autoencoder", "skills"},
               "config");
    ExperimentConfig cfg;
    if (!j.contains("env")) fail(ErrorCode::kConfigInvalid, "config.env is required");
    cfg.env = env_from_json(j.at("env"));
    if (j.contains("termination")) cfg.termination = termination_from_json(j.at("termination"));
    if (j.contains("policy")) {
      check_keys(j.at("policy"), {"hidden"}, "policy");
      cfg.policy_hidden = j.at("policy").value("hidden", cfg.policy_hidden);
    }
    if (j.contains("distill")) cfg.distill = distill_from_json(j.at("distill"), cfg.distill);
    if (j.contains("seed")) cfg.distill.seed = j.at("seed").get<uint64_t>();
    validate_distill_config(cfg.distill);
    if (j.contains("controller")) cfg.controller = controller_from_json(j.at("controller"), cfg.controller);
    cfg.ae.hidden = {128};
    if (j.contains("autoencoder")) {
      const Json& ja = j.at("autoencoder");
      check_keys(ja, {"hidden", "latent", "seed", "lr", "beta1", "beta2", "eps", "max_epochs",
                      "fidelity_target", "check_every"},
                 "autoencoder");
      cfg.ae.hidden = ja.value("hidden", cfg.ae.hidden);
      cfg.ae.n = ja.value("latent", cfg.ae.n);
      cfg.ae_seed = ja.value("seed", cfg.ae_seed);
      cfg.ae_hyper = ae_hyper_from_json(ja, cfg.ae_hyper);
    }
    const PolicySpec policy = policy_spec_for(cfg);
    cfg.ae.m = policy.param_count();
    validate_ae_spec(cfg.ae);
    if (j.contains("skills")) {
      for (const auto& [name, js] : j.at("skills").items()) {
        check_keys(js, {"target", "family", "controller"}, "skill '" + name + "'");
        SkillConfig sc;
        sc.name = name;
        sc.family = js.value("family", std::string());
        sc.env = cfg.env;
        if (js.contains("target")) {
          sc.env.goal = goal_state_from_target(cfg.env.id, js.at("target").get<std::vector<double>>());
        }
        sc.controller = js.contains("controller")
                            ? controller_from_json(js.at("controller"), cfg.controller)
                            : cfg.controller;
        cfg.skills.emplace(name, std::move(sc));
      }
    }
    return cfg;
  } catch (const Json::exception& e) {
    fail(ErrorCode::kConfigInvalid, std::string("invalid config: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfigInvalid) throw;
    fail(ErrorCode::kConfigInvalid, std::string("invalid config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  Json j = Json::parse(ss.str(), nullptr, false);
  if (j.is_discarded()) fail(ErrorCode::kConfigInvalid, "config is not valid JSON");
  return config_from_json(j);
}

ControllerSpec make_controller(const ControllerConfig& cc, const EnvParams& env) {
  if (cc.kind == ControllerKind::kPd) return make_pd_controller(env, cc.kp, cc.kd);
  return make_lqr_controller(env, cc.q_diag, cc.r_diag);
}

PolicySpec policy_spec_for(const ExperimentConfig& cfg) {
  return policy_spec_for(cfg.env, cfg.policy_hidden);
}

SkillStore new_store(const ExperimentConfig& cfg) {
  SkillStore s;
  s.policy = policy_spec_for(cfg);
  s.env = cfg.env;
  s.termination = cfg.termination;
  s.ae_spec = cfg.ae;
  s.ae_hyper = cfg.ae_hyper;
  s.ae_seed = cfg.ae_seed;
  return s;
}

void check_store_compatible(const SkillStore& store, const ExperimentConfig& cfg) {
  if (!(store.policy == policy_spec_for(cfg))) {
    fail(ErrorCode::kConfigInvalid, "store policy architecture differs from the config's");
  }
  if (store.env.id != cfg.env.id) {
    fail(ErrorCode::kConfigInvalid, "store env differs from the config's env");
  }
}

TrainedSkill train_skill(const ExperimentConfig& cfg, const std::string& name) {
  auto it = cfg.skills.find(name);
  if (it == cfg.skills.end()) {
    fail(ErrorCode::kUnknownSkill, "config defines no skill named '" + name + "'");
  }
  const SkillConfig& sc = it->second;
  const ControllerSpec oracle = make_controller(sc.controller, sc.env);
  const PolicySpec spec = policy_spec_for(cfg);
  const Batch data = build_dataset(sample_states(sc.env, oracle, cfg.distill), oracle, sc.env);
  const TrainResult tr = train_policy(spec, data, cfg.distill);
  const auto seeds = eval_seed_list(cfg.distill);

  TrainedSkill out;
  out.best_epoch = tr.best_epoch;
  out.oracle_eval = evaluate_controller(sc.env, oracle, cfg.termination, seeds);
  out.policy_eval = evaluate_policy(sc.env, spec, tr.params, cfg.termination, seeds);
  SkillRecord& r = out.record;
  r.name = name;
  r.family = sc.family;
  r.params = tr.params;
  r.env = sc.env;
  r.termination = cfg.termination;
  r.metrics.train_mse = tr.train_mse;
  r.metrics.holdout_mse = tr.holdout_mse;
  r.metrics.success_rate = out.policy_eval.success_rate;
  r.metrics.mean_steps_to_success = out.policy_eval.mean_steps_to_success;
  r.metrics.n_eval = static_cast<int>(seeds.size());
  r.oracle_success_rate = out.oracle_eval.success_rate;
  r.eval_seeds = seeds;
  return out;
}

Json skill_report_json(const SkillRecord& r) {
  Json j{{"name", r.name},
         {"env", env_name(r.env.id)},
         {"target", target_from_goal_state(r.env.id, r.env.goal)},
         {"metrics", metrics_to_json(r.metrics)},
         {"oracle_success_rate", r.oracle_success_rate}};
  if (!r.family.empty()) j["family"] = r.family;
  if (r.encoded_at > 0) {
    j["recon_error"] = number_or_null(r.recon_error);
    j["skill_vector"] = r.skill.values;
  }
  return j;
}

std::string skill_report_text(const SkillRecord& r) {
  std::ostringstream o;
  o.precision(17);
  o << "skill=" << r.name << '\n'
    << "env=" << env_name(r.env.id) << '\n'
    << "train_mse=" << r.metrics.train_mse << '\n'
    << "holdout_mse=" << r.metrics.holdout_mse << '\n'
    << "success_rate=" << r.metrics.success_rate << '\n'
    << "mean_steps_to_success=" << r.metrics.mean_steps_to_success << '\n'
    << "oracle_success_rate=" << r.oracle_success_rate << '\n';
  if (r.encoded_at > 0) o << "recon_error=" << r.recon_error << '\n';
  return o.str();
}

Trajectory run_recall(const SkillStore& store, const std::string& name,
                      const std::optional<std::vector<double>>& target, uint64_t seed) {
  if (!store.built()) fail(ErrorCode::kStoreNotBuilt, "memory has never been built for this store");
  const SkillRecord& r = get_skill(store, name);
  if (r.encoded_at != store.rebuild_counter) {
    fail(ErrorCode::kStoreStale, "skill '" + name + "' was added after the last memory build");
  }
  EnvParams env = r.env;
  if (target) env.goal = goal_state_from_target(env.id, *target);
  const ParamVector w = recall(store.hippocampus(), r.skill);
  return rollout(
      env, [&](std::span<const double> s) { return forward(store.policy, w, s); },
      reset(env, seed), r.termination);
}

InterpResult run_interp(const SkillStore& store, const std::string& from, const std::string& to,
                        double alpha) {
  if (!store.built()) fail(ErrorCode::kStoreNotBuilt, "memory has never been built for this store");
  const SkillRecord& a = get_skill(store, from);
  const SkillRecord& b = get_skill(store, to);
  if (a.encoded_at != store.rebuild_counter || b.encoded_at != store.rebuild_counter) {
    fail(ErrorCode::kStoreStale, "skill vectors are stale; rebuild the memory first");
  }
  InterpResult out;
  out.skill = interpolate(a.skill, b.skill, alpha);
  const ParamVector w = recall(store.hippocampus(), out.skill);
  out.param_rel_norm = std::numeric_limits<double>::infinity();
  for (const auto& r : store.skills) {
    out.param_rel_norm = std::min(out.param_rel_norm, relative_distance(w.data, r.params.data));
  }
  EnvParams env = a.env;
  std::vector<double> goal(a.env.goal.size());
  for (std::size_t i = 0; i < goal.size(); ++i) {
    goal[i] = (1.0 - alpha) * a.env.goal[i] + alpha * b.env.goal[i];
  }
  env.goal = goal;
  out.target = target_from_goal_state(env.id, goal);
  out.eval = evaluate_policy(env, store.policy, w, a.termination, a.eval_seeds);
  return out;
}

ExecutionReport run_graph(const SkillStore& store, const TaskGraph& graph, uint64_t seed,
                          const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create output directory '" + out_dir + "'");
  ExecutionReport report = execute(graph, store, seed);
  Json j = report_to_json(report);
  for (std::size_t i = 0; i < report.nodes.size(); ++i) {
    const auto& n = report.nodes[i];
    if (n.trajectory.steps.empty()) continue;
    std::string stem = n.node_id;
    for (char& c : stem) {
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
    }
    char prefix[16];
    std::snprintf(prefix, sizeof prefix, "%03zu_", i);
    const std::string file = prefix + stem + ".csv";
    write_trajectory_csv((fs::path(out_dir) / file).string(), n.trajectory);
    j["nodes"][i]["csv"] = file;
  }
  std::ofstream out(fs::path(out_dir) / "report.json", std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write report.json");
  out << j.dump(1) << '\n';
  return report;
}

}  // namespace hippomem
