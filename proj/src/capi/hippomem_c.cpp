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

#include "hippomem/hippomem.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <atomic>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "checks.hpp"
#include "error.hpp"
#include "experiment.hpp"
#include "skill_store.hpp"
#include "task_graph.hpp"

struct hm_config {
  hippomem::ExperimentConfig cfg;
};

struct hm_store {
  hippomem::SkillStore store;
};

namespace {

using hippomem::ErrorCode;
using hippomem::Json;

thread_local std::string g_last_error;

hm_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return HM_ERR_INVALID_ARGUMENT;
    case ErrorCode::kDimensionMismatch: return HM_ERR_DIMENSION_MISMATCH;
    case ErrorCode::kUnknownEnv: return HM_ERR_UNKNOWN_ENV;
    case ErrorCode::kUnknownSkill: return HM_ERR_UNKNOWN_SKILL;
    case ErrorCode::kDuplicateSkill: return HM_ERR_DUPLICATE_SKILL;
    case ErrorCode::kConfigInvalid: return HM_ERR_CONFIG_INVALID;
    case ErrorCode::kGraphInvalid: return HM_ERR_GRAPH_INVALID;
    case ErrorCode::kNonConvergence: return HM_ERR_NON_CONVERGENCE;
    case ErrorCode::kNotPositiveDefinite: return HM_ERR_NOT_POSITIVE_DEFINITE;
    case ErrorCode::kNonFinite: return HM_ERR_NON_FINITE;
    case ErrorCode::kEmptyInput: return HM_ERR_EMPTY_INPUT;
    case ErrorCode::kStoreNotBuilt: return HM_ERR_STORE_NOT_BUILT;
    case ErrorCode::kStoreStale: return HM_ERR_STORE_STALE;
    case ErrorCode::kVersionMismatch: return HM_ERR_VERSION_MISMATCH;
    case ErrorCode::kChecksumMismatch: return HM_ERR_CHECKSUM_MISMATCH;
    case ErrorCode::kMalformedStore: return HM_ERR_MALFORMED_STORE;
    case ErrorCode::kIo: return HM_ERR_IO;
    case ErrorCode::kFidelity: return HM_ERR_FIDELITY;
    case ErrorCode::kCheckFailed: return HM_ERR_CHECK_FAILED;
    case ErrorCode::kExecutionAborted: return HM_ERR_EXECUTION_ABORTED;
  }
  return HM_ERR_INTERNAL;
}

hm_status set_error(hm_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs fn, translating exceptions into a status and the thread's last error.
template <typename Fn>
hm_status guarded(Fn&& fn) noexcept {
  try {
    g_last_error.clear();
    return fn();
  } catch (const hippomem::Error& e) {
    return set_error(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(HM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(HM_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** out, const Json& j) {
  if (out) *out = dup_string(j.dump(1));
}

void require(bool cond, const char* what) {
  if (!cond) hippomem::fail(ErrorCode::kInvalidArgument, what);
}

Json verify_json(const hippomem::VerifyReport& rep) {
  Json skills = Json::array();
  for (const auto& a : rep.skills) {
    skills.push_back({{"name", a.name},
                      {"skill_vector_matches", a.skill_vector_matches},
                      {"recon_error_matches", a.recon_error_matches},
                      {"recon_error", a.recon_error},
                      {"fidelity_ok", a.fidelity_ok},
                      {"original_successes", a.original_successes},
                      {"preserved_successes", a.preserved_successes},
                      {"behavior_ok", a.behavior_ok}});
  }
  return {{"ok", rep.ok}, {"skills", std::move(skills)}};
}

Json eval_json(const hippomem::EvalResult& r) {
  Json outcomes = Json::array();
  for (auto o : r.outcomes) outcomes.push_back(hippomem::outcome_name(o));
  return {{"success_rate", r.success_rate},
          {"mean_steps_to_success", hippomem::number_or_null(r.mean_steps_to_success)},
          {"outcomes", std::move(outcomes)}};
}

}  // namespace

extern "C" {

const char* hm_status_name(hm_status status) {
  switch (status) {
    case HM_OK: return "OK";
    case HM_ERR_INVALID_ARGUMENT: return "INVALID_ARGUMENT";
    case HM_ERR_DIMENSION_MISMATCH: return "DIMENSION_MISMATCH";
    case HM_ERR_UNKNOWN_ENV: return "UNKNOWN_ENV";
    case HM_ERR_UNKNOWN_SKILL: return "UNKNOWN_SKILL";
    case HM_ERR_DUPLICATE_SKILL: return "DUPLICATE_SKILL";
    case HM_ERR_CONFIG_INVALID: return "CONFIG_INVALID";
    case HM_ERR_GRAPH_INVALID: return "GRAPH_INVALID";
    case HM_ERR_NON_CONVERGENCE: return "NON_CONVERGENCE";
    case HM_ERR_NOT_POSITIVE_DEFINITE: return "NOT_POSITIVE_DEFINITE";
    case HM_ERR_NON_FINITE: return "NON_FINITE";
    case HM_ERR_EMPTY_INPUT: return "EMPTY_INPUT";
    case HM_ERR_STORE_NOT_BUILT: return "STORE_NOT_BUILT";
    case HM_ERR_STORE_STALE: return "STORE_STALE";
    case HM_ERR_VERSION_MISMATCH: return "VERSION_MISMATCH";
    case HM_ERR_CHECKSUM_MISMATCH: return "CHECKSUM_MISMATCH";
    case HM_ERR_MALFORMED_STORE: return "MALFORMED_STORE";
    case HM_ERR_IO: return "IO_ERROR";
    case HM_ERR_FIDELITY: return "FIDELITY_FAILURE";
    case HM_ERR_CHECK_FAILED: return "CHECK_FAILED";
    case HM_ERR_EXECUTION_ABORTED: return "EXECUTION_ABORTED";
    case HM_ERR_INTERNAL: return "INTERNAL";
  }
  return "INTERNAL";
}

int hm_status_exit_code(hm_status status) {
  switch (status) {
    case HM_OK:
      return 0;
    case HM_ERR_NON_CONVERGENCE:
    case HM_ERR_NOT_POSITIVE_DEFINITE:
    case HM_ERR_NON_FINITE:
    case HM_ERR_IO:
    case HM_ERR_FIDELITY:
    case HM_ERR_CHECK_FAILED:
    case HM_ERR_EXECUTION_ABORTED:
    case HM_ERR_INTERNAL:
      return 2;
    default:
      return 1;
  }
}

const char* hm_last_error(void) { return g_last_error.c_str(); }

const char* hm_version(void) { return "1.0.0"; }

void hm_string_free(char* s) { std::free(s); }

hm_status hm_env_list_json(char** out_json) {
  return guarded([&] {
    require(out_json != nullptr, "out_json is NULL");
    Json arr = Json::array();
    for (auto id : hippomem::all_envs()) {
      const auto p = hippomem::default_env(id);
      arr.push_back({{"id", hippomem::env_name(id)},
                     {"state_dim", hippomem::state_dim(id)},
                     {"action_dim", hippomem::action_dim(id)},
                     {"dt", p.dt},
                     {"action_lo", p.action_lo},
                     {"action_hi", p.action_hi},
                     {"init_lo", p.init_lo},
                     {"init_hi", p.init_hi}});
    }
    emit(out_json, arr);
    return HM_OK;
  });
}

hm_status hm_config_load(const char* path, hm_config** out) {
  return guarded([&] {
    require(path && out, "NULL argument");
    *out = new hm_config{hippomem::load_config(path)};
    return HM_OK;
  });
}

hm_status hm_config_set_seed(hm_config* config, uint64_t seed) {
  return guarded([&] {
    require(config != nullptr, "config is NULL");
    config->cfg.distill.seed = seed;
    return HM_OK;
  });
}

hm_status hm_config_skills_json(const hm_config* config, char** out_json) {
  return guarded([&] {
    require(config && out_json, "NULL argument");
    Json arr = Json::array();
    for (const auto& [name, _] : config->cfg.skills) arr.push_back(name);
    emit(out_json, arr);
    return HM_OK;
  });
}

void hm_config_free(hm_config* config) { delete config; }

hm_status hm_store_create(const hm_config* config, hm_store** out) {
  return guarded([&] {
    require(config && out, "NULL argument");
    *out = new hm_store{hippomem::new_store(config->cfg)};
    return HM_OK;
  });
}

hm_status hm_store_load(const char* path, hm_store** out) {
  return guarded([&] {
    require(path && out, "NULL argument");
    *out = new hm_store{hippomem::load_store(path)};
    return HM_OK;
  });
}

hm_status hm_store_save(const hm_store* store, const char* path) {
  return guarded([&] {
    require(store && path, "NULL argument");
    hippomem::save_store(store->store, path);
    return HM_OK;
  });
}

void hm_store_free(hm_store* store) { delete store; }

hm_status hm_store_check_config(const hm_store* store, const hm_config* config) {
  return guarded([&] {
    require(store && config, "NULL argument");
    hippomem::check_store_compatible(store->store, config->cfg);
    return HM_OK;
  });
}

hm_status hm_store_info_json(const hm_store* store, char** out_json) {
  return guarded([&] {
    require(store && out_json, "NULL argument");
    const auto& s = store->store;
    Json skills = Json::array();
    for (const auto& r : s.skills) skills.push_back(hippomem::skill_report_json(r));
    emit(out_json, Json{{"version", s.version},
                        {"rebuild_counter", s.rebuild_counter},
                        {"needs_rebuild", s.needs_rebuild},
                        {"built", s.built()},
                        {"env", hippomem::env_name(s.env.id)},
                        {"policy", hippomem::policy_spec_to_json(s.policy)},
                        {"autoencoder", hippomem::ae_spec_to_json(s.ae_spec)},
                        {"skills", std::move(skills)}});
    return HM_OK;
  });
}

hm_status hm_store_param_dim(const hm_store* store, size_t* out) {
  return guarded([&] {
    require(store && out, "NULL argument");
    *out = store->store.policy.param_count();
    return HM_OK;
  });
}

hm_status hm_store_latent_dim(const hm_store* store, size_t* out) {
  return guarded([&] {
    require(store && out, "NULL argument");
    *out = store->store.ae_spec.n;
    return HM_OK;
  });
}

hm_status hm_store_rebuild_counter(const hm_store* store, uint64_t* out) {
  return guarded([&] {
    require(store && out, "NULL argument");
    *out = store->store.rebuild_counter;
    return HM_OK;
  });
}

hm_status hm_skill_train(const hm_config* config, hm_store* store, const char* name,
                         char** out_report_json) {
  const char* names[] = {name};
  return hm_skill_train_many(config, store, names, 1, 1, out_report_json);
}

hm_status hm_skill_train_many(const hm_config* config, hm_store* store, const char* const* names,
                              size_t count, int jobs, char** out_report_json) {
  return guarded([&] {
    require(config && store && (names || count == 0), "NULL argument");
    require(jobs >= 1, "jobs must be >= 1");
    hippomem::check_store_compatible(store->store, config->cfg);
    std::vector<std::string> todo;
    for (size_t i = 0; i < count; ++i) {
      require(names[i] != nullptr, "NULL skill name");
      todo.emplace_back(names[i]);
    }
    // duplicates and unknown names fail before any training
    for (const auto& n : todo) {
      for (const auto& r : store->store.skills) {
        if (r.name == n) hippomem::fail(ErrorCode::kDuplicateSkill, "skill '" + n + "' already exists");
      }
      if (!config->cfg.skills.count(n)) {
        hippomem::fail(ErrorCode::kUnknownSkill, "config defines no skill named '" + n + "'");
      }
    }
    std::vector<std::optional<hippomem::TrainedSkill>> results(todo.size());
    std::vector<std::exception_ptr> errors(todo.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
      for (size_t i; (i = next.fetch_add(1)) < todo.size();) {
        try {
          results[i] = hippomem::train_skill(config->cfg, todo[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    const size_t n_threads = std::min<size_t>(static_cast<size_t>(jobs), todo.size());
    std::vector<std::thread> pool;
    for (size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    Json reports = Json::array();
    for (auto& r : results) {
      Json rep = hippomem::skill_report_json(r->record);
      rep["oracle_eval"] = eval_json(r->oracle_eval);
      rep["policy_eval"] = eval_json(r->policy_eval);
      rep["best_epoch"] = r->best_epoch;
      reports.push_back(std::move(rep));
      hippomem::add_skill(store->store, std::move(r->record));
    }
    emit(out_report_json, count == 1 ? reports.front() : reports);
    return HM_OK;
  });
}

hm_status hm_memory_build(hm_store* store, char** out_report_json) {
  return guarded([&] {
    require(store != nullptr, "store is NULL");
    const auto res = hippomem::build_memory(store->store);
    Json skills = Json::array();
    for (const auto& r : store->store.skills) {
      skills.push_back({{"name", r.name}, {"recon_error", r.recon_error}, {"skill_vector", r.skill.values}});
    }
    emit(out_report_json, Json{{"rebuild_counter", store->store.rebuild_counter},
                               {"epochs", res.epochs},
                               {"final_loss", res.final_loss},
                               {"below_target_fidelity", res.below_target_fidelity},
                               {"skills", std::move(skills)}});
    if (res.below_target_fidelity) {
      return set_error(HM_ERR_FIDELITY, "autoencoder epoch budget exhausted above the fidelity target");
    }
    return HM_OK;
  });
}

hm_status hm_memory_verify(const hm_store* store, char** out_report_json) {
  return guarded([&] {
    require(store != nullptr, "store is NULL");
    const auto rep = hippomem::verify_store(store->store);
    emit(out_report_json, verify_json(rep));
    if (!rep.ok) return set_error(HM_ERR_FIDELITY, "memory audit failed");
    return HM_OK;
  });
}

hm_status hm_skill_vector(const hm_store* store, const char* name, double* out, size_t n) {
  return guarded([&] {
    require(store && name && out, "NULL argument");
    const auto& r = hippomem::get_skill(store->store, name);
    if (r.encoded_at != store->store.rebuild_counter || r.skill.size() == 0) {
      hippomem::fail(ErrorCode::kStoreStale, "skill '" + r.name + "' has no current skill vector");
    }
    if (n != r.skill.size()) hippomem::fail(ErrorCode::kDimensionMismatch, "output buffer length != latent dim");
    std::copy(r.skill.values.begin(), r.skill.values.end(), out);
    return HM_OK;
  });
}

hm_status hm_encode(const hm_store* store, const double* params, size_t m, double* out, size_t n) {
  return guarded([&] {
    require(store && params && out, "NULL argument");
    if (!store->store.built()) hippomem::fail(ErrorCode::kStoreNotBuilt, "memory has never been built");
    const auto s = hippomem::encode(store->store.hippocampus(), {std::vector<double>(params, params + m)});
    if (n != s.size()) hippomem::fail(ErrorCode::kDimensionMismatch, "output buffer length != latent dim");
    std::copy(s.values.begin(), s.values.end(), out);
    return HM_OK;
  });
}

hm_status hm_recall(const hm_store* store, const double* skill, size_t n, double* out, size_t m) {
  return guarded([&] {
    require(store && skill && out, "NULL argument");
    if (!store->store.built()) hippomem::fail(ErrorCode::kStoreNotBuilt, "memory has never been built");
    const auto w = hippomem::recall(store->store.hippocampus(), {std::vector<double>(skill, skill + n)});
    if (m != w.size()) hippomem::fail(ErrorCode::kDimensionMismatch, "output buffer length != parameter dim");
    std::copy(w.data.begin(), w.data.end(), out);
    return HM_OK;
  });
}

hm_status hm_act(const hm_store* store, const double* skill, size_t n, const double* state,
                 size_t state_dim, double* action, size_t action_dim) {
  return guarded([&] {
    require(store && skill && state && action, "NULL argument");
    if (!store->store.built()) hippomem::fail(ErrorCode::kStoreNotBuilt, "memory has never been built");
    const auto a = hippomem::act_through_memory(store->store.policy, store->store.hippocampus(),
                                                {std::vector<double>(skill, skill + n)},
                                                std::span<const double>(state, state_dim));
    if (action_dim != a.size()) hippomem::fail(ErrorCode::kDimensionMismatch, "action buffer length mismatch");
    std::copy(a.begin(), a.end(), action);
    return HM_OK;
  });
}

hm_status hm_skill_distance(const double* a, const double* b, size_t n, double* out) {
  return guarded([&] {
    require(a && b && out, "NULL argument");
    *out = hippomem::skill_distance({std::vector<double>(a, a + n)}, {std::vector<double>(b, b + n)});
    return HM_OK;
  });
}

hm_status hm_skill_recall(const hm_store* store, const char* name, const double* target,
                          size_t target_len, uint64_t seed, const char* csv_path,
                          char** out_report_json) {
  return guarded([&] {
    require(store && name, "NULL argument");
    std::optional<std::vector<double>> tgt;
    if (target) tgt = std::vector<double>(target, target + target_len);
    const auto traj = hippomem::run_recall(store->store, name, tgt, seed);
    if (csv_path) hippomem::write_trajectory_csv(std::string(csv_path), traj);
    emit(out_report_json, Json{{"skill", name},
                               {"seed", seed},
                               {"outcome", hippomem::outcome_name(traj.outcome)},
                               {"steps", traj.steps_taken()}});
    return HM_OK;
  });
}

hm_status hm_skill_interp(const hm_store* store, const char* from, const char* to, double alpha,
                          char** out_report_json) {
  return guarded([&] {
    require(store && from && to, "NULL argument");
    const auto r = hippomem::run_interp(store->store, from, to, alpha);
    Json j = eval_json(r.eval);
    j["from"] = from;
    j["to"] = to;
    j["alpha"] = alpha;
    j["target"] = r.target;
    j["skill_vector"] = r.skill.values;
    j["param_rel_norm"] = r.param_rel_norm;
    emit(out_report_json, j);
    return HM_OK;
  });
}

hm_status hm_graph_validate(const hm_store* store, const char* graph_path, char** out_report_json) {
  return guarded([&] {
    require(store && graph_path, "NULL argument");
    const auto graph = hippomem::load_graph(graph_path);
    const auto issues = hippomem::validate(graph, store->store);
    Json arr = Json::array();
    for (const auto& is : issues) {
      arr.push_back({{"kind", hippomem::issue_kind_name(is.kind)}, {"message", is.message}, {"witness", is.witness}});
    }
    Json j{{"ok", issues.empty()}, {"issues", std::move(arr)}};
    if (issues.empty()) j["order"] = hippomem::traversal_order(graph);
    emit(out_report_json, j);
    if (!issues.empty()) return set_error(HM_ERR_GRAPH_INVALID, issues.front().message);
    return HM_OK;
  });
}

hm_status hm_graph_run(const hm_store* store, const char* graph_path, uint64_t seed,
                       const char* out_dir, char** out_report_json) {
  return guarded([&] {
    require(store && graph_path && out_dir, "NULL argument");
    const auto graph = hippomem::load_graph(graph_path);
    const auto issues = hippomem::validate(graph, store->store);
    if (!issues.empty()) {
      Json arr = Json::array();
      for (const auto& is : issues) {
        arr.push_back({{"kind", hippomem::issue_kind_name(is.kind)}, {"message", is.message}, {"witness", is.witness}});
      }
      emit(out_report_json, Json{{"ok", false}, {"issues", std::move(arr)}});
      return set_error(HM_ERR_GRAPH_INVALID, issues.front().message);
    }
    const auto report = hippomem::run_graph(store->store, graph, seed, out_dir);
    Json j = hippomem::report_to_json(report);
    j["order"] = hippomem::traversal_order(graph);
    emit(out_report_json, j);
    if (!report.completed) {
      return set_error(HM_ERR_EXECUTION_ABORTED, "aborted at node '" + report.aborted_at + "': " + report.diagnostic);
    }
    return HM_OK;
  });
}

hm_status hm_grad_check(uint64_t seed, int cases, char** out_report_json) {
  return guarded([&] {
    require(cases >= 1, "cases must be >= 1");
    const auto r = hippomem::grad_check(seed, cases);
    emit(out_report_json, Json{{"cases", r.cases},
                               {"max_rel_error", r.max_rel_error},
                               {"max_abs_error_small", r.max_abs_error_small},
                               {"ok", r.ok}});
    if (!r.ok) return set_error(HM_ERR_CHECK_FAILED, "analytic gradient disagrees with finite differences");
    return HM_OK;
  });
}

hm_status hm_riccati_check(uint64_t seed, int cases, char** out_report_json) {
  return guarded([&] {
    require(cases >= 1, "cases must be >= 1");
    const auto r = hippomem::riccati_check(seed, cases);
    emit(out_report_json, Json{{"scalar_p_error", r.scalar_p_error},
                               {"scalar_k_error", r.scalar_k_error},
                               {"random_cases", r.random_cases},
                               {"max_dp_gap", r.max_dp_gap},
                               {"max_residual", r.max_residual},
                               {"ok", r.ok}});
    if (!r.ok) return set_error(HM_ERR_CHECK_FAILED, "Riccati solution disagrees with its oracles");
    return HM_OK;
  });
}

}  // extern "C"
