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

#include <cmath>

#include "distill.hpp"
#include "error.hpp"
#include "fixtures.hpp"
#include "hippocampus.hpp"
#include "rng.hpp"

using namespace hippomem;

namespace {

std::vector<double> rand_vec(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-2, 2);
  return v;
}

NormalizationStats identity_stats(std::size_t m) {
  return {std::vector<double>(m, 0.0), std::vector<double>(m, 1.0)};
}

}  // namespace

TEST_CASE("normalization: single skill uses the global spread") {
  const ParamVector w{{1.0, 2.0, 3.0, 6.0}};
  const auto st = fit_normalization({w});
  CHECK(st.mean == w.data);
  // population std of {1,2,3,6} is sqrt(3.5)
  for (double s : st.scale) CHECK(s == doctest::Approx(std::sqrt(3.5)).epsilon(1e-15));
  const auto flat = fit_normalization({ParamVector{{4.0, 4.0}}});
  CHECK(flat.scale == std::vector<double>{kScaleFloor, kScaleFloor});
}

TEST_CASE("normalization: per-dimension stats with a floor") {
  const auto st = fit_normalization({ParamVector{{0.0, 5.0}}, ParamVector{{2.0, 5.0}}});
  CHECK(st.mean == std::vector<double>{1.0, 5.0});
  CHECK(st.scale == std::vector<double>{1.0, kScaleFloor});
}

TEST_CASE("normalization: identity stats and roundtrip") {
  Rng rng(2);
  const auto w = rand_vec(rng, 12);
  CHECK(normalize(w, identity_stats(12)) == w);
  std::vector<ParamVector> set;
  for (int i = 0; i < 4; ++i) set.push_back(ParamVector{rand_vec(rng, 12)});
  const auto st = fit_normalization(set);
  for (int i = 0; i < 20; ++i) {
    const auto x = rand_vec(rng, 12);
    const auto back = denormalize(normalize(x, st), st);
    for (std::size_t j = 0; j < x.size(); ++j) CHECK(std::abs(back[j] - x[j]) <= 1e-12);
  }
}

TEST_CASE("autoencoder spec") {
  AutoencoderSpec spec{386, {128}, 8};
  CHECK(spec.encoder_dims() == LayerDims{386, 128, 8});
  CHECK(spec.decoder_dims() == LayerDims{8, 128, 386});
  CHECK(spec.param_count() == param_count({386, 128, 8}) + param_count({8, 128, 386}));
  CHECK_THROWS_AS(validate_ae_spec(AutoencoderSpec{8, {4}, 8}), Error);
  CHECK_THROWS_AS(validate_ae_spec(AutoencoderSpec{8, {4}, 0}), Error);
}

TEST_CASE("single memorized skill reconstructs") {
  Rng rng(3);
  const ParamVector w{rand_vec(rng, 20)};
  const AutoencoderSpec spec{20, {16}, 2};
  const auto stats = fit_normalization({w});
  const auto res = train_autoencoder({w}, spec, stats, AeHyper{}, 1);
  REQUIRE(res.recon_errors.size() == 1);
  CHECK(res.recon_errors[0] <= 1e-3);
  const Hippocampus hc{spec, res.params, stats};
  CHECK(relative_recon_error(hc, w) == res.recon_errors[0]);
}

TEST_CASE("autoencoder memorizes a small skill set") {
  Rng rng(4);
  std::vector<ParamVector> set;
  for (int i = 0; i < 5; ++i) set.push_back(ParamVector{rand_vec(rng, 30)});
  set.push_back(set[2]);
  const AutoencoderSpec spec{30, {64}, 8};
  const auto stats = fit_normalization(set);
  AeHyper hyper;
  hyper.fidelity_target = 1e-3;
  const auto res = train_autoencoder(set, spec, stats, hyper, 7);
  CHECK_FALSE(res.below_target_fidelity);
  for (double e : res.recon_errors) CHECK(e <= 1e-3);
  const Hippocampus hc{spec, res.params, stats};
  CHECK(recall(hc, encode(hc, set[2])) == recall(hc, encode(hc, set[5])));
  CHECK(res.recon_errors[2] == res.recon_errors[5]);

  const auto again = train_autoencoder(set, spec, stats, hyper, 7);
  CHECK(again.params == res.params);
  CHECK(again.epochs == res.epochs);
}

TEST_CASE("encode and recall with zero weights") {
  const AutoencoderSpec spec{6, {5}, 2};
  const Hippocampus hc{spec, AeParams{std::vector<double>(spec.param_count(), 0.0)}, identity_stats(6)};
  Rng rng(5);
  for (int i = 0; i < 5; ++i) {
    CHECK(encode(hc, ParamVector{rand_vec(rng, 6)}).values == std::vector<double>{0.0, 0.0});
    CHECK(recall(hc, SkillVector{rand_vec(rng, 2)}).data == std::vector<double>(6, 0.0));
  }
}

TEST_CASE("encode/recall purity and interpolation endpoints") {
  const AutoencoderSpec spec{10, {8}, 3};
  Rng rng(6);
  const Hippocampus hc{spec, AeParams{rand_vec(rng, spec.param_count())}, identity_stats(10)};
  const ParamVector w{rand_vec(rng, 10)};
  CHECK(encode(hc, w) == encode(hc, w));
  const SkillVector s1{rand_vec(rng, 3)}, s2{rand_vec(rng, 3)};
  CHECK(recall(hc, s1) == recall(hc, s1));
  CHECK(recall(hc, interpolate(s1, s2, 0.0)) == recall(hc, s1));
  CHECK(recall(hc, interpolate(s1, s2, 1.0)) == recall(hc, s2));
  CHECK_THROWS_AS(recall(hc, SkillVector{{1.0}}), Error);
  CHECK_THROWS_AS(encode(hc, ParamVector{{1.0}}), Error);
}

TEST_CASE("skill distance") {
  CHECK(skill_distance(SkillVector{{0, 0}}, SkillVector{{3, 4}}) == 5.0);
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const SkillVector a{rand_vec(rng, 8)}, b{rand_vec(rng, 8)};
    CHECK(skill_distance(a, a) == 0.0);
    CHECK(skill_distance(a, b) == skill_distance(b, a));
    CHECK(skill_distance(a, b) > 0.0);
  }
  CHECK_THROWS_AS(skill_distance(SkillVector{{0}}, SkillVector{{0, 1}}), Error);
}

TEST_CASE("interpolation") {
  const SkillVector a{{0, 0}}, b{{2, 2}};
  CHECK(interpolate(a, b, 0.0) == a);
  CHECK(interpolate(a, b, 1.0) == b);
  CHECK(interpolate(a, b, 0.5).values == std::vector<double>{1.0, 1.0});
  CHECK_THROWS_AS(interpolate(a, b, 1.5), Error);
  CHECK_THROWS_AS(interpolate(a, b, -0.1), Error);
}

TEST_CASE("act through memory") {
  auto store = fixtures::linear_store({{"east", {2, 0}}, {"north", {0, 2}}, {"west", {-2, -1}}});
  build_memory(store);
  const Hippocampus hc = store.hippocampus();
  for (const auto& r : store.skills) {
    const auto at_goal = r.env.goal;
    const auto direct = forward(store.policy, r.params, at_goal);
    const auto mem = act_through_memory(store.policy, hc, r.skill, at_goal);
    for (std::size_t k = 0; k < direct.size(); ++k) CHECK(std::abs(mem[k] - direct[k]) <= 0.05);
    CHECK(act_through_memory(store.policy, hc, r.skill, at_goal) == mem);
  }
  const Hippocampus zero{store.ae_spec, AeParams{std::vector<double>(store.ae_spec.param_count(), 0.0)},
                         NormalizationStats{std::vector<double>(10, 0.0), std::vector<double>(10, 1.0)}};
  const std::vector<double> s{0.3, -0.4, 0.1, 0.2};
  CHECK(act_through_memory(store.policy, zero, SkillVector{{1, 2, 3}}, s) == std::vector<double>{0.0, 0.0});
}
