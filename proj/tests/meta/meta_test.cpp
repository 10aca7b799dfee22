// Copyright 2026 The ODA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "oda/baselines/baselines.hpp"
#include "oda/common/error.hpp"
#include "oda/data/collect.hpp"
#include "oda/meta/adapt.hpp"
#include "oda/meta/evaluate.hpp"
#include "oda/meta/finetune.hpp"
#include "oda/meta/meta_train.hpp"
#include "oda/sim/task.hpp"

namespace oda::meta {
namespace {

namespace fs = std::filesystem;

struct Small {
  sim::TaskFamily family;
  data::Buffer demos, offline;
};

// Three training tasks with a few demos and noisy episodes each.
const Small& small() {
  static const Small s = [] {
    Small out;
    out.family = sim::make_task_family(3, 3, 2, 1);
    std::vector<sim::TaskSpec> all = out.family.train;
    all.insert(all.end(), out.family.test.begin(), out.family.test.end());
    for (const auto& t : all) {
      out.demos.append(data::collect_demos(t, 4, 100 + t.task_id, 0.1));
    }
    for (const auto& t : out.family.train) {
      out.offline.append(
          data::collect_scripted_noise(t, 10, 200 + t.task_id, 0.3, 0.1));
    }
    return out;
  }();
  return s;
}

MetaTrainConfig tiny_config() {
  MetaTrainConfig c;
  c.network.latent_dim = 3;
  c.network.encoder_hidden = 8;
  c.network.actor_hidden = 8;
  c.network.critic_hidden = 8;
  c.iterations = 30;
  c.context_size = 8;
  c.batch_size = 16;
  c.log_every = 10;
  c.seed = 11;
  return c;
}

std::vector<data::Transition> demos_for(const data::Buffer& b, int task_id) {
  std::vector<data::Transition> out;
  for (std::size_t i : b.indices(task_id)) out.push_back(b[i]);
  return out;
}

TEST(MetaTrain, DeterministicForAFixedSeed) {
  const Small& s = small();
  std::ostringstream log1, log2;
  const auto a = meta_train(s.family.train, s.demos, s.offline, tiny_config(), &log1);
  const auto b = meta_train(s.family.train, s.demos, s.offline, tiny_config(), &log2);
  EXPECT_TRUE(a.checkpoint == b.checkpoint);
  EXPECT_EQ(log1.str(), log2.str());
  EXPECT_EQ(a.checkpoint.agent.iteration, 30);
  // rows at 0, 10, 20 and the final iteration
  EXPECT_EQ(a.log.size(), 4u);

  MetaTrainConfig other = tiny_config();
  other.seed = 12;
  const auto c = meta_train(s.family.train, s.demos, s.offline, other);
  EXPECT_NE(a.checkpoint.params_hash(), c.checkpoint.params_hash());
}

TEST(MetaTrain, RejectsMissingData) {
  const Small& s = small();
  EXPECT_THROW(meta_train({}, s.demos, s.offline, tiny_config()), ContractError);
  data::Buffer empty;
  EXPECT_THROW(meta_train(s.family.train, empty, s.offline, tiny_config()),
               ContractError);
  EXPECT_THROW(meta_train(s.family.train, s.demos, empty, tiny_config()),
               ContractError);
  MetaTrainConfig bad = tiny_config();
  bad.batch_size = 0;
  EXPECT_THROW(meta_train(s.family.train, s.demos, s.offline, bad), ContractError);
}

TEST(Checkpoint, RoundTripAndCorruption) {
  const Small& s = small();
  const Checkpoint ck =
      meta_train(s.family.train, s.demos, s.offline, tiny_config()).checkpoint;
  const fs::path dir = fs::temp_directory_path() / "oda_meta_ckpt";
  fs::create_directories(dir);
  const fs::path p = dir / "a.ckpt";
  save_checkpoint(ck, p);
  const Checkpoint back = load_checkpoint(p);
  EXPECT_TRUE(back == ck);
  EXPECT_EQ(back.params_hash(), ck.params_hash());

  std::string bytes;
  {
    std::ifstream in(p, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  bytes[bytes.size() / 2] ^= 0x10;
  {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << bytes;
  }
  EXPECT_THROW(load_checkpoint(p), FormatError);
  fs::remove_all(dir);
}

TEST(Adapt, DoesNotModifyTheCheckpoint) {
  const Small& s = small();
  auto ck = std::make_shared<Checkpoint>(
      meta_train(s.family.train, s.demos, s.offline, tiny_config()).checkpoint);
  const Checkpoint before = *ck;
  const sim::TaskSpec& task = s.family.test.front();
  const auto demos = demos_for(s.demos, task.task_id);

  AdaptedPolicy pol = adapt(ck, demos);
  sim::Env env(task);
  evaluate(pol, env, 3, 5);
  FinetuneConfig fc;
  fc.episode_budget = 2;
  fc.check_every = 1;
  fc.n_eval = 2;
  fc.threshold = 2.0;
  fc.updates_per_episode = 2;
  fc.batch_size = 8;
  fc.context_size = 4;
  finetune(pol, env, demos, fc);
  EXPECT_TRUE(*ck == before);
  EXPECT_TRUE(pol.checkpoint() == before);
}

TEST(Adapt, PosteriorMeanIsDeterministicAndUsesTheDemos) {
  const Small& s = small();
  auto ck = std::make_shared<Checkpoint>(
      meta_train(s.family.train, s.demos, s.offline, tiny_config()).checkpoint);
  const auto d0 = demos_for(s.demos, s.family.test[0].task_id);
  const auto d1 = demos_for(s.demos, s.family.test[1].task_id);
  EXPECT_EQ(adapt(ck, d0).z(), adapt(ck, d0).z());
  EXPECT_NE(adapt(ck, d0).z(), adapt(ck, d1).z());
  EXPECT_THROW(adapt(ck, {}), ContractError);
  EXPECT_THROW(adapt(nullptr, d0), ContractError);
}

TEST(Evaluate, CountsAndSeedsAreConsistent) {
  const Small& s = small();
  auto ck = std::make_shared<Checkpoint>(
      meta_train(s.family.train, s.demos, s.offline, tiny_config()).checkpoint);
  const sim::TaskSpec& task = s.family.train.front();
  AdaptedPolicy pol = adapt(ck, demos_for(s.demos, task.task_id));
  sim::Env env(task);
  const EvalResult a = evaluate(pol, env, 7, 9);
  const EvalResult b = evaluate(pol, env, 7, 9);
  EXPECT_TRUE(a == b);
  ASSERT_EQ(a.records.size(), 7u);
  int succ = 0;
  for (const auto& r : a.records) succ += r.success;
  EXPECT_EQ(a.successes, succ);
  EXPECT_EQ(a.success_rate, succ / 7.0);
  EXPECT_THROW(evaluate(pol, env, 0, 9), ContractError);
}

TEST(Finetune, ThresholdZeroExitsBeforeAnyOnlineEpisode) {
  const Small& s = small();
  auto ck = std::make_shared<Checkpoint>(
      meta_train(s.family.train, s.demos, s.offline, tiny_config()).checkpoint);
  const sim::TaskSpec& task = s.family.test.back();
  const auto demos = demos_for(s.demos, task.task_id);
  sim::Env env(task);
  FinetuneConfig fc;
  fc.threshold = 0.0;
  fc.n_eval = 3;
  const FinetuneResult r = finetune(adapt(ck, demos), env, demos, fc);
  EXPECT_TRUE(r.solved);
  EXPECT_TRUE(r.early_exit);
  EXPECT_EQ(r.episodes_used, 0);
  EXPECT_EQ(r.env_steps, 0);
  EXPECT_TRUE(r.curve.empty());
  EXPECT_EQ(r.checkpoint.params_hash(), ck->params_hash());
}

TEST(Finetune, UnreachableThresholdSpendsTheWholeBudget) {
  const Small& s = small();
  auto ck = std::make_shared<Checkpoint>(
      meta_train(s.family.train, s.demos, s.offline, tiny_config()).checkpoint);
  const sim::TaskSpec& task = s.family.test.back();
  const auto demos = demos_for(s.demos, task.task_id);
  sim::Env env(task);
  FinetuneConfig fc;
  fc.threshold = 2.0;
  fc.episode_budget = 6;
  fc.check_every = 3;
  fc.n_eval = 2;
  fc.updates_per_episode = 3;
  fc.batch_size = 8;
  fc.context_size = 4;
  fc.seed = 4;
  const FinetuneResult r = finetune(adapt(ck, demos), env, demos, fc);
  EXPECT_FALSE(r.solved);
  EXPECT_FALSE(r.early_exit);
  EXPECT_EQ(r.episodes_used, 6);
  ASSERT_EQ(r.curve.size(), 6u);
  long steps = 0;
  for (std::size_t i = 0; i < r.curve.size(); ++i) {
    EXPECT_EQ(r.curve[i].episode, static_cast<int>(i) + 1);
    steps += r.curve[i].length;
    EXPECT_EQ(r.curve[i].cumulative_steps, steps);
  }
  EXPECT_EQ(r.env_steps, steps);
  EXPECT_EQ(r.gradient_steps, 18);
  EXPECT_NE(r.checkpoint.params_hash(), ck->params_hash());

  const FinetuneResult again = finetune(adapt(ck, demos), env, demos, fc);
  EXPECT_EQ(again.curve, r.curve);
  EXPECT_TRUE(again.checkpoint == r.checkpoint);

  std::ostringstream csv;
  write_curve_csv(csv, r.curve);
  EXPECT_EQ(read_curve_csv(csv.str()), r.curve);
  EXPECT_THROW(read_curve_csv("bogus\n"), FormatError);
}

TEST(Finetune, RejectsBadSettings) {
  const Small& s = small();
  auto ck = std::make_shared<Checkpoint>(
      meta_train(s.family.train, s.demos, s.offline, tiny_config()).checkpoint);
  const sim::TaskSpec& task = s.family.test.back();
  const auto demos = demos_for(s.demos, task.task_id);
  sim::Env env(task);
  FinetuneConfig fc;
  fc.check_every = 0;
  EXPECT_THROW(finetune(adapt(ck, demos), env, demos, fc), ContractError);
  fc = FinetuneConfig{};
  EXPECT_THROW(finetune(adapt(ck, demos), env, {}, fc), ContractError);
}

}  // namespace
}  // namespace oda::meta
