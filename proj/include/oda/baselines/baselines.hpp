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

#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "oda/data/buffer.hpp"
#include "oda/meta/checkpoint.hpp"
#include "oda/meta/finetune.hpp"
#include "oda/meta/meta_train.hpp"
#include "oda/sim/env.hpp"
#include "oda/sim/task.hpp"

namespace oda::baselines {

// Baseline checkpoints share the meta checkpoint container with an empty
// encoder (latent_dim = 0).
using BaselineCheckpoint = meta::Checkpoint;

// Non-meta AWAC. Uses MetaTrainConfig with the latent forced to zero
// dimensions; each iteration draws one minibatch per training task from
// the pool of every task's demos and offline data, so the gradient scale
// matches meta-training.
meta::MetaTrainResult awac_train(std::span<const sim::TaskSpec> train_tasks,
                                 const data::Buffer& demos,
                                 const data::Buffer& offline,
                                 const meta::MetaTrainConfig& cfg,
                                 std::ostream* log_out = nullptr,
                                 std::string config_snapshot = {});

// Online finetuning of a pooled AWAC checkpoint (no context).
meta::FinetuneResult awac_finetune(const BaselineCheckpoint& checkpoint,
                                   sim::Env& env,
                                   std::span<const data::Transition> demos,
                                   const meta::FinetuneConfig& cfg);

struct BcConfig {
  learn::NetworkConfig network;
  long iterations = 2000;
  int batch_size = 256;  // 0 means full batch
  double lr = 1e-3;
  std::uint64_t seed = 0;
};

std::string describe(const BcConfig& cfg);

// Maximum likelihood on demonstration actions with the policy network
// (no latent input, no critic training).
BaselineCheckpoint bc_train(std::span<const data::Transition> demos,
                            const BcConfig& cfg,
                            std::vector<double>* loss_log = nullptr,
                            std::string config_snapshot = {});

struct DdpgConfig {
  learn::NetworkConfig network;
  double gamma = 0.99;
  double polyak = 0.995;
  double lr_actor = 1e-3;
  double lr_critic = 1e-3;
  double exploration_noise = 0.2;  // std as a fraction of a_max
  // Quadratic penalty weight on actor means outside [-1, 1].
  double action_penalty = 1.0;
  int episode_budget = 300;
  int check_every = 5;
  int n_eval = 20;
  double threshold = 0.95;
  int updates_per_episode = 50;
  int batch_size = 256;
  std::uint64_t seed = 0;
};

std::string describe(const DdpgConfig& cfg);

struct DdpgResult {
  BaselineCheckpoint checkpoint;
  std::vector<meta::CurvePoint> curve;
  bool solved = false;
  int episodes_used = 0;
  long env_steps = 0;
  int eval_episodes = 0;
};

// DDPG from demonstrations: deterministic actor with Gaussian exploration
// noise, replay buffer seeded with the demos, target actor and critic,
// one-step returns and uniform replay. Stops at the first passing
// solves_task check (every check_every episodes) or when the budget runs
// out.
DdpgResult ddpgfd_train(sim::Env& env, std::span<const data::Transition> demos,
                        const DdpgConfig& cfg,
                        std::string config_snapshot = {});

}  // namespace oda::baselines
