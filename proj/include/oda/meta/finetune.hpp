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
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "oda/data/buffer.hpp"
#include "oda/meta/adapt.hpp"
#include "oda/meta/agent.hpp"
#include "oda/meta/checkpoint.hpp"
#include "oda/sim/env.hpp"

namespace oda::meta {

struct FinetuneConfig {
  UpdateConfig update;
  int episode_budget = 200;
  int check_every = 5;  // episodes between solves_task checks
  int n_eval = 20;
  double threshold = 0.95;
  int updates_per_episode = 50;
  int batch_size = 256;
  int context_size = 32;
  // Start the online buffer with the task's demonstrations.
  bool seed_with_demos = true;
  std::uint64_t seed = 0;
};

struct CurvePoint {
  int episode = 0;  // 1-based
  bool success = false;
  int length = 0;
  long cumulative_steps = 0;

  bool operator==(const CurvePoint&) const = default;
};

void write_curve_csv(std::ostream& out, std::span<const CurvePoint> curve);
// Inverse of write_curve_csv; throws FormatError on malformed input.
std::vector<CurvePoint> read_curve_csv(const std::string& text);

struct FinetuneResult {
  Checkpoint checkpoint;
  std::vector<CurvePoint> curve;
  bool solved = false;
  bool early_exit = false;  // solved before any online episode
  int episodes_used = 0;    // online training episodes
  long env_steps = 0;       // steps in those episodes
  int eval_episodes = 0;    // episodes spent in solves_task checks
  long gradient_steps = 0;
};

// Online finetuning of an adapted policy. Checks solves_task first and
// returns immediately if it passes. Otherwise repeats: one stochastic
// episode with z from the current encoder on the demos, appended to the
// online buffer; updates_per_episode gradient steps on minibatches of the
// online buffer with contexts resampled from the demos; a solves_task
// check every check_every episodes. Stops when the check passes or the
// budget is used up. With latent_dim = 0 this is plain AWAC finetuning.
FinetuneResult finetune(const AdaptedPolicy& adapted, sim::Env& env,
                        std::span<const data::Transition> demos,
                        const FinetuneConfig& cfg);

}  // namespace oda::meta
