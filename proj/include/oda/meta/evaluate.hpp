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
#include <vector>

#include "oda/data/policy.hpp"
#include "oda/sim/env.hpp"

namespace oda::meta {

struct EpisodeRecord {
  int episode = 0;
  std::uint64_t seed = 0;
  bool success = false;
  int length = 0;

  bool operator==(const EpisodeRecord&) const = default;
};

struct EvalResult {
  int successes = 0;
  int n_episodes = 0;
  double success_rate = 0.0;  // successes / n_episodes
  double mean_length = 0.0;
  std::vector<EpisodeRecord> records;

  bool operator==(const EvalResult&) const = default;
};

// Rolls out `policy` n_episodes times with the environment's start-pose
// noise (none for tasks flagged no_start_noise). Episode i uses seed
// derive_seed(seed, i). The policy's own mode decides whether actions are
// deterministic.
EvalResult evaluate(data::Policy& policy, sim::Env& env, int n_episodes,
                    std::uint64_t seed);

// evaluate() followed by success_rate >= threshold.
bool solves_task(data::Policy& policy, sim::Env& env, int n_eval,
                 double threshold, std::uint64_t seed);

}  // namespace oda::meta
