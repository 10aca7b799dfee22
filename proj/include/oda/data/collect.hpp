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

#include "oda/data/buffer.hpp"
#include "oda/data/policy.hpp"
#include "oda/sim/env.hpp"

namespace oda::data {

// Rolls out `policy` with additive Gaussian exploration noise of standard
// deviation exploration_noise * a_max for n_episodes, appending every
// episode. Episode seeds derive from `seed` and the episode index.
Buffer collect_offline(const sim::TaskSpec& task, Policy& policy,
                       int n_episodes, std::uint64_t seed,
                       double exploration_noise, Source source,
                       const sim::SimConfig& cfg = {});

// Demonstration episodes from the scripted demonstrator.
Buffer collect_demos(const sim::TaskSpec& task, int n_episodes,
                     std::uint64_t seed, double skill_noise,
                     const sim::SimConfig& cfg = {});

// Offline data for one task. Each episode draws epsilon ~ U[0, 1]; every
// step then takes a uniformly random action with probability epsilon and
// otherwise the scripted demonstrator's action plus Gaussian noise of
// standard deviation noise_scale * a_max. The buffer therefore mixes
// near-expert and near-random behavior.
Buffer collect_scripted_noise(const sim::TaskSpec& task, int n_episodes,
                              std::uint64_t seed, double noise_scale,
                              double skill_noise,
                              const sim::SimConfig& cfg = {});

}  // namespace oda::data
