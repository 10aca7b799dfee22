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

#include "oda/data/policy.hpp"
#include "oda/data/transition.hpp"
#include "oda/sim/env.hpp"

namespace oda::data {

// Scripted stand-in for a human demonstrator. It knows where the hole is
// relative to the nominal start pose (with a per-episode perception error)
// but not the start perturbation, so it has to find the hole by touch:
//   approach  move over the believed hole position, then descend;
//   search    on contact, slide against the measured torque plus a
//             decaying sinusoid until the peg drops below the surface;
//   insert    push down, servo the tilt to zero and wiggle when stuck.
// skill_noise scales both the perception error and per-step action noise.
class ScriptedDemonstrator : public Policy {
 public:
  ScriptedDemonstrator(sim::TaskSpec task, double skill_noise,
                       sim::SimConfig cfg = {});

  void begin_episode(std::uint64_t episode_seed) override;
  sim::Action act(const sim::Observation& obs) override;

  enum class Phase { kApproach, kSearch, kInsert };
  Phase phase() const { return phase_; }

 private:
  sim::TaskSpec task_;
  double skill_noise_;
  sim::SimConfig cfg_;
  Rng rng_;
  Phase phase_ = Phase::kApproach;
  double target_x_ = 0.0;
  double contact_y_ = 0.0;
  int search_steps_ = 0;
  int stuck_steps_ = 0;
};

Episode scripted_demonstrator(const sim::TaskSpec& task,
                              std::uint64_t episode_seed, double skill_noise,
                              const sim::SimConfig& cfg = {});

}  // namespace oda::data
