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

#include "oda/data/demonstrator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oda/common/error.hpp"

namespace oda::data {
namespace {

constexpr double kPerceptionError = 2.0;  // mm at skill_noise = 1
constexpr double kActionNoise = 0.25;     // fraction of a_max at skill_noise = 1
constexpr double kContactForce = 1.0;     // N
constexpr double kHoverClearance = 1.5;   // mm above the believed surface
constexpr double kCaptureDrop = 1.5;      // mm below the first contact height

}  // namespace

ScriptedDemonstrator::ScriptedDemonstrator(sim::TaskSpec task,
                                           double skill_noise,
                                           sim::SimConfig cfg)
    : task_(std::move(task)), skill_noise_(skill_noise), cfg_(cfg) {
  if (!(skill_noise >= 0.0)) {
    throw ContractError("skill_noise must be non-negative");
  }
}

void ScriptedDemonstrator::begin_episode(std::uint64_t episode_seed) {
  rng_ = Rng(derive_seed(episode_seed, "demonstrator"));
  phase_ = Phase::kApproach;
  target_x_ = task_.hole_center_x - sim::nominal_start_pose(cfg_).x +
              skill_noise_ * kPerceptionError * rng_.uniform(-1.0, 1.0);
  contact_y_ = 0.0;
  search_steps_ = 0;
  stuck_steps_ = 0;
}

sim::Action ScriptedDemonstrator::act(const sim::Observation& obs) {
  const double x = obs.rel_pose.x;
  const double y = obs.rel_pose.y;
  const double theta = obs.rel_pose.theta;
  const double surface_y = -cfg_.hover_height;
  const bool touching = std::abs(obs.wrench.fy) > kContactForce ||
                        std::abs(obs.wrench.fx) > kContactForce;

  sim::Action a;
  a.omega = -2.0 * theta;
  switch (phase_) {
    case Phase::kApproach: {
      const double err = target_x_ - x;
      a.vx = 5.0 * err;
      if (std::abs(err) > 0.5) {
        a.vy = 5.0 * (surface_y + kHoverClearance - y);
      } else {
        a.vy = -10.0;
      }
      if (touching) {
        phase_ = Phase::kSearch;
        contact_y_ = y;
      }
      if (y < surface_y - kCaptureDrop) phase_ = Phase::kInsert;
      break;
    }
    case Phase::kSearch: {
      ++search_steps_;
      const double t = search_steps_ * cfg_.dt;
      const double sweep = 6.0 * std::exp(-t / 3.0) *
                           std::sin(2.0 * std::numbers::pi * t / 1.2);
      a.vx = std::clamp(-0.15 * obs.wrench.tau, -6.0, 6.0) + sweep;
      a.vy = -4.0;
      if (y < contact_y_ - kCaptureDrop) phase_ = Phase::kInsert;
      break;
    }
    case Phase::kInsert: {
      a.vy = -15.0;
      a.vx = 0.0;
      if (obs.vel.vy > -1.0) {
        ++stuck_steps_;
      } else {
        stuck_steps_ = 0;
      }
      if (stuck_steps_ > 2) {
        a.omega += 0.2 * std::sin(1.7 * stuck_steps_);
        a.vy = -8.0;
      }
      break;
    }
  }
  const double sigma = skill_noise_ * kActionNoise;
  a.vx += sigma * cfg_.a_max.vx * rng_.normal();
  a.vy += sigma * cfg_.a_max.vy * rng_.normal();
  a.omega += sigma * cfg_.a_max.omega * rng_.normal();
  return sim::clip_action(a, cfg_);
}

Episode scripted_demonstrator(const sim::TaskSpec& task,
                              std::uint64_t episode_seed, double skill_noise,
                              const sim::SimConfig& cfg) {
  ScriptedDemonstrator demo(task, skill_noise, cfg);
  sim::Env env(task, cfg);
  return run_episode(env, demo, episode_seed, Source::kDemo);
}

}  // namespace oda::data
