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

#include "oda/data/policy.hpp"

namespace oda::data {

void NoisyPolicy::begin_episode(std::uint64_t episode_seed) {
  base_.begin_episode(episode_seed);
  rng_ = Rng(derive_seed(episode_seed, "exploration"));
}

sim::Action NoisyPolicy::act(const sim::Observation& obs) {
  sim::Action a = base_.act(obs);
  a.vx += sigma_frac_ * cfg_.a_max.vx * rng_.normal();
  a.vy += sigma_frac_ * cfg_.a_max.vy * rng_.normal();
  a.omega += sigma_frac_ * cfg_.a_max.omega * rng_.normal();
  return a;
}

Episode run_episode(sim::Env& env, Policy& policy, std::uint64_t episode_seed,
                    Source source) {
  return run_episode(env, policy, episode_seed,
                     env.task().no_start_noise ? 0.0
                                               : env.config().start_noise_mm,
                     source);
}

Episode run_episode(sim::Env& env, Policy& policy, std::uint64_t episode_seed,
                    double start_noise_mm, Source source) {
  Episode ep;
  ep.task_id = env.task().task_id;
  ep.episode_seed = episode_seed;
  ep.source = source;

  sim::Observation obs = env.reset(episode_seed, start_noise_mm);
  policy.begin_episode(episode_seed);
  sim::Action action = sim::clip_action(policy.act(obs), env.config());
  for (;;) {
    const sim::StepResult r = env.step(action);
    Transition t;
    t.s = obs.to_array();
    t.a = action.to_array();
    t.r = r.reward;
    t.s_next = r.obs.to_array();
    t.done = r.done;
    t.task_id = ep.task_id;
    t.source = source;
    obs = r.obs;
    if (!r.done) {
      action = sim::clip_action(policy.act(obs), env.config());
      t.a_next = action.to_array();
      t.a_next_valid = true;
    }
    ep.transitions.push_back(t);
    if (r.done) {
      ep.success = r.success;
      break;
    }
  }
  return ep;
}

}  // namespace oda::data
