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

#include "oda/data/collect.hpp"

#include "oda/common/error.hpp"
#include "oda/data/demonstrator.hpp"

namespace oda::data {

Buffer collect_offline(const sim::TaskSpec& task, Policy& policy,
                       int n_episodes, std::uint64_t seed,
                       double exploration_noise, Source source,
                       const sim::SimConfig& cfg) {
  if (n_episodes < 1) throw ContractError("n_episodes must be at least 1");
  sim::Env env(task, cfg);
  NoisyPolicy noisy(policy, exploration_noise, cfg);
  Buffer buf;
  for (int e = 0; e < n_episodes; ++e) {
    buf.append(run_episode(env, noisy,
                           derive_seed(seed, static_cast<std::uint64_t>(e)),
                           source));
  }
  return buf;
}

Buffer collect_demos(const sim::TaskSpec& task, int n_episodes,
                     std::uint64_t seed, double skill_noise,
                     const sim::SimConfig& cfg) {
  if (n_episodes < 1) throw ContractError("n_episodes must be at least 1");
  Buffer buf;
  for (int e = 0; e < n_episodes; ++e) {
    buf.append(scripted_demonstrator(
        task, derive_seed(seed, static_cast<std::uint64_t>(e)), skill_noise,
        cfg));
  }
  return buf;
}

namespace {

// Per step: a uniform random action with probability `epsilon`, otherwise
// the wrapped policy's action plus Gaussian noise.
class EpsilonMixPolicy : public Policy {
 public:
  EpsilonMixPolicy(Policy& base, double epsilon, double sigma_frac,
                   const sim::SimConfig& cfg)
      : base_(base), epsilon_(epsilon), sigma_frac_(sigma_frac), cfg_(cfg) {}

  void begin_episode(std::uint64_t episode_seed) override {
    base_.begin_episode(episode_seed);
    rng_ = Rng(derive_seed(episode_seed, "epsilon-mix"));
  }

  sim::Action act(const sim::Observation& obs) override {
    // The base policy is always queried so its internal state advances.
    sim::Action a = base_.act(obs);
    const double u = rng_.uniform();
    const sim::Action random{rng_.uniform(-1.0, 1.0) * cfg_.a_max.vx,
                             rng_.uniform(-1.0, 1.0) * cfg_.a_max.vy,
                             rng_.uniform(-1.0, 1.0) * cfg_.a_max.omega};
    const double n0 = rng_.normal(), n1 = rng_.normal(), n2 = rng_.normal();
    if (u < epsilon_) return random;
    a.vx += sigma_frac_ * cfg_.a_max.vx * n0;
    a.vy += sigma_frac_ * cfg_.a_max.vy * n1;
    a.omega += sigma_frac_ * cfg_.a_max.omega * n2;
    return a;
  }

 private:
  Policy& base_;
  double epsilon_;
  double sigma_frac_;
  sim::SimConfig cfg_;
  Rng rng_;
};

}  // namespace

Buffer collect_scripted_noise(const sim::TaskSpec& task, int n_episodes,
                              std::uint64_t seed, double noise_scale,
                              double skill_noise, const sim::SimConfig& cfg) {
  if (n_episodes < 1) throw ContractError("n_episodes must be at least 1");
  sim::Env env(task, cfg);
  ScriptedDemonstrator demo(task, skill_noise, cfg);
  Buffer buf;
  for (int e = 0; e < n_episodes; ++e) {
    const std::uint64_t ep_seed =
        derive_seed(seed, static_cast<std::uint64_t>(e));
    Rng level(derive_seed(ep_seed, "noise-level"));
    EpsilonMixPolicy mix(demo, level.uniform(), noise_scale, cfg);
    buf.append(run_episode(env, mix, ep_seed, Source::kScriptedNoise));
  }
  return buf;
}

}  // namespace oda::data
