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
#include <functional>

#include "oda/common/rng.hpp"
#include "oda/data/transition.hpp"
#include "oda/sim/env.hpp"

namespace oda::data {

// Anything that maps observations to commanded twists during an episode.
class Policy {
 public:
  virtual ~Policy() = default;
  // Called once per episode before the first act().
  virtual void begin_episode(std::uint64_t /*episode_seed*/) {}
  virtual sim::Action act(const sim::Observation& obs) = 0;
};

// Adapts a stateless callable.
class FunctionPolicy : public Policy {
 public:
  explicit FunctionPolicy(std::function<sim::Action(const sim::Observation&)> f)
      : f_(std::move(f)) {}
  sim::Action act(const sim::Observation& obs) override { return f_(obs); }

 private:
  std::function<sim::Action(const sim::Observation&)> f_;
};

// Always commands zero twist.
class ZeroPolicy : public Policy {
 public:
  sim::Action act(const sim::Observation&) override { return {}; }
};

// Adds zero-mean Gaussian noise with per-component standard deviation
// sigma_frac * a_max to a wrapped policy.
class NoisyPolicy : public Policy {
 public:
  NoisyPolicy(Policy& base, double sigma_frac, const sim::SimConfig& cfg)
      : base_(base), sigma_frac_(sigma_frac), cfg_(cfg) {}
  void begin_episode(std::uint64_t episode_seed) override;
  sim::Action act(const sim::Observation& obs) override;

 private:
  Policy& base_;
  double sigma_frac_;
  sim::SimConfig cfg_;
  Rng rng_;
};

// Rolls out one episode. Executed (clipped) actions are recorded.
Episode run_episode(sim::Env& env, Policy& policy, std::uint64_t episode_seed,
                    Source source);
Episode run_episode(sim::Env& env, Policy& policy, std::uint64_t episode_seed,
                    double start_noise_mm, Source source);

}  // namespace oda::data
