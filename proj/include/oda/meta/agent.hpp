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

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "oda/common/rng.hpp"
#include "oda/data/policy.hpp"
#include "oda/data/transition.hpp"
#include "oda/learn/adam.hpp"
#include "oda/learn/archive.hpp"
#include "oda/learn/losses.hpp"
#include "oda/learn/networks.hpp"

namespace oda::meta {

// Loss and optimizer settings shared by meta-training, finetuning and the
// AWAC baseline.
struct UpdateConfig {
  double gamma = 0.99;
  double lambda_temp = 0.3;
  double beta = 0.1;
  double weight_clip = 20.0;
  learn::TargetMode target_mode = learn::TargetMode::kDatasetAction;
  int n_action_samples = 4;
  bool use_target_critic = true;
  double polyak = 0.995;
  double lr_encoder = 3e-4;
  double lr_actor = 3e-4;
  double lr_critic = 3e-4;
  learn::AdamConfig adam;
};

// Encoder, actor and critic parameters with their optimizer states. With
// latent_dim = 0 the encoder is empty and this is a plain actor-critic.
struct AgentState {
  learn::ParamSet phi, theta, psi, psi_target;
  learn::AdamState adam_phi, adam_theta, adam_psi;
  long iteration = 0;

  bool operator==(const AgentState&) const = default;
};

AgentState init_agent(const learn::Model& model, std::uint64_t seed);

struct LossStats {
  double critic_loss = 0.0;
  double actor_loss = 0.0;
  double kl_loss = 0.0;
  double kl = 0.0;  // unscaled posterior KL
  double mean_weight = 0.0;
  double mean_q = 0.0;

  LossStats& operator+=(const LossStats& o);
  LossStats& operator/=(double d);
};

// One task's contribution to an update: samples z from the encoded
// context (none when latent_dim = 0), then accumulates
//   phi  <- grad (L_critic + L_KL), through the reparameterized z
//   theta <- grad L_actor, with z and the AWAC weights held constant
//   psi  <- grad L_critic
// into the gradient slots of `state`. Parameters are not modified.
LossStats accumulate_task_losses(const learn::Model& model, AgentState& state,
                                 std::span<const data::Transition> context,
                                 std::span<const data::Transition> batch,
                                 const UpdateConfig& cfg, Rng& rng);

// Applies the three optimizer steps with their learning rates, the
// Polyak target update, and clears the gradients.
void apply_updates(AgentState& state, const UpdateConfig& cfg);

// Posterior over z for a context; an empty posterior when latent_dim = 0.
learn::LatentPosterior infer_posterior(const learn::Model& model,
                                       const learn::ParamSet& phi,
                                       std::span<const data::Transition> context);

void put_agent(learn::Archive& a, const AgentState& s);
AgentState get_agent(const learn::Archive& a, const learn::Model& model);

// Acts with a fixed latent. Mean mode is deterministic; stochastic mode
// draws from an rng reseeded at every episode start.
class LatentPolicy : public data::Policy {
 public:
  LatentPolicy(const learn::Model& model, const learn::ParamSet& theta,
               Eigen::VectorXd z, learn::ActMode mode,
               const sim::SimConfig& sim_cfg = {})
      : model_(model), theta_(theta), z_(std::move(z)), mode_(mode),
        sim_cfg_(sim_cfg) {}

  void begin_episode(std::uint64_t episode_seed) override;
  sim::Action act(const sim::Observation& obs) override;

 private:
  const learn::Model& model_;
  const learn::ParamSet& theta_;
  Eigen::VectorXd z_;
  learn::ActMode mode_;
  sim::SimConfig sim_cfg_;
  Rng rng_;
};

}  // namespace oda::meta
