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

#include "oda/meta/agent.hpp"

#include <cmath>

#include "oda/common/error.hpp"
#include "oda/learn/features.hpp"

namespace oda::meta {

using learn::ParamSet;

AgentState init_agent(const learn::Model& model, std::uint64_t seed) {
  AgentState s;
  Rng rng_phi(derive_seed(seed, "init-encoder"));
  Rng rng_theta(derive_seed(seed, "init-actor"));
  Rng rng_psi(derive_seed(seed, "init-critic"));
  if (model.config.latent_dim > 0) s.phi = model.encoder.init(rng_phi);
  s.theta = model.actor.init(rng_theta);
  s.psi = model.critic.init(rng_psi);
  s.psi_target = s.psi;
  s.adam_phi = learn::AdamState::zeros_like(s.phi);
  s.adam_theta = learn::AdamState::zeros_like(s.theta);
  s.adam_psi = learn::AdamState::zeros_like(s.psi);
  return s;
}

LossStats& LossStats::operator+=(const LossStats& o) {
  critic_loss += o.critic_loss;
  actor_loss += o.actor_loss;
  kl_loss += o.kl_loss;
  kl += o.kl;
  mean_weight += o.mean_weight;
  mean_q += o.mean_q;
  return *this;
}

LossStats& LossStats::operator/=(double d) {
  critic_loss /= d;
  actor_loss /= d;
  kl_loss /= d;
  kl /= d;
  mean_weight /= d;
  mean_q /= d;
  return *this;
}

LossStats accumulate_task_losses(const learn::Model& model, AgentState& state,
                                 std::span<const data::Transition> context,
                                 std::span<const data::Transition> batch,
                                 const UpdateConfig& cfg, Rng& rng) {
  const bool latent = model.config.latent_dim > 0;
  learn::Encoder::Result enc;
  learn::LatentSample zs;
  if (latent) {
    enc = model.encoder.encode(state.phi, context);
    zs = learn::sample_latent(enc.posterior, rng);
  }
  const learn::Batch b = learn::make_batch(batch);

  const learn::CriticLossResult critic =
      learn::critic_loss(model, b, zs.z, state.psi, state.psi_target, cfg.gamma,
                         cfg.target_mode, &state.theta, &rng);
  const Eigen::RowVectorXd adv = learn::advantage(
      model, state.psi, state.theta, b.s, b.a, zs.z, cfg.n_action_samples, rng);
  const learn::ActorLossResult actor = learn::actor_loss(
      model, b, zs.z, state.theta, adv, cfg.lambda_temp, cfg.weight_clip);

  LossStats st;
  st.critic_loss = critic.loss;
  st.actor_loss = actor.loss;
  st.mean_weight = actor.weights.mean();
  st.mean_q = critic.q.mean();
  if (latent) {
    const learn::KlLossResult kl = learn::kl_loss(enc.posterior, cfg.beta);
    const learn::KlLossResult kl_unit = learn::kl_loss(enc.posterior, 1.0);
    st.kl_loss = kl.loss;
    st.kl = kl_unit.loss;
    Eigen::VectorXd d_mean, d_var;
    learn::latent_backward(enc.posterior, zs, critic.d_z, d_mean, d_var);
    d_mean += kl.d_mean;
    d_var += kl.d_var;
    model.encoder.backward(state.phi, enc, d_mean, d_var);
  }
  if (!std::isfinite(st.critic_loss) || !std::isfinite(st.actor_loss) ||
      !std::isfinite(st.kl_loss)) {
    throw DivergenceError("non-finite loss (critic " +
                          std::to_string(st.critic_loss) + ", actor " +
                          std::to_string(st.actor_loss) + ", kl " +
                          std::to_string(st.kl_loss) + ")");
  }
  return st;
}

void apply_updates(AgentState& state, const UpdateConfig& cfg) {
  learn::apply_update(state.phi, state.adam_phi, cfg.lr_encoder, cfg.adam);
  learn::apply_update(state.theta, state.adam_theta, cfg.lr_actor, cfg.adam);
  learn::apply_update(state.psi, state.adam_psi, cfg.lr_critic, cfg.adam);
  if (cfg.use_target_critic) {
    learn::polyak_update(state.psi_target, state.psi, cfg.polyak);
  } else {
    for (std::size_t i = 0; i < state.psi.size(); ++i) {
      state.psi_target[i].value = state.psi[i].value;
    }
  }
  state.phi.zero_grad();
  state.theta.zero_grad();
  state.psi.zero_grad();
  ++state.iteration;
}

learn::LatentPosterior infer_posterior(const learn::Model& model,
                                       const ParamSet& phi,
                                       std::span<const data::Transition> context) {
  if (model.config.latent_dim == 0) return {};
  return model.encoder.encode(phi, context).posterior;
}

void put_agent(learn::Archive& a, const AgentState& s) {
  a.meta["iteration"] = std::to_string(s.iteration);
  learn::put_params(a, "phi", s.phi);
  learn::put_params(a, "theta", s.theta);
  learn::put_params(a, "psi", s.psi);
  learn::put_params(a, "psi_target", s.psi_target);
  learn::put_adam(a, "adam_phi", s.adam_phi);
  learn::put_adam(a, "adam_theta", s.adam_theta);
  learn::put_adam(a, "adam_psi", s.adam_psi);
}

AgentState get_agent(const learn::Archive& a, const learn::Model& model) {
  // Shapes come from a fresh initialization of the same architecture.
  AgentState s = init_agent(model, 0);
  s.iteration = std::stol(a.get("iteration"));
  learn::get_params(a, "phi", s.phi);
  learn::get_params(a, "theta", s.theta);
  learn::get_params(a, "psi", s.psi);
  learn::get_params(a, "psi_target", s.psi_target);
  s.adam_phi = learn::get_adam(a, "adam_phi", s.phi);
  s.adam_theta = learn::get_adam(a, "adam_theta", s.theta);
  s.adam_psi = learn::get_adam(a, "adam_psi", s.psi);
  return s;
}

void LatentPolicy::begin_episode(std::uint64_t episode_seed) {
  rng_ = Rng(derive_seed(episode_seed, "policy"));
}

sim::Action LatentPolicy::act(const sim::Observation& obs) {
  return model_.actor.act(theta_, obs.to_array(), z_, mode_, &rng_, sim_cfg_);
}

}  // namespace oda::meta
