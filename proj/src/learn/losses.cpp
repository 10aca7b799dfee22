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

#include "oda/learn/losses.hpp"

#include <cmath>

#include "oda/common/error.hpp"

namespace oda::learn {

CriticLossResult critic_loss(const Model& model, const Batch& batch,
                             const Eigen::VectorXd& z, ParamSet& psi,
                             const ParamSet& psi_target, double gamma,
                             TargetMode mode, const ParamSet* theta,
                             Rng* rng) {
  const Eigen::Index n = batch.size();
  if (n == 0) throw ContractError("critic_loss: empty batch");

  Eigen::MatrixXd a_next = batch.a_next;
  if (mode == TargetMode::kPolicyAction) {
    if (!theta || !rng) {
      throw ContractError("policy-action targets need actor parameters and rng");
    }
    const Actor::Output out = model.actor.forward(*theta, batch.s_next, z);
    a_next = model.actor.sample(out, *rng);
  } else {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (batch.done[j] == 0.0 && batch.a_next_valid[j] == 0.0) {
        throw ContractError("dataset-action target without a valid a_next");
      }
    }
  }
  const Eigen::RowVectorXd q_next =
      model.critic.value(psi_target, batch.s_next, a_next, z);

  CriticLossResult res;
  res.target = batch.r.array() +
               gamma * (1.0 - batch.done.array()) * q_next.array();
  // Terminal rows bootstrap from nothing, even if q_next is non-finite.
  for (Eigen::Index j = 0; j < n; ++j) {
    if (batch.done[j] != 0.0) res.target[j] = batch.r[j];
  }

  Mlp::Cache cache;
  res.q = model.critic.value(psi, batch.s, batch.a, z, &cache);
  const Eigen::RowVectorXd err = res.q - res.target;
  res.loss = err.squaredNorm() / static_cast<double>(n);
  const Eigen::RowVectorXd d_q = (2.0 / static_cast<double>(n)) * err;
  res.d_z = model.critic.backward(psi, cache, d_q);
  return res;
}

Eigen::RowVectorXd advantage(const Model& model, const ParamSet& psi,
                             const ParamSet& theta, const Eigen::MatrixXd& s,
                             const Eigen::MatrixXd& a, const Eigen::VectorXd& z,
                             int n_action_samples, Rng& rng) {
  if (n_action_samples < 1) {
    throw ContractError("advantage needs at least one action sample");
  }
  const Eigen::RowVectorXd q = model.critic.value(psi, s, a, z);
  const Actor::Output out = model.actor.forward(theta, s, z);
  Eigen::RowVectorXd baseline = Eigen::RowVectorXd::Zero(s.cols());
  for (int k = 0; k < n_action_samples; ++k) {
    baseline += model.critic.value(psi, s, model.actor.sample(out, rng), z);
  }
  baseline /= static_cast<double>(n_action_samples);
  return q - baseline;
}

Eigen::RowVectorXd awac_weights(const Eigen::RowVectorXd& adv,
                                double lambda_temp, double weight_clip) {
  if (!(lambda_temp > 0.0)) throw ContractError("lambda must be positive");
  // Clamping the exponent a little above log(clip) avoids overflow; the
  // final min makes clipped weights exactly equal to the clip.
  const double cap = std::log(weight_clip) + 1.0;
  return (adv.array() / lambda_temp).min(cap).exp().min(weight_clip).matrix();
}

ActorLossResult weighted_log_likelihood_loss(const Model& model,
                                             const Batch& batch,
                                             const Eigen::VectorXd& z,
                                             ParamSet& theta,
                                             const Eigen::RowVectorXd& weights) {
  const Eigen::Index n = batch.size();
  if (n == 0) throw ContractError("actor_loss: empty batch");
  const Actor::Output out = model.actor.forward(theta, batch.s, z);
  ActorLossResult res;
  res.weights = weights;
  res.log_prob = gaussian_log_prob(batch.a, out.mean, out.log_std);
  res.loss = -(res.log_prob.array() * weights.array()).sum() /
             static_cast<double>(n);

  const Eigen::ArrayXXd inv_std = (-out.log_std.array()).exp();
  const Eigen::ArrayXXd u = (batch.a - out.mean).array() * inv_std;
  Eigen::ArrayXXd w = weights.replicate(sim::kActDim, 1).array() /
                      static_cast<double>(n);
  // d logp / d mean = u / std; d logp / d log_std = u^2 - 1.
  const Eigen::MatrixXd d_mean = (-w * u * inv_std).matrix();
  const Eigen::MatrixXd d_log_std = (-w * (u.square() - 1.0)).matrix();
  model.actor.backward(theta, out, d_mean, d_log_std);
  return res;
}

ActorLossResult actor_loss(const Model& model, const Batch& batch,
                           const Eigen::VectorXd& z, ParamSet& theta,
                           const Eigen::RowVectorXd& adv, double lambda_temp,
                           double weight_clip) {
  return weighted_log_likelihood_loss(
      model, batch, z, theta, awac_weights(adv, lambda_temp, weight_clip));
}

KlLossResult kl_loss(const LatentPosterior& posterior, double beta) {
  if (!(beta >= 0.0)) throw ContractError("beta must be non-negative");
  const Eigen::ArrayXd m = posterior.mean.array();
  const Eigen::ArrayXd v = posterior.var.array();
  KlLossResult res;
  res.loss = beta * 0.5 * (v + m.square() - 1.0 - v.log()).sum();
  res.d_mean = (beta * m).matrix();
  res.d_var = (beta * 0.5 * (1.0 - v.inverse())).matrix();
  return res;
}

}  // namespace oda::learn
