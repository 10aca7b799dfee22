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

#include "oda/common/rng.hpp"
#include "oda/learn/features.hpp"
#include "oda/learn/networks.hpp"

namespace oda::learn {

enum class TargetMode { kDatasetAction, kPolicyAction };

struct CriticLossResult {
  double loss = 0.0;
  Eigen::RowVectorXd q;       // Q(s, a, z)
  Eigen::RowVectorXd target;  // y, gradient-stopped
  Eigen::VectorXd d_z;        // dL/dz
};

// Mean squared Bellman error. y = r + gamma * (1 - done) * Q_target(s', a', z)
// with a' from the batch (dataset mode) or a' ~ pi(.|s', z) (policy mode,
// which needs `theta` and `rng`). Accumulates gradients into psi.
CriticLossResult critic_loss(const Model& model, const Batch& batch,
                             const Eigen::VectorXd& z, ParamSet& psi,
                             const ParamSet& psi_target, double gamma,
                             TargetMode mode, const ParamSet* theta = nullptr,
                             Rng* rng = nullptr);

// A(s, a) = Q(s, a, z) - mean_k Q(s, a_k, z), a_k ~ pi(.|s, z). No gradient.
Eigen::RowVectorXd advantage(const Model& model, const ParamSet& psi,
                             const ParamSet& theta, const Eigen::MatrixXd& s,
                             const Eigen::MatrixXd& a, const Eigen::VectorXd& z,
                             int n_action_samples, Rng& rng);

// min(exp(A / lambda), weight_clip), elementwise.
Eigen::RowVectorXd awac_weights(const Eigen::RowVectorXd& adv,
                                double lambda_temp, double weight_clip);

struct ActorLossResult {
  double loss = 0.0;
  Eigen::RowVectorXd weights;
  Eigen::RowVectorXd log_prob;
};

// mean_b -log pi(a_b | s_b, z) * w_b with w = awac_weights(adv) treated as
// constants and z detached. Accumulates gradients into theta only.
ActorLossResult actor_loss(const Model& model, const Batch& batch,
                           const Eigen::VectorXd& z, ParamSet& theta,
                           const Eigen::RowVectorXd& adv, double lambda_temp,
                           double weight_clip);

// Same objective with externally supplied weights (w = 1 is behavior
// cloning).
ActorLossResult weighted_log_likelihood_loss(const Model& model,
                                             const Batch& batch,
                                             const Eigen::VectorXd& z,
                                             ParamSet& theta,
                                             const Eigen::RowVectorXd& weights);

struct KlLossResult {
  double loss = 0.0;
  Eigen::VectorXd d_mean;
  Eigen::VectorXd d_var;
};

// beta * KL(N(mean, diag var) || N(0, I)).
KlLossResult kl_loss(const LatentPosterior& posterior, double beta);

}  // namespace oda::learn
