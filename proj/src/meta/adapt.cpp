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

#include "oda/meta/adapt.hpp"

#include "oda/common/error.hpp"

namespace oda::meta {

AdaptedPolicy::AdaptedPolicy(std::shared_ptr<const Checkpoint> checkpoint,
                             learn::LatentPosterior posterior,
                             Eigen::VectorXd z,
                             std::vector<data::Transition> context)
    : checkpoint_(std::move(checkpoint)),
      model_(checkpoint_->network),
      posterior_(std::move(posterior)),
      z_(std::move(z)),
      context_(std::move(context)) {}

void AdaptedPolicy::begin_episode(std::uint64_t episode_seed) {
  rng_ = Rng(derive_seed(episode_seed, "policy"));
}

sim::Action AdaptedPolicy::act(const sim::Observation& obs) {
  return model_.actor.act(checkpoint_->agent.theta, obs.to_array(), z_, mode_,
                          &rng_);
}

AdaptedPolicy adapt(std::shared_ptr<const Checkpoint> checkpoint,
                    std::span<const data::Transition> demos,
                    const AdaptConfig& cfg) {
  if (!checkpoint) throw ContractError("adapt: null checkpoint");
  const learn::Model model = checkpoint->model();
  if (model.config.latent_dim == 0) {
    return AdaptedPolicy(std::move(checkpoint), {}, Eigen::VectorXd(), {});
  }
  if (demos.empty()) throw ContractError("adapt: no demonstrations");

  std::vector<data::Transition> context;
  if (cfg.context_size > 0) {
    Rng rng(derive_seed(cfg.seed, "context"));
    for (int i = 0; i < cfg.context_size; ++i) {
      context.push_back(demos[rng.uniform_index(demos.size())]);
    }
  } else {
    context.assign(demos.begin(), demos.end());
  }
  learn::LatentPosterior post =
      infer_posterior(model, checkpoint->agent.phi, context);
  Eigen::VectorXd z = post.mean;
  if (cfg.latent_mode == LatentMode::kSample) {
    Rng rng(derive_seed(cfg.seed, "latent"));
    z = learn::sample_latent(post, rng).z;
  }
  return AdaptedPolicy(std::move(checkpoint), std::move(post), std::move(z),
                       std::move(context));
}

}  // namespace oda::meta
