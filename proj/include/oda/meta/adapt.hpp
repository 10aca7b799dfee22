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
#include <memory>
#include <span>
#include <vector>

#include "oda/data/policy.hpp"
#include "oda/data/transition.hpp"
#include "oda/meta/checkpoint.hpp"

namespace oda::meta {

enum class LatentMode { kPosteriorMean, kSample };

struct AdaptConfig {
  LatentMode latent_mode = LatentMode::kPosteriorMean;
  std::uint64_t seed = 0;  // used by kSample and context subsampling
  // Number of demo transitions drawn (with replacement) as context; 0 uses
  // every demo transition.
  int context_size = 0;
};

// A checkpoint with the task variable frozen from a demonstration context.
// Acts in mean mode unless switched.
class AdaptedPolicy : public data::Policy {
 public:
  AdaptedPolicy(std::shared_ptr<const Checkpoint> checkpoint,
                learn::LatentPosterior posterior, Eigen::VectorXd z,
                std::vector<data::Transition> context);

  void begin_episode(std::uint64_t episode_seed) override;
  sim::Action act(const sim::Observation& obs) override;

  void set_mode(learn::ActMode mode) { mode_ = mode; }

  const Checkpoint& checkpoint() const { return *checkpoint_; }
  std::shared_ptr<const Checkpoint> checkpoint_ptr() const { return checkpoint_; }
  const learn::Model& model() const { return model_; }
  const learn::LatentPosterior& posterior() const { return posterior_; }
  const Eigen::VectorXd& z() const { return z_; }
  const std::vector<data::Transition>& context() const { return context_; }

 private:
  std::shared_ptr<const Checkpoint> checkpoint_;
  learn::Model model_;
  learn::LatentPosterior posterior_;
  Eigen::VectorXd z_;
  std::vector<data::Transition> context_;
  learn::ActMode mode_ = learn::ActMode::kMean;
  Rng rng_;
};

// Infers the posterior from the new task's demonstrations and fixes z.
// Network parameters are not touched. For checkpoints without a latent
// (latent_dim = 0) the demos are not needed and z is empty.
AdaptedPolicy adapt(std::shared_ptr<const Checkpoint> checkpoint,
                    std::span<const data::Transition> demos,
                    const AdaptConfig& cfg = {});

}  // namespace oda::meta
