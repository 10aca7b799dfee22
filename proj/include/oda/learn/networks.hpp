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
#include <span>

#include "oda/common/rng.hpp"
#include "oda/data/transition.hpp"
#include "oda/learn/features.hpp"
#include "oda/learn/mlp.hpp"
#include "oda/learn/param_set.hpp"
#include "oda/sim/env.hpp"

namespace oda::learn {

struct NetworkConfig {
  int latent_dim = 5;
  int encoder_hidden = 64;
  int actor_hidden = 128;
  int critic_hidden = 128;
  int hidden_layers = 2;
  double log_std_min = -5.0;
  double log_std_max = 0.0;
  double var_floor = 1e-6;

  bool operator==(const NetworkConfig&) const = default;
};

// Diagonal Gaussian belief over the task variable.
struct LatentPosterior {
  Eigen::VectorXd mean;
  Eigen::VectorXd var;
};

struct LatentSample {
  Eigen::VectorXd z;
  Eigen::VectorXd eps;  // standard normal draw used for z
};

// z = mean + sqrt(var) * eps with eps drawn from `rng`.
LatentSample sample_latent(const LatentPosterior& posterior, Rng& rng);
LatentSample sample_latent(const LatentPosterior& posterior,
                           const Eigen::VectorXd& eps);
// Pulls dL/dz back to the posterior parameters (reparameterization path).
void latent_backward(const LatentPosterior& posterior,
                     const LatentSample& sample, const Eigen::VectorXd& d_z,
                     Eigen::VectorXd& d_mean, Eigen::VectorXd& d_var);

// Per-transition factor network pooled by a product of Gaussians.
class Encoder {
 public:
  explicit Encoder(const NetworkConfig& cfg);

  ParamSet init(Rng& rng) const;

  struct Result {
    LatentPosterior posterior;
    // Internal state for backward().
    Eigen::MatrixXd factor_mean;   // d_z x N
    Eigen::MatrixXd factor_var;    // d_z x N
    Eigen::MatrixXd var_slope;     // d var_i / d raw_i
    Mlp::Cache cache;
  };

  // Context transitions are put into a canonical order first, so the
  // result does not depend on their order at all.
  Result encode(const ParamSet& phi, std::span<const data::Transition> context,
                const sim::SimConfig& sim_cfg = {}) const;

  // Accumulates dL/dphi given dL/dmean and dL/dvar of the posterior.
  void backward(ParamSet& phi, const Result& res, const Eigen::VectorXd& d_mean,
                const Eigen::VectorXd& d_var) const;

  int latent_dim() const { return latent_dim_; }

 private:
  Mlp net_;
  int latent_dim_;
  double var_floor_;
};

// Product of diagonal Gaussian factors (columns), summed in column order.
LatentPosterior product_of_gaussians(const Eigen::MatrixXd& means,
                                     const Eigen::MatrixXd& vars);

struct GaussianActionDist {
  Eigen::Vector3d mean;     // normalized action units
  Eigen::Vector3d log_std;  // within the configured clamp
};

enum class ActMode { kStochastic, kMean };

// pi(a | s, z): network on [s; z] producing a mean and a log-std
// correction; a learned state-independent offset is added to the latter
// before clamping.
class Actor {
 public:
  explicit Actor(const NetworkConfig& cfg);

  ParamSet init(Rng& rng) const;

  struct Output {
    Eigen::MatrixXd mean;     // 3 x B
    Eigen::MatrixXd log_std;  // 3 x B, clamped
    Eigen::MatrixXd clamp_mask;  // 1 where the clamp is inactive
    Mlp::Cache cache;
  };

  Output forward(const ParamSet& theta, const Eigen::MatrixXd& s,
                 const Eigen::VectorXd& z) const;

  GaussianActionDist dist(const ParamSet& theta, const sim::ObsArray& obs,
                          const Eigen::VectorXd& z) const;

  // Mean mode returns the clipped mean; stochastic mode samples then clips.
  sim::Action act(const ParamSet& theta, const sim::ObsArray& obs,
                  const Eigen::VectorXd& z, ActMode mode, Rng* rng,
                  const sim::SimConfig& sim_cfg = {}) const;

  // Clipped samples, one per column of `out`.
  Eigen::MatrixXd sample(const Output& out, Rng& rng) const;

  // Accumulates theta gradients given dL/dmean and dL/dlog_std.
  void backward(ParamSet& theta, const Output& out,
                const Eigen::MatrixXd& d_mean,
                const Eigen::MatrixXd& d_log_std) const;

  int latent_dim() const { return latent_dim_; }

 private:
  Mlp net_;
  int latent_dim_;
  double log_std_min_;
  double log_std_max_;
};

// Diagonal Gaussian log-density, one value per column.
Eigen::RowVectorXd gaussian_log_prob(const Eigen::MatrixXd& x,
                                     const Eigen::MatrixXd& mean,
                                     const Eigen::MatrixXd& log_std);

// Q(s, a, z).
class Critic {
 public:
  explicit Critic(const NetworkConfig& cfg);

  ParamSet init(Rng& rng) const;

  Eigen::RowVectorXd value(const ParamSet& psi, const Eigen::MatrixXd& s,
                           const Eigen::MatrixXd& a, const Eigen::VectorXd& z,
                           Mlp::Cache* cache = nullptr) const;
  double value(const ParamSet& psi, const sim::ObsArray& s,
               const sim::ActArray& a, const Eigen::VectorXd& z) const;

  // Accumulates psi gradients; returns dL/dz summed over the batch.
  Eigen::VectorXd backward(ParamSet& psi, const Mlp::Cache& cache,
                           const Eigen::RowVectorXd& d_value) const;
  // Same, but returns dL/d[s; a; z] per sample.
  Eigen::MatrixXd backward_inputs(ParamSet& psi, const Mlp::Cache& cache,
                                  const Eigen::RowVectorXd& d_value) const;

  int latent_dim() const { return latent_dim_; }

 private:
  Mlp net_;
  int latent_dim_;
};

struct Model {
  explicit Model(const NetworkConfig& cfg)
      : config(cfg), encoder(cfg), actor(cfg), critic(cfg) {}
  NetworkConfig config;
  Encoder encoder;
  Actor actor;
  Critic critic;
};

}  // namespace oda::learn
