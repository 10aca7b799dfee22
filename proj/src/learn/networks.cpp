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

#include "oda/learn/networks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "oda/common/error.hpp"

namespace oda::learn {
namespace {

std::vector<int> layer_sizes(int in, int hidden, int layers, int out) {
  std::vector<int> sizes{in};
  for (int i = 0; i < layers; ++i) sizes.push_back(hidden);
  sizes.push_back(out);
  return sizes;
}

Eigen::MatrixXd stack_with_latent(const Eigen::MatrixXd& top,
                                  const Eigen::VectorXd& z) {
  Eigen::MatrixXd x(top.rows() + z.size(), top.cols());
  x.topRows(top.rows()) = top;
  if (z.size() > 0) x.bottomRows(z.size()) = z.replicate(1, top.cols());
  return x;
}

void check_latent(const Eigen::VectorXd& z, int latent_dim) {
  if (z.size() != latent_dim) {
    throw ContractError("latent has dimension " + std::to_string(z.size()) +
                        ", expected " + std::to_string(latent_dim));
  }
}

double softplus(double x) {
  return x > 30.0 ? x : std::log1p(std::exp(x));
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

// ---------------------------------------------------------------------------
// Latent sampling

LatentSample sample_latent(const LatentPosterior& posterior, Rng& rng) {
  Eigen::VectorXd eps(posterior.mean.size());
  for (Eigen::Index i = 0; i < eps.size(); ++i) eps[i] = rng.normal();
  return sample_latent(posterior, eps);
}

LatentSample sample_latent(const LatentPosterior& posterior,
                           const Eigen::VectorXd& eps) {
  LatentSample s;
  s.eps = eps;
  s.z = posterior.mean.array() + posterior.var.array().sqrt() * eps.array();
  return s;
}

void latent_backward(const LatentPosterior& posterior,
                     const LatentSample& sample, const Eigen::VectorXd& d_z,
                     Eigen::VectorXd& d_mean, Eigen::VectorXd& d_var) {
  d_mean = d_z;
  d_var = (d_z.array() * sample.eps.array() /
           (2.0 * posterior.var.array().sqrt()))
              .matrix();
}

LatentPosterior product_of_gaussians(const Eigen::MatrixXd& means,
                                     const Eigen::MatrixXd& vars) {
  const Eigen::Index d = means.rows();
  Eigen::VectorXd precision = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd weighted = Eigen::VectorXd::Zero(d);
  for (Eigen::Index j = 0; j < means.cols(); ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      precision[i] += 1.0 / vars(i, j);
      weighted[i] += means(i, j) / vars(i, j);
    }
  }
  LatentPosterior p;
  p.var = precision.cwiseInverse();
  p.mean = (p.var.array() * weighted.array()).matrix();
  return p;
}

// ---------------------------------------------------------------------------
// Encoder

Encoder::Encoder(const NetworkConfig& cfg)
    : net_("encoder",
           layer_sizes(kContextFeatureDim, cfg.encoder_hidden,
                       cfg.hidden_layers, 2 * cfg.latent_dim)),
      latent_dim_(cfg.latent_dim),
      var_floor_(cfg.var_floor) {}

ParamSet Encoder::init(Rng& rng) const {
  ParamSet p;
  net_.init(p, rng);
  return p;
}

Encoder::Result Encoder::encode(const ParamSet& phi,
                                std::span<const data::Transition> context,
                                const sim::SimConfig& sim_cfg) const {
  if (context.empty()) throw ContractError("encode: empty context");
  Eigen::MatrixXd raw_x = context_features(context, sim_cfg);
  // Canonical column order: lexicographic on the feature vectors.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(raw_x.cols()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index r = 0; r < raw_x.rows(); ++r) {
      if (raw_x(r, a) != raw_x(r, b)) return raw_x(r, a) < raw_x(r, b);
    }
    return false;
  });
  Eigen::MatrixXd x(raw_x.rows(), raw_x.cols());
  for (std::size_t j = 0; j < order.size(); ++j) {
    x.col(static_cast<Eigen::Index>(j)) = raw_x.col(order[j]);
  }

  Result res;
  const Eigen::MatrixXd out = net_.forward(phi, x, &res.cache);
  const Eigen::Index d = latent_dim_;
  res.factor_mean = out.topRows(d);
  res.factor_var.resize(d, out.cols());
  res.var_slope.resize(d, out.cols());
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const double raw = out(d + i, j);
      res.factor_var(i, j) = softplus(raw) + var_floor_;
      res.var_slope(i, j) = sigmoid(raw);
    }
  }
  res.posterior = product_of_gaussians(res.factor_mean, res.factor_var);
  return res;
}

void Encoder::backward(ParamSet& phi, const Result& res,
                       const Eigen::VectorXd& d_mean,
                       const Eigen::VectorXd& d_var) const {
  const Eigen::Index d = latent_dim_;
  const Eigen::Index n = res.factor_mean.cols();
  const Eigen::VectorXd& pv = res.posterior.var;
  const Eigen::VectorXd& pm = res.posterior.mean;
  Eigen::MatrixXd d_out(2 * d, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const double prec = 1.0 / res.factor_var(i, j);
      // mean = var * sum(mu_j p_j), var = 1 / sum(p_j), p_j = 1 / var_j.
      const double d_mu = d_mean[i] * pv[i] * prec;
      const double d_prec = d_mean[i] * pv[i] * (res.factor_mean(i, j) - pm[i]) -
                            d_var[i] * pv[i] * pv[i];
      const double d_fvar = -d_prec * prec * prec;
      d_out(i, j) = d_mu;
      d_out(d + i, j) = d_fvar * res.var_slope(i, j);
    }
  }
  net_.backward(phi, res.cache, d_out);
}

// ---------------------------------------------------------------------------
// Actor

Actor::Actor(const NetworkConfig& cfg)
    : net_("actor",
           layer_sizes(static_cast<int>(sim::kObsDim) + cfg.latent_dim,
                       cfg.actor_hidden, cfg.hidden_layers,
                       2 * static_cast<int>(sim::kActDim))),
      latent_dim_(cfg.latent_dim),
      log_std_min_(cfg.log_std_min),
      log_std_max_(cfg.log_std_max) {}

ParamSet Actor::init(Rng& rng) const {
  ParamSet p;
  net_.init(p, rng);
  p.add("actor/log_std_offset",
        Eigen::MatrixXd::Constant(sim::kActDim, 1, -1.0));
  return p;
}

Actor::Output Actor::forward(const ParamSet& theta, const Eigen::MatrixXd& s,
                             const Eigen::VectorXd& z) const {
  check_latent(z, latent_dim_);
  if (s.rows() != static_cast<Eigen::Index>(sim::kObsDim)) {
    throw ContractError("actor: observation dimension mismatch");
  }
  Output o;
  const Eigen::MatrixXd out = net_.forward(theta, stack_with_latent(s, z), &o.cache);
  const Eigen::Index k = sim::kActDim;
  o.mean = out.topRows(k);
  Eigen::MatrixXd ls = out.bottomRows(k);
  ls.colwise() += theta.at("actor/log_std_offset").value.col(0);
  o.clamp_mask.resize(k, ls.cols());
  o.log_std.resize(k, ls.cols());
  for (Eigen::Index j = 0; j < ls.cols(); ++j) {
    for (Eigen::Index i = 0; i < k; ++i) {
      const double v = ls(i, j);
      const bool inside = v > log_std_min_ && v < log_std_max_;
      o.clamp_mask(i, j) = inside ? 1.0 : 0.0;
      o.log_std(i, j) = std::clamp(v, log_std_min_, log_std_max_);
    }
  }
  return o;
}

GaussianActionDist Actor::dist(const ParamSet& theta, const sim::ObsArray& obs,
                               const Eigen::VectorXd& z) const {
  const Output o = forward(theta, normalize_obs(obs), z);
  return {o.mean.col(0), o.log_std.col(0)};
}

sim::Action Actor::act(const ParamSet& theta, const sim::ObsArray& obs,
                       const Eigen::VectorXd& z, ActMode mode, Rng* rng,
                       const sim::SimConfig& sim_cfg) const {
  const GaussianActionDist d = dist(theta, obs, z);
  Eigen::VectorXd a = d.mean;
  if (mode == ActMode::kStochastic) {
    if (!rng) throw ContractError("stochastic action needs an rng");
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      a[i] += std::exp(d.log_std[i]) * rng->normal();
    }
  }
  a = a.cwiseMax(-1.0).cwiseMin(1.0);
  return denormalize_act(a, sim_cfg);
}

Eigen::MatrixXd Actor::sample(const Output& out, Rng& rng) const {
  Eigen::MatrixXd a = out.mean;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      a(i, j) += std::exp(out.log_std(i, j)) * rng.normal();
    }
  }
  return a.cwiseMax(-1.0).cwiseMin(1.0);
}

void Actor::backward(ParamSet& theta, const Output& out,
                     const Eigen::MatrixXd& d_mean,
                     const Eigen::MatrixXd& d_log_std) const {
  const Eigen::Index k = sim::kActDim;
  const Eigen::MatrixXd d_ls = d_log_std.cwiseProduct(out.clamp_mask);
  Eigen::MatrixXd d_out(2 * k, d_mean.cols());
  d_out.topRows(k) = d_mean;
  d_out.bottomRows(k) = d_ls;
  theta.at("actor/log_std_offset").grad.col(0) += d_ls.rowwise().sum();
  net_.backward(theta, out.cache, d_out);
}

Eigen::RowVectorXd gaussian_log_prob(const Eigen::MatrixXd& x,
                                     const Eigen::MatrixXd& mean,
                                     const Eigen::MatrixXd& log_std) {
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  const Eigen::ArrayXXd u = (x - mean).array() / log_std.array().exp();
  return (-0.5 * u.square() - log_std.array() - half_log_2pi)
      .colwise()
      .sum()
      .matrix();
}

// ---------------------------------------------------------------------------
// Critic

Critic::Critic(const NetworkConfig& cfg)
    : net_("critic",
           layer_sizes(static_cast<int>(sim::kObsDim + sim::kActDim) +
                           cfg.latent_dim,
                       cfg.critic_hidden, cfg.hidden_layers, 1)),
      latent_dim_(cfg.latent_dim) {}

ParamSet Critic::init(Rng& rng) const {
  ParamSet p;
  net_.init(p, rng);
  return p;
}

Eigen::RowVectorXd Critic::value(const ParamSet& psi, const Eigen::MatrixXd& s,
                                 const Eigen::MatrixXd& a,
                                 const Eigen::VectorXd& z,
                                 Mlp::Cache* cache) const {
  check_latent(z, latent_dim_);
  if (s.rows() != static_cast<Eigen::Index>(sim::kObsDim) ||
      a.rows() != static_cast<Eigen::Index>(sim::kActDim) ||
      s.cols() != a.cols()) {
    throw ContractError("critic: input dimension mismatch");
  }
  Eigen::MatrixXd sa(s.rows() + a.rows(), s.cols());
  sa << s, a;
  return net_.forward(psi, stack_with_latent(sa, z), cache).row(0);
}

double Critic::value(const ParamSet& psi, const sim::ObsArray& s,
                     const sim::ActArray& a, const Eigen::VectorXd& z) const {
  return value(psi, normalize_obs(s), normalize_act(a), z)[0];
}

Eigen::VectorXd Critic::backward(ParamSet& psi, const Mlp::Cache& cache,
                                 const Eigen::RowVectorXd& d_value) const {
  return backward_inputs(psi, cache, d_value)
      .bottomRows(latent_dim_)
      .rowwise()
      .sum();
}

Eigen::MatrixXd Critic::backward_inputs(ParamSet& psi, const Mlp::Cache& cache,
                                        const Eigen::RowVectorXd& d_value) const {
  return net_.backward(psi, cache, d_value);
}

}  // namespace oda::learn
