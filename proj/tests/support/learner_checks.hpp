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

// Checks on the learners shared by the unit tests and the acceptance
// runner. Each returns a measured quantity; callers decide the verdict.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "fixtures.hpp"
#include "gradcheck.hpp"
#include "oda/learn/losses.hpp"
#include "oda/meta/agent.hpp"

namespace oda::testing {

inline learn::NetworkConfig small_config() {
  learn::NetworkConfig c;
  c.latent_dim = 3;
  c.encoder_hidden = 12;
  c.actor_hidden = 16;
  c.critic_hidden = 16;
  return c;
}

// Moves every parameter away from the initializer so a check is not
// dominated by near-linear behavior around small output weights.
inline void jitter(learn::ParamSet& p, Rng& rng, double scale) {
  Eigen::VectorXd v = p.flat_values();
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] += scale * rng.normal();
  p.set_flat_values(v);
}

struct CheckPoint {
  learn::ParamSet phi, theta, psi, psi_target;
  std::vector<data::Transition> context;
  std::vector<data::Transition> rows;
  learn::Batch batch;
  Eigen::VectorXd eps;
};

inline CheckPoint make_point(const learn::Model& m, std::uint64_t seed) {
  Rng rng(seed);
  CheckPoint p;
  p.phi = m.encoder.init(rng);
  p.theta = m.actor.init(rng);
  p.psi = m.critic.init(rng);
  p.psi_target = m.critic.init(rng);
  jitter(p.phi, rng, 0.2);
  jitter(p.theta, rng, 0.2);
  jitter(p.psi, rng, 0.2);
  jitter(p.psi_target, rng, 0.2);
  p.context = random_transitions(rng, 6, 0.0);
  p.rows = random_transitions(rng, 8);
  p.batch = learn::make_batch(p.rows);
  p.eps.resize(m.config.latent_dim);
  for (Eigen::Index i = 0; i < p.eps.size(); ++i) p.eps[i] = rng.normal();
  return p;
}

inline Eigen::VectorXd latent_of(const learn::Model& m, const CheckPoint& p) {
  return learn::sample_latent(m.encoder.encode(p.phi, p.context).posterior,
                              p.eps)
      .z;
}

// Relative error of the analytic psi-gradient of L_critic.
inline double gradcheck_critic_psi(const learn::Model& m, std::uint64_t seed,
                                   learn::TargetMode mode, double h = 1e-5) {
  CheckPoint p = make_point(m, seed);
  const Eigen::VectorXd z = latent_of(m, p);
  Rng rng(seed);
  p.psi.zero_grad();
  learn::critic_loss(m, p.batch, z, p.psi, p.psi_target, 0.99, mode, &p.theta,
                     &rng);
  const Eigen::VectorXd analytic = p.psi.flat_grads();
  const Eigen::VectorXd numeric = numeric_gradient(
      p.psi,
      [&] {
        learn::ParamSet scratch = p.psi;
        Rng same(seed);
        return learn::critic_loss(m, p.batch, z, scratch, p.psi_target, 0.99,
                                  mode, &p.theta, &same)
            .loss;
      },
      h);
  return relative_error(analytic, numeric);
}

// phi reaches L_critic through the reparameterized z in Q(s, a, z); the
// bootstrap target is held at its value for the unperturbed phi.
inline double gradcheck_critic_phi(const learn::Model& m, std::uint64_t seed,
                                   double h = 1e-5) {
  CheckPoint p = make_point(m, seed);
  const learn::Encoder::Result enc = m.encoder.encode(p.phi, p.context);
  const learn::LatentSample zs = learn::sample_latent(enc.posterior, p.eps);
  learn::ParamSet psi = p.psi;
  const learn::CriticLossResult res =
      learn::critic_loss(m, p.batch, zs.z, psi, p.psi_target, 0.99,
                         learn::TargetMode::kDatasetAction);
  Eigen::VectorXd d_mean, d_var;
  learn::latent_backward(enc.posterior, zs, res.d_z, d_mean, d_var);
  p.phi.zero_grad();
  m.encoder.backward(p.phi, enc, d_mean, d_var);
  const Eigen::VectorXd analytic = p.phi.flat_grads();
  const Eigen::RowVectorXd y = res.target;
  const Eigen::VectorXd numeric = numeric_gradient(
      p.phi,
      [&] {
        const Eigen::RowVectorXd q =
            m.critic.value(p.psi, p.batch.s, p.batch.a, latent_of(m, p));
        return (q - y).squaredNorm() / static_cast<double>(q.size());
      },
      h);
  return relative_error(analytic, numeric);
}

// mean_b -w_b log N(a_b; mu, sigma), evaluated independently of the
// library's log-density.
inline double weighted_nll(const learn::Model& m, const learn::ParamSet& theta,
                           const learn::Batch& b, const Eigen::VectorXd& z,
                           const Eigen::RowVectorXd& w) {
  const learn::Actor::Output out = m.actor.forward(theta, b.s, z);
  double total = 0.0;
  for (Eigen::Index j = 0; j < out.mean.cols(); ++j) {
    for (Eigen::Index i = 0; i < out.mean.rows(); ++i) {
      const double sd = std::exp(out.log_std(i, j));
      const double u = (b.a(i, j) - out.mean(i, j)) / sd;
      total -= w[j] * (-0.5 * u * u - std::log(sd) -
                       0.5 * std::log(2.0 * std::numbers::pi));
    }
  }
  return total / static_cast<double>(out.mean.cols());
}

// Relative error of the theta-gradient of L_actor with the AWAC weights
// frozen at their value for the unperturbed theta.
inline double gradcheck_actor_theta(const learn::Model& m, std::uint64_t seed,
                                    double lambda = 0.3, double h = 1e-5) {
  CheckPoint p = make_point(m, seed);
  const Eigen::VectorXd z = latent_of(m, p);
  Rng rng(seed);
  const Eigen::RowVectorXd adv =
      learn::advantage(m, p.psi, p.theta, p.batch.s, p.batch.a, z, 4, rng);
  p.theta.zero_grad();
  const learn::ActorLossResult res =
      learn::actor_loss(m, p.batch, z, p.theta, adv, lambda, 20.0);
  const Eigen::VectorXd analytic = p.theta.flat_grads();
  const Eigen::RowVectorXd w = res.weights;
  const Eigen::VectorXd numeric = numeric_gradient(
      p.theta, [&] { return weighted_nll(m, p.theta, p.batch, z, w); }, h);
  return relative_error(analytic, numeric);
}

inline double gradcheck_kl_phi(const learn::Model& m, std::uint64_t seed,
                               double h = 1e-5) {
  CheckPoint p = make_point(m, seed);
  const learn::Encoder::Result enc = m.encoder.encode(p.phi, p.context);
  const learn::KlLossResult kl = learn::kl_loss(enc.posterior, 0.7);
  p.phi.zero_grad();
  m.encoder.backward(p.phi, enc, kl.d_mean, kl.d_var);
  const Eigen::VectorXd analytic = p.phi.flat_grads();
  const Eigen::VectorXd numeric = numeric_gradient(
      p.phi,
      [&] {
        return learn::kl_loss(m.encoder.encode(p.phi, p.context).posterior, 0.7)
            .loss;
      },
      h);
  return relative_error(analytic, numeric);
}

// Largest absolute deviation over the closed-form cases.
struct ClosedForms {
  double kl_standard_normal = 0.0;  // KL(N(0, I) || N(0, I))
  double identical_factors = 0.0;   // two equal factors: mean kept, var halved
  double weight_at_zero = 0.0;      // w(A = 0) - 1
  double gamma_zero = 0.0;          // y - r with gamma = 0
  double terminal = 0.0;            // y - r on terminal rows
  double worst() const {
    return std::max({kl_standard_normal, identical_factors, weight_at_zero,
                     gamma_zero, terminal});
  }
};

inline ClosedForms closed_form_checks(std::uint64_t seed = 1) {
  ClosedForms c;
  const learn::Model m(small_config());
  Rng rng(seed);

  for (int d : {1, 3, 8}) {
    const learn::LatentPosterior prior{Eigen::VectorXd::Zero(d),
                                       Eigen::VectorXd::Ones(d)};
    c.kl_standard_normal =
        std::max(c.kl_standard_normal, std::abs(learn::kl_loss(prior, 1.0).loss));
  }

  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd means(4, 2), vars(4, 2);
    for (int i = 0; i < 4; ++i) {
      means(i, 0) = means(i, 1) = rng.uniform(-3, 3);
      vars(i, 0) = vars(i, 1) = rng.uniform(0.01, 4.0);
    }
    const learn::LatentPosterior post = learn::product_of_gaussians(means, vars);
    c.identical_factors = std::max(
        {c.identical_factors, (post.mean - means.col(0)).cwiseAbs().maxCoeff(),
         (post.var - 0.5 * vars.col(0)).cwiseAbs().maxCoeff()});
  }

  const Eigen::RowVectorXd ones_w =
      learn::awac_weights(Eigen::RowVectorXd::Zero(16), 0.3, 20.0);
  c.weight_at_zero = (ones_w.array() - 1.0).abs().maxCoeff();

  const CheckPoint p = make_point(m, seed + 7);
  const Eigen::VectorXd z = latent_of(m, p);
  learn::ParamSet psi = p.psi;
  const learn::CriticLossResult g0 =
      learn::critic_loss(m, p.batch, z, psi, p.psi_target, 0.0,
                         learn::TargetMode::kDatasetAction);
  c.gamma_zero = (g0.target - p.batch.r).cwiseAbs().maxCoeff();

  const learn::CriticLossResult g99 =
      learn::critic_loss(m, p.batch, z, psi, p.psi_target, 0.99,
                         learn::TargetMode::kDatasetAction);
  for (Eigen::Index j = 0; j < p.batch.size(); ++j) {
    if (p.batch.done[j] == 1.0) {
      c.terminal = std::max(c.terminal, std::abs(g99.target[j] - p.batch.r[j]));
    }
  }
  return c;
}

struct PermutationResult {
  int contexts = 0;
  int permutations = 0;  // total shuffled encodings
  int mismatches = 0;
};

// Encodes each context in several random orders and compares the
// posterior bit for bit.
inline PermutationResult permutation_invariance(int n_contexts, int n_perms,
                                                std::uint64_t seed = 3) {
  const learn::Model m(small_config());
  Rng rng(seed);
  PermutationResult r;
  const learn::ParamSet phi = m.encoder.init(rng);
  for (int c = 0; c < n_contexts; ++c) {
    std::vector<data::Transition> ctx =
        random_transitions(rng, 3 + static_cast<int>(rng.uniform_index(30)));
    const learn::LatentPosterior ref = m.encoder.encode(phi, ctx).posterior;
    for (int k = 0; k < n_perms; ++k) {
      for (std::size_t i = ctx.size(); i > 1; --i) {
        std::swap(ctx[i - 1], ctx[rng.uniform_index(i)]);
      }
      const learn::LatentPosterior got = m.encoder.encode(phi, ctx).posterior;
      if (!(got.mean == ref.mean) || !(got.var == ref.var)) ++r.mismatches;
      ++r.permutations;
    }
    ++r.contexts;
  }
  return r;
}

struct RoutingResult {
  // Max |component| of the phi-gradient contributed by L_actor.
  double actor_phi = 0.0;
  // Max |component| of the theta- and psi-gradients contributed by L_KL.
  double kl_theta = 0.0;
  double kl_psi = 0.0;
  // Relative error of the actor theta-gradient against differences with
  // w frozen, and against differences with w recomputed.
  double frozen_w_error = 0.0;
  double live_w_error = 0.0;
};

// Replays one update's random draws, isolating each loss's contribution
// to each parameter group of the full update.
inline RoutingResult gradient_routing(std::uint64_t seed = 5) {
  const learn::Model m(small_config());
  RoutingResult out;
  for (int k = 0; k < 4; ++k) {
    CheckPoint p = make_point(m, seed + k);
    meta::UpdateConfig cfg;
    cfg.beta = 0.5;
    meta::AgentState full;
    full.phi = p.phi;
    full.theta = p.theta;
    full.psi = p.psi;
    full.psi_target = p.psi_target;
    full.phi.zero_grad();
    full.theta.zero_grad();
    full.psi.zero_grad();
    Rng rng(seed * 31 + k);
    meta::accumulate_task_losses(m, full, p.context, p.rows, cfg, rng);

    // Same draws, without the actor loss.
    Rng replay(seed * 31 + k);
    learn::ParamSet phi = p.phi, theta = p.theta, psi = p.psi;
    phi.zero_grad();
    theta.zero_grad();
    psi.zero_grad();
    const learn::Encoder::Result enc = m.encoder.encode(phi, p.context);
    const learn::LatentSample zs = learn::sample_latent(enc.posterior, replay);
    const learn::CriticLossResult critic =
        learn::critic_loss(m, p.batch, zs.z, psi, p.psi_target, cfg.gamma,
                           cfg.target_mode, &theta, &replay);
    const Eigen::RowVectorXd adv = learn::advantage(
        m, psi, theta, p.batch.s, p.batch.a, zs.z, cfg.n_action_samples, replay);
    learn::ParamSet theta_actor = p.theta;
    theta_actor.zero_grad();
    learn::actor_loss(m, p.batch, zs.z, theta_actor, adv, cfg.lambda_temp,
                      cfg.weight_clip);
    const learn::KlLossResult kl = learn::kl_loss(enc.posterior, cfg.beta);
    Eigen::VectorXd d_mean, d_var;
    learn::latent_backward(enc.posterior, zs, critic.d_z, d_mean, d_var);
    d_mean += kl.d_mean;
    d_var += kl.d_var;
    m.encoder.backward(phi, enc, d_mean, d_var);

    out.actor_phi = std::max(
        out.actor_phi,
        (full.phi.flat_grads() - phi.flat_grads()).cwiseAbs().maxCoeff());
    // theta receives exactly the actor loss, psi exactly the critic loss;
    // any KL contribution would show up as a difference.
    out.kl_theta = std::max(
        out.kl_theta,
        (full.theta.flat_grads() - theta_actor.flat_grads()).cwiseAbs().maxCoeff());
    out.kl_psi = std::max(
        out.kl_psi,
        (full.psi.flat_grads() - psi.flat_grads()).cwiseAbs().maxCoeff());

    // L_KL as a function of theta and psi: perturbations leave it
    // unchanged because it reads only the posterior.
    learn::ParamSet t2 = p.theta, s2 = p.psi;
    const double kl0 =
        learn::kl_loss(m.encoder.encode(p.phi, p.context).posterior, cfg.beta).loss;
    const Eigen::VectorXd dt =
        numeric_gradient(t2, [&] { return kl0; });
    const Eigen::VectorXd ds =
        numeric_gradient(s2, [&] { return kl0; });
    out.kl_theta = std::max(out.kl_theta, dt.cwiseAbs().maxCoeff());
    out.kl_psi = std::max(out.kl_psi, ds.cwiseAbs().maxCoeff());
  }

  // w is a constant of the actor objective: the analytic gradient agrees
  // with differences taken with w frozen, not with w recomputed.
  const CheckPoint p = make_point(m, seed + 100);
  const Eigen::VectorXd z = latent_of(m, p);
  const int n_samples = 4;
  const double lambda = 0.05;
  Rng rng(seed);
  const Eigen::RowVectorXd adv = learn::advantage(
      m, p.psi, p.theta, p.batch.s, p.batch.a, z, n_samples, rng);
  learn::ParamSet theta = p.theta;
  theta.zero_grad();
  const learn::ActorLossResult res =
      learn::actor_loss(m, p.batch, z, theta, adv, lambda, 20.0);
  const Eigen::VectorXd analytic = theta.flat_grads();
  learn::ParamSet probe = p.theta;
  const Eigen::VectorXd frozen = numeric_gradient(
      probe, [&] { return weighted_nll(m, probe, p.batch, z, res.weights); });
  const Eigen::VectorXd live = numeric_gradient(probe, [&] {
    Rng same(seed);
    const Eigen::RowVectorXd a = learn::advantage(
        m, p.psi, probe, p.batch.s, p.batch.a, z, n_samples, same);
    return weighted_nll(m, probe, p.batch, z,
                        learn::awac_weights(a, lambda, 20.0));
  });
  out.frozen_w_error = relative_error(analytic, frozen);
  out.live_w_error = relative_error(analytic, live);
  return out;
}

}  // namespace oda::testing
