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

#include "oda/baselines/baselines.hpp"

#include <cmath>
#include <sstream>

#include "oda/common/error.hpp"
#include "oda/common/io.hpp"
#include "oda/learn/features.hpp"
#include "oda/meta/adapt.hpp"
#include "oda/meta/evaluate.hpp"

namespace oda::baselines {
namespace {

constexpr int kPooledTask = -1;

std::string format_network(const learn::NetworkConfig& n) {
  std::ostringstream s;
  s << "net.actor_hidden = " << n.actor_hidden << "\n"
    << "net.critic_hidden = " << n.critic_hidden << "\n"
    << "net.hidden_layers = " << n.hidden_layers << "\n"
    << "net.log_std_max = " << format_double(n.log_std_max) << "\n"
    << "net.log_std_min = " << format_double(n.log_std_min) << "\n";
  return s.str();
}

meta::Checkpoint empty_checkpoint(const std::string& kind,
                                  learn::NetworkConfig network,
                                  std::string snapshot, std::uint64_t seed) {
  network.latent_dim = 0;
  meta::Checkpoint ck;
  ck.kind = kind;
  ck.network = network;
  ck.config_snapshot = std::move(snapshot);
  ck.config_hash = meta::snapshot_hash(ck.config_snapshot);
  ck.agent = meta::init_agent(ck.model(), derive_seed(seed, "init"));
  return ck;
}

}  // namespace

meta::MetaTrainResult awac_train(std::span<const sim::TaskSpec> train_tasks,
                                 const data::Buffer& demos,
                                 const data::Buffer& offline,
                                 const meta::MetaTrainConfig& cfg,
                                 std::ostream* log_out,
                                 std::string config_snapshot) {
  if (train_tasks.empty()) throw ContractError("awac_train: no tasks");
  data::Buffer pooled;
  for (const sim::TaskSpec& t : train_tasks) {
    for (const data::Buffer* b : {&demos, &offline}) {
      for (std::size_t i : b->indices(t.task_id)) {
        data::Transition tr = (*b)[i];
        tr.task_id = kPooledTask;
        pooled.append(tr);
      }
    }
  }
  if (pooled.size() == 0) throw ContractError("awac_train: no data");

  meta::MetaTrainConfig c = cfg;
  c.network.latent_dim = 0;
  meta::MetaTrainResult res;
  res.checkpoint = empty_checkpoint(
      "awac", c.network,
      config_snapshot.empty() ? meta::describe(c) : std::move(config_snapshot),
      c.seed);
  const learn::Model model = res.checkpoint.model();
  meta::AgentState& agent = res.checkpoint.agent;

  if (log_out) meta::write_train_log_header(*log_out);
  Rng rng(derive_seed(c.seed, "awac-train"));
  for (long it = 0; it < c.iterations; ++it) {
    meta::LossStats sum;
    for (std::size_t k = 0; k < train_tasks.size(); ++k) {
      const auto batch = data::sample_batch(
          pooled, kPooledTask, static_cast<std::size_t>(c.batch_size), rng);
      try {
        sum += meta::accumulate_task_losses(model, agent, {}, batch, c.update,
                                            rng);
      } catch (const DivergenceError& e) {
        throw DivergenceError("awac_train iteration " + std::to_string(it) +
                              ": " + e.what());
      }
    }
    meta::apply_updates(agent, c.update);
    if (c.log_every > 0 && (it % c.log_every == 0 || it + 1 == c.iterations)) {
      sum /= static_cast<double>(train_tasks.size());
      res.log.push_back({it, sum});
      if (log_out) meta::write_train_log_row(*log_out, res.log.back());
    }
  }
  return res;
}

meta::FinetuneResult awac_finetune(const BaselineCheckpoint& checkpoint,
                                   sim::Env& env,
                                   std::span<const data::Transition> demos,
                                   const meta::FinetuneConfig& cfg) {
  if (checkpoint.network.latent_dim != 0) {
    throw ContractError("awac_finetune: checkpoint has a latent input");
  }
  const meta::AdaptedPolicy policy =
      meta::adapt(std::make_shared<const meta::Checkpoint>(checkpoint), {});
  return meta::finetune(policy, env, demos, cfg);
}

std::string describe(const BcConfig& cfg) {
  std::ostringstream s;
  s << "bc.batch_size = " << cfg.batch_size << "\n"
    << "bc.iterations = " << cfg.iterations << "\n"
    << "bc.lr = " << format_double(cfg.lr) << "\n"
    << "bc.seed = " << cfg.seed << "\n"
    << format_network(cfg.network);
  return s.str();
}

BaselineCheckpoint bc_train(std::span<const data::Transition> demos,
                            const BcConfig& cfg, std::vector<double>* loss_log,
                            std::string config_snapshot) {
  if (demos.empty()) throw ContractError("bc_train: no demonstrations");
  if (cfg.iterations < 0 || cfg.batch_size < 0) {
    throw ContractError("bc_train: bad iteration/batch settings");
  }
  BaselineCheckpoint ck = empty_checkpoint(
      "bc", cfg.network,
      config_snapshot.empty() ? describe(cfg) : std::move(config_snapshot),
      cfg.seed);
  const learn::Model model = ck.model();
  meta::AgentState& agent = ck.agent;

  const learn::Batch full = learn::make_batch(demos);
  const Eigen::VectorXd no_z;
  Rng rng(derive_seed(cfg.seed, "bc-train"));
  learn::AdamConfig adam;
  for (long it = 0; it < cfg.iterations; ++it) {
    double loss = 0.0;
    if (cfg.batch_size == 0) {
      loss = learn::weighted_log_likelihood_loss(
                 model, full, no_z, agent.theta,
                 Eigen::RowVectorXd::Ones(full.size()))
                 .loss;
    } else {
      std::vector<data::Transition> rows;
      rows.reserve(static_cast<std::size_t>(cfg.batch_size));
      for (int i = 0; i < cfg.batch_size; ++i) {
        rows.push_back(demos[rng.uniform_index(demos.size())]);
      }
      const learn::Batch b = learn::make_batch(rows);
      loss = learn::weighted_log_likelihood_loss(
                 model, b, no_z, agent.theta, Eigen::RowVectorXd::Ones(b.size()))
                 .loss;
    }
    if (!std::isfinite(loss)) {
      throw DivergenceError("bc_train iteration " + std::to_string(it) +
                            ": non-finite loss");
    }
    if (loss_log) loss_log->push_back(loss);
    learn::apply_update(agent.theta, agent.adam_theta, cfg.lr, adam);
    agent.theta.zero_grad();
    ++agent.iteration;
  }
  return ck;
}

std::string describe(const DdpgConfig& cfg) {
  std::ostringstream s;
  s << "ddpg.action_penalty = " << format_double(cfg.action_penalty) << "\n"
    << "ddpg.batch_size = " << cfg.batch_size << "\n"
    << "ddpg.check_every = " << cfg.check_every << "\n"
    << "ddpg.episode_budget = " << cfg.episode_budget << "\n"
    << "ddpg.exploration_noise = " << format_double(cfg.exploration_noise)
    << "\n"
    << "ddpg.gamma = " << format_double(cfg.gamma) << "\n"
    << "ddpg.lr_actor = " << format_double(cfg.lr_actor) << "\n"
    << "ddpg.lr_critic = " << format_double(cfg.lr_critic) << "\n"
    << "ddpg.n_eval = " << cfg.n_eval << "\n"
    << "ddpg.polyak = " << format_double(cfg.polyak) << "\n"
    << "ddpg.seed = " << cfg.seed << "\n"
    << "ddpg.threshold = " << format_double(cfg.threshold) << "\n"
    << "ddpg.updates_per_episode = " << cfg.updates_per_episode << "\n"
    << format_network(cfg.network);
  return s.str();
}

namespace {

// Deterministic actor: the clipped Gaussian mean, plus optional noise.
class DeterministicPolicy : public data::Policy {
 public:
  DeterministicPolicy(const learn::Model& model, const learn::ParamSet& theta,
                      double noise, const sim::SimConfig& sim_cfg)
      : model_(model), theta_(theta), noise_(noise), sim_cfg_(sim_cfg) {}

  void begin_episode(std::uint64_t seed) override {
    rng_ = Rng(derive_seed(seed, "exploration"));
  }

  sim::Action act(const sim::Observation& obs) override {
    Eigen::VectorXd a = model_.actor.dist(theta_, obs.to_array(), {}).mean;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (noise_ > 0.0) a[i] += noise_ * rng_.normal();
    }
    a = a.cwiseMax(-1.0).cwiseMin(1.0);
    return learn::denormalize_act(a, sim_cfg_);
  }

 private:
  const learn::Model& model_;
  const learn::ParamSet& theta_;
  double noise_;
  sim::SimConfig sim_cfg_;
  Rng rng_;
};

}  // namespace

DdpgResult ddpgfd_train(sim::Env& env, std::span<const data::Transition> demos,
                        const DdpgConfig& cfg, std::string config_snapshot) {
  if (demos.empty()) throw ContractError("ddpgfd_train: no demonstrations");
  if (cfg.episode_budget < 0 || cfg.check_every < 1 || cfg.n_eval < 1 ||
      cfg.batch_size < 1 || cfg.updates_per_episode < 0) {
    throw ContractError("ddpgfd_train: bad budget/check/batch settings");
  }
  const int task_id = env.task().task_id;
  DdpgResult res;
  res.checkpoint = empty_checkpoint(
      "ddpgfd", cfg.network,
      config_snapshot.empty() ? describe(cfg) : std::move(config_snapshot),
      cfg.seed);
  const learn::Model model = res.checkpoint.model();
  meta::AgentState& agent = res.checkpoint.agent;
  learn::ParamSet theta_target = agent.theta;
  const Eigen::VectorXd no_z;
  const learn::AdamConfig adam;

  data::Buffer replay;
  for (data::Transition t : demos) {
    t.task_id = task_id;
    replay.append(t);
  }

  Rng rng(derive_seed(cfg.seed, "ddpg-updates"));
  const std::uint64_t rollout_seed = derive_seed(cfg.seed, "rollout");
  const std::uint64_t eval_seed = derive_seed(cfg.seed, "solves-task");
  int n_checks = 0;

  for (int ep = 1; ep <= cfg.episode_budget; ++ep) {
    DeterministicPolicy explore(model, agent.theta, cfg.exploration_noise,
                                env.config());
    const data::Episode episode = data::run_episode(
        env, explore, derive_seed(rollout_seed, static_cast<std::uint64_t>(ep)),
        data::Source::kRl);
    replay.append(episode);
    const int length = static_cast<int>(episode.transitions.size());
    res.env_steps += length;
    res.curve.push_back({ep, episode.success, length, res.env_steps});
    res.episodes_used = ep;

    for (int u = 0; u < cfg.updates_per_episode; ++u) {
      const learn::Batch b = learn::make_batch(data::sample_batch(
          replay, task_id, static_cast<std::size_t>(cfg.batch_size), rng));
      const double n = static_cast<double>(b.size());

      // Critic: y = r + gamma (1 - done) Q'(s', mu'(s')).
      const learn::Actor::Output next =
          model.actor.forward(theta_target, b.s_next, no_z);
      const Eigen::MatrixXd a_next = next.mean.cwiseMax(-1.0).cwiseMin(1.0);
      const Eigen::RowVectorXd q_next =
          model.critic.value(agent.psi_target, b.s_next, a_next, no_z);
      Eigen::RowVectorXd y(b.size());
      for (Eigen::Index j = 0; j < b.size(); ++j) {
        y[j] = b.done[j] != 0.0 ? b.r[j] : b.r[j] + cfg.gamma * q_next[j];
      }
      learn::Mlp::Cache cache;
      const Eigen::RowVectorXd q =
          model.critic.value(agent.psi, b.s, b.a, no_z, &cache);
      const Eigen::RowVectorXd err = q - y;
      model.critic.backward(agent.psi, cache, (2.0 / n) * err);

      // Actor: maximize Q(s, mu(s)) with a penalty keeping mu in bounds.
      const learn::Actor::Output out = model.actor.forward(agent.theta, b.s, no_z);
      learn::Mlp::Cache qc;
      model.critic.value(agent.psi, b.s, out.mean, no_z, &qc);
      learn::ParamSet scratch = agent.psi;
      const Eigen::MatrixXd d_in = model.critic.backward_inputs(
          scratch, qc, Eigen::RowVectorXd::Constant(b.size(), -1.0 / n));
      Eigen::MatrixXd d_mean =
          d_in.middleRows(sim::kObsDim, sim::kActDim);
      const Eigen::ArrayXXd excess =
          (out.mean.array().abs() - 1.0).max(0.0) * out.mean.array().sign();
      d_mean += (2.0 * cfg.action_penalty / n * excess).matrix();
      model.actor.backward(agent.theta, out, d_mean,
                           Eigen::MatrixXd::Zero(out.log_std.rows(),
                                                 out.log_std.cols()));

      if (!std::isfinite(err.squaredNorm())) {
        throw DivergenceError("ddpgfd_train episode " + std::to_string(ep) +
                              ": non-finite critic loss");
      }
      learn::apply_update(agent.psi, agent.adam_psi, cfg.lr_critic, adam);
      learn::apply_update(agent.theta, agent.adam_theta, cfg.lr_actor, adam);
      agent.psi.zero_grad();
      agent.theta.zero_grad();
      learn::polyak_update(agent.psi_target, agent.psi, cfg.polyak);
      learn::polyak_update(theta_target, agent.theta, cfg.polyak);
      ++agent.iteration;
    }

    if (ep % cfg.check_every == 0) {
      DeterministicPolicy greedy(model, agent.theta, 0.0, env.config());
      res.eval_episodes += cfg.n_eval;
      if (meta::solves_task(greedy, env, cfg.n_eval, cfg.threshold,
                            derive_seed(eval_seed,
                                        static_cast<std::uint64_t>(n_checks++)))) {
        res.solved = true;
        break;
      }
    }
  }
  return res;
}

}  // namespace oda::baselines
