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

#include "oda/meta/meta_train.hpp"

#include <sstream>

#include "oda/common/error.hpp"
#include "oda/common/io.hpp"

namespace oda::meta {

std::string describe(const MetaTrainConfig& cfg) {
  const auto& n = cfg.network;
  const auto& u = cfg.update;
  std::ostringstream s;
  s << "meta.batch_size = " << cfg.batch_size << "\n"
    << "meta.context_size = " << cfg.context_size << "\n"
    << "meta.iterations = " << cfg.iterations << "\n"
    << "meta.log_every = " << cfg.log_every << "\n"
    << "meta.seed = " << cfg.seed << "\n"
    << "net.actor_hidden = " << n.actor_hidden << "\n"
    << "net.critic_hidden = " << n.critic_hidden << "\n"
    << "net.encoder_hidden = " << n.encoder_hidden << "\n"
    << "net.hidden_layers = " << n.hidden_layers << "\n"
    << "net.latent_dim = " << n.latent_dim << "\n"
    << "net.log_std_max = " << format_double(n.log_std_max) << "\n"
    << "net.log_std_min = " << format_double(n.log_std_min) << "\n"
    << "net.var_floor = " << format_double(n.var_floor) << "\n"
    << "train.beta = " << format_double(u.beta) << "\n"
    << "train.gamma = " << format_double(u.gamma) << "\n"
    << "train.lambda = " << format_double(u.lambda_temp) << "\n"
    << "train.lr_actor = " << format_double(u.lr_actor) << "\n"
    << "train.lr_critic = " << format_double(u.lr_critic) << "\n"
    << "train.lr_encoder = " << format_double(u.lr_encoder) << "\n"
    << "train.max_grad_norm = " << format_double(u.adam.max_grad_norm) << "\n"
    << "train.n_action_samples = " << u.n_action_samples << "\n"
    << "train.polyak = " << format_double(u.polyak) << "\n"
    << "train.target_mode = "
    << (u.target_mode == learn::TargetMode::kDatasetAction ? "dataset_action"
                                                           : "policy_action")
    << "\n"
    << "train.use_target_critic = " << (u.use_target_critic ? "true" : "false")
    << "\n"
    << "train.weight_clip = " << format_double(u.weight_clip) << "\n";
  return s.str();
}

void write_train_log_header(std::ostream& out) {
  out << "iteration,critic_loss,actor_loss,kl_loss,kl,mean_weight,mean_q\n";
}

void write_train_log_row(std::ostream& out, const TrainLogRow& row) {
  const LossStats& s = row.stats;
  out << row.iteration << ',' << format_double(s.critic_loss) << ','
      << format_double(s.actor_loss) << ',' << format_double(s.kl_loss) << ','
      << format_double(s.kl) << ',' << format_double(s.mean_weight) << ','
      << format_double(s.mean_q) << '\n';
}

MetaTrainResult meta_train(std::span<const sim::TaskSpec> train_tasks,
                           const data::Buffer& demos,
                           const data::Buffer& offline,
                           const MetaTrainConfig& cfg, std::ostream* log_out,
                           std::string config_snapshot) {
  if (train_tasks.empty()) throw ContractError("meta_train: no tasks");
  if (cfg.iterations < 0 || cfg.context_size < 1 || cfg.batch_size < 1) {
    throw ContractError("meta_train: bad iteration/context/batch settings");
  }
  for (const sim::TaskSpec& t : train_tasks) {
    if (demos.demo_count(t.task_id) == 0) {
      throw ContractError("meta_train: no demonstrations for task " +
                          std::to_string(t.task_id));
    }
    if (offline.count(t.task_id) == 0) {
      throw ContractError("meta_train: no offline data for task " +
                          std::to_string(t.task_id));
    }
  }

  MetaTrainResult res;
  Checkpoint& ck = res.checkpoint;
  ck.kind = "oda";
  ck.network = cfg.network;
  ck.config_snapshot =
      config_snapshot.empty() ? describe(cfg) : std::move(config_snapshot);
  ck.config_hash = snapshot_hash(ck.config_snapshot);
  const learn::Model model(cfg.network);
  ck.agent = init_agent(model, derive_seed(cfg.seed, "init"));

  if (log_out) write_train_log_header(*log_out);
  Rng rng(derive_seed(cfg.seed, "meta-train"));
  const double n_tasks = static_cast<double>(train_tasks.size());
  for (long it = 0; it < cfg.iterations; ++it) {
    LossStats sum;
    for (const sim::TaskSpec& t : train_tasks) {
      const auto context = data::sample_context(
          demos, t.task_id, static_cast<std::size_t>(cfg.context_size), rng);
      const auto batch = data::sample_batch(
          offline, t.task_id, static_cast<std::size_t>(cfg.batch_size), rng);
      try {
        sum += accumulate_task_losses(model, ck.agent, context, batch,
                                      cfg.update, rng);
      } catch (const DivergenceError& e) {
        throw DivergenceError("meta_train iteration " + std::to_string(it) +
                              ", task " + std::to_string(t.task_id) + ": " +
                              e.what());
      }
    }
    try {
      apply_updates(ck.agent, cfg.update);
    } catch (const DivergenceError& e) {
      throw DivergenceError("meta_train iteration " + std::to_string(it) +
                            ": " + e.what());
    }
    if (cfg.log_every > 0 &&
        (it % cfg.log_every == 0 || it + 1 == cfg.iterations)) {
      sum /= n_tasks;
      res.log.push_back({it, sum});
      if (log_out) write_train_log_row(*log_out, res.log.back());
    }
  }
  return res;
}

}  // namespace oda::meta
