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

#include "oda/meta/finetune.hpp"

#include <sstream>

#include "oda/common/error.hpp"
#include "oda/meta/evaluate.hpp"

namespace oda::meta {

void write_curve_csv(std::ostream& out, std::span<const CurvePoint> curve) {
  out << "episode,success,length,cumulative_env_steps\n";
  for (const CurvePoint& p : curve) {
    out << p.episode << ',' << (p.success ? 1 : 0) << ',' << p.length << ','
        << p.cumulative_steps << '\n';
  }
}

std::vector<CurvePoint> read_curve_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) ||
      line != "episode,success,length,cumulative_env_steps") {
    throw FormatError("unexpected curve CSV header");
  }
  std::vector<CurvePoint> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    CurvePoint p;
    int success = 0;
    char c1 = 0, c2 = 0, c3 = 0;
    std::istringstream fields(line);
    if (!(fields >> p.episode >> c1 >> success >> c2 >> p.length >> c3 >>
          p.cumulative_steps) ||
        c1 != ',' || c2 != ',' || c3 != ',' || (success != 0 && success != 1)) {
      throw FormatError("malformed curve line '" + line + "'");
    }
    p.success = success == 1;
    out.push_back(p);
  }
  return out;
}

namespace {

Eigen::VectorXd current_latent(const learn::Model& model,
                               const learn::ParamSet& phi,
                               std::span<const data::Transition> demos) {
  if (model.config.latent_dim == 0) return {};
  return infer_posterior(model, phi, demos).mean;
}

}  // namespace

FinetuneResult finetune(const AdaptedPolicy& adapted, sim::Env& env,
                        std::span<const data::Transition> demos,
                        const FinetuneConfig& cfg) {
  if (cfg.episode_budget < 0 || cfg.check_every < 1 || cfg.n_eval < 1 ||
      cfg.batch_size < 1 || cfg.updates_per_episode < 0) {
    throw ContractError("finetune: bad budget/check/batch settings");
  }
  const learn::Model& model = adapted.model();
  const bool latent = model.config.latent_dim > 0;
  if (latent && demos.empty()) {
    throw ContractError("finetune: demonstrations are needed for the context");
  }
  const int task_id = env.task().task_id;

  FinetuneResult res;
  res.checkpoint = adapted.checkpoint();
  AgentState& agent = res.checkpoint.agent;
  if (cfg.episode_budget == 0) return res;

  const std::uint64_t eval_seed = derive_seed(cfg.seed, "solves-task");
  const std::uint64_t rollout_seed = derive_seed(cfg.seed, "rollout");
  Rng rng(derive_seed(cfg.seed, "updates"));
  int n_checks = 0;

  auto check = [&](const Eigen::VectorXd& z) {
    LatentPolicy policy(model, agent.theta, z, learn::ActMode::kMean,
                        env.config());
    res.eval_episodes += cfg.n_eval;
    return solves_task(policy, env, cfg.n_eval, cfg.threshold,
                       derive_seed(eval_seed, static_cast<std::uint64_t>(n_checks++)));
  };

  if (check(adapted.z())) {
    res.solved = true;
    res.early_exit = true;
    return res;
  }

  data::Buffer online;
  if (cfg.seed_with_demos) {
    for (data::Transition t : demos) {
      t.task_id = task_id;
      online.append(t);
    }
  }
  data::Buffer demo_buf;
  for (data::Transition t : demos) {
    t.task_id = task_id;
    t.source = data::Source::kDemo;
    demo_buf.append(t);
  }

  for (int ep = 1; ep <= cfg.episode_budget; ++ep) {
    const Eigen::VectorXd z = current_latent(model, agent.phi, demos);
    LatentPolicy explore(model, agent.theta, z, learn::ActMode::kStochastic,
                         env.config());
    const data::Episode episode = data::run_episode(
        env, explore, derive_seed(rollout_seed, static_cast<std::uint64_t>(ep)),
        data::Source::kRl);
    online.append(episode);
    const int length = static_cast<int>(episode.transitions.size());
    res.env_steps += length;
    res.curve.push_back({ep, episode.success, length, res.env_steps});
    res.episodes_used = ep;

    for (int u = 0; u < cfg.updates_per_episode; ++u) {
      std::vector<data::Transition> context;
      if (latent) {
        context = data::sample_context(
            demo_buf, task_id, static_cast<std::size_t>(cfg.context_size), rng);
      }
      const auto batch = data::sample_batch(
          online, task_id, static_cast<std::size_t>(cfg.batch_size), rng);
      accumulate_task_losses(model, agent, context, batch, cfg.update, rng);
      apply_updates(agent, cfg.update);
      ++res.gradient_steps;
    }

    if (ep % cfg.check_every == 0 &&
        check(current_latent(model, agent.phi, demos))) {
      res.solved = true;
      break;
    }
  }
  return res;
}

}  // namespace oda::meta
