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

#include "oda/evalkit/study.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "oda/baselines/baselines.hpp"
#include "oda/common/error.hpp"
#include "oda/common/io.hpp"
#include "oda/data/collect.hpp"
#include "oda/meta/adapt.hpp"
#include "oda/meta/evaluate.hpp"

namespace oda::evalkit {
namespace fs = std::filesystem;

namespace {

std::shared_ptr<const meta::Checkpoint> share(meta::Checkpoint c) {
  return std::make_shared<const meta::Checkpoint>(std::move(c));
}

std::uint64_t eval_seed(const ExperimentConfig& cfg, int task_id) {
  return derive_seed(component_seed(cfg, "evaluation"),
                     static_cast<std::uint64_t>(task_id));
}

void write_curve(const fs::path& path, const std::vector<meta::CurvePoint>& c) {
  std::ostringstream out;
  meta::write_curve_csv(out, c);
  write_text_file(path, out.str());
}

}  // namespace

meta::EvalResult evaluate_adapted(std::shared_ptr<const meta::Checkpoint> ck,
                                  const sim::TaskSpec& task,
                                  const data::Buffer& demos,
                                  const ExperimentConfig& cfg) {
  const auto d = demos_of(demos, task.task_id);
  meta::AdaptConfig ac = cfg.adapt;
  ac.seed = derive_seed(component_seed(cfg, "adapt"),
                        static_cast<std::uint64_t>(task.task_id));
  meta::AdaptedPolicy policy = meta::adapt(std::move(ck), d, ac);
  sim::Env env(task, cfg.sim);
  return meta::evaluate(policy, env, cfg.n_eval, eval_seed(cfg, task.task_id));
}

sim::TaskFamily make_family(const ExperimentConfig& cfg, int n_train) {
  return sim::make_task_family(component_seed(cfg, "tasks"), n_train,
                               cfg.n_test, cfg.n_ood);
}

StudyData generate_data(const ExperimentConfig& cfg, int n_train) {
  const sim::TaskFamily fam = make_family(cfg, n_train);
  StudyData d;
  d.train = fam.train;
  d.test = fam.test;
  const std::uint64_t demo_seed = component_seed(cfg, "demos");
  const std::uint64_t offline_seed = component_seed(cfg, "offline");
  std::vector<sim::TaskSpec> all = d.train;
  all.insert(all.end(), d.test.begin(), d.test.end());
  for (const sim::TaskSpec& t : all) {
    d.demos.append(data::collect_demos(
        t, cfg.n_demos,
        derive_seed(demo_seed, static_cast<std::uint64_t>(t.task_id)),
        cfg.demo_skill_noise, cfg.sim));
  }
  for (const sim::TaskSpec& t : d.train) {
    const std::uint64_t s =
        derive_seed(offline_seed, static_cast<std::uint64_t>(t.task_id));
    if (cfg.offline_source == "ddpgfd") {
      sim::Env env(t, cfg.sim);
      const auto demos = demos_of(d.demos, t.task_id);
      const baselines::DdpgResult r =
          baselines::ddpgfd_train(env, demos, ddpg_config(cfg, t.task_id));
      meta::AdaptedPolicy policy = meta::adapt(share(r.checkpoint), {});
      d.offline.append(data::collect_offline(t, policy, cfg.n_offline, s,
                                             cfg.offline_noise,
                                             data::Source::kRl, cfg.sim));
    } else {
      d.offline.append(data::collect_scripted_noise(
          t, cfg.n_offline, s, cfg.offline_noise, cfg.demo_skill_noise,
          cfg.sim));
    }
  }
  return d;
}

void save_data(const StudyData& d, const fs::path& dir) {
  sim::save_tasks(d.train, dir / "tasks_train.txt");
  sim::save_tasks(d.test, dir / "tasks_test.txt");
  data::save_buffer(d.demos, dir / "data" / "demos.odabuf");
  data::save_buffer(d.offline, dir / "data" / "offline.odabuf");
}

StudyData load_data(const fs::path& dir) {
  StudyData d;
  d.train = sim::load_tasks(dir / "tasks_train.txt");
  d.test = sim::load_tasks(dir / "tasks_test.txt");
  d.demos = data::load_buffer(dir / "data" / "demos.odabuf");
  d.offline = data::load_buffer(dir / "data" / "offline.odabuf");
  return d;
}

data::Buffer training_buffer(const StudyData& d) {
  data::Buffer b;
  for (const sim::TaskSpec& t : d.train) {
    for (std::size_t i : d.offline.indices(t.task_id)) b.append(d.offline[i]);
    for (std::size_t i : d.demos.indices(t.task_id)) b.append(d.demos[i]);
  }
  return b;
}

std::vector<data::Transition> demos_of(const data::Buffer& demos, int task_id) {
  std::vector<data::Transition> out;
  for (std::size_t i : demos.demo_indices(task_id)) out.push_back(demos[i]);
  return out;
}

ResultTable run_adaptation_study(const ExperimentConfig& cfg) {
  const fs::path dir = fs::path(cfg.out_dir) / "adaptation";
  fs::create_directories(dir);
  write_text_file(dir / "config.txt", to_text(cfg));

  // Both methods read the same files back.
  save_data(generate_data(cfg, cfg.n_train), dir);
  const StudyData d = load_data(dir);
  const std::string snapshot = to_text(cfg);

  const meta::MetaTrainConfig mc = meta_config(cfg);
  std::ofstream oda_log(dir / "train_log_oda.csv");
  const meta::MetaTrainResult oda = meta::meta_train(
      d.train, d.demos, training_buffer(d), mc, &oda_log, snapshot);
  meta::save_checkpoint(oda.checkpoint, dir / "oda.ckpt");

  std::ofstream awac_log(dir / "train_log_awac.csv");
  const meta::MetaTrainResult awac = baselines::awac_train(
      d.train, d.demos, d.offline, mc, &awac_log, snapshot);
  meta::save_checkpoint(awac.checkpoint, dir / "awac.ckpt");

  ResultTable table;
  std::vector<EpisodeLine> episodes;
  const auto oda_ck = share(oda.checkpoint);
  const auto awac_ck = share(awac.checkpoint);
  for (const sim::TaskSpec& t : d.test) {
    for (const auto& [name, ck] : {std::pair{"oda", oda_ck}, std::pair{"awac", awac_ck}}) {
      const meta::EvalResult ev = evaluate_adapted(ck, t, d.demos, cfg);
      table.add(make_row(name, t.task_id, Phase::kAdapt, ev, 0, 0,
                         ev.success_rate >= cfg.finetune.threshold));
      append_episode_lines(episodes, name, t.task_id, Phase::kAdapt, ev);
    }
  }
  write_text_file(dir / "results.csv", table.to_csv());
  write_text_file(dir / "episodes.csv", episodes_to_csv(episodes));
  return table;
}

FinetuneStudyResult run_finetune_study(const ExperimentConfig& cfg) {
  const fs::path adapt_dir = fs::path(cfg.out_dir) / "adaptation";
  for (const char* f : {"results.csv", "episodes.csv", "oda.ckpt", "awac.ckpt", "tasks_test.txt",
                        "data/demos.odabuf"}) {
    if (!fs::exists(adapt_dir / f)) {
      throw std::runtime_error("finetune study needs " +
                               (adapt_dir / f).string() +
                               "; run the adaptation study first");
    }
  }
  const fs::path dir = fs::path(cfg.out_dir) / "finetune";
  fs::create_directories(dir / "curves");
  write_text_file(dir / "config.txt", to_text(cfg));

  const ResultTable adaptation =
      ResultTable::from_csv(read_text_file(adapt_dir / "results.csv"));
  const std::vector<EpisodeLine> adapt_episodes =
      episodes_from_csv(read_text_file(adapt_dir / "episodes.csv"));
  const StudyData d = load_data(adapt_dir);
  const auto oda_ck = share(meta::load_checkpoint(adapt_dir / "oda.ckpt"));
  const auto awac_ck = share(meta::load_checkpoint(adapt_dir / "awac.ckpt"));

  FinetuneStudyResult res;
  std::vector<EpisodeLine> episodes;
  for (const sim::TaskSpec& t : d.test) {
    const ResultRow* adapted = adaptation.find("oda", t.task_id, Phase::kAdapt);
    if (!adapted) {
      throw std::runtime_error("adaptation results lack task " +
                               std::to_string(t.task_id));
    }
    if (adapted->success_rate >= cfg.finetune.threshold) {
      // Early exit: adaptation alone already solves the task.
      ResultRow r = *adapted;
      r.phase = Phase::kFinetune;
      r.solved = true;
      res.table.add(r);
      for (EpisodeLine line : adapt_episodes) {
        if (line.method != "oda" || line.task_id != t.task_id) continue;
        line.phase = Phase::kFinetune;
        episodes.push_back(line);
      }
      continue;
    }
    const auto demos = demos_of(d.demos, t.task_id);
    sim::Env env(t, cfg.sim);
    const meta::FinetuneConfig fc = finetune_config(cfg, t.task_id);
    const std::string suffix = "_task" + std::to_string(t.task_id);

    // ODA: adapt, then finetune.
    meta::AdaptConfig ac = cfg.adapt;
    ac.seed = derive_seed(component_seed(cfg, "adapt"),
                          static_cast<std::uint64_t>(t.task_id));
    const meta::FinetuneResult oda =
        meta::finetune(meta::adapt(oda_ck, demos, ac), env, demos, fc);
    const meta::EvalResult oda_ev =
        evaluate_adapted(share(oda.checkpoint), t, d.demos, cfg);
    res.table.add(make_row("oda", t.task_id, Phase::kFinetune, oda_ev,
                           oda.episodes_used, oda.env_steps, oda.solved));
    append_episode_lines(episodes, "oda", t.task_id, Phase::kFinetune, oda_ev);
    res.curves["oda" + suffix] = oda.curve;

    // Pooled AWAC, finetuned the same way without a context.
    const meta::FinetuneResult awac =
        baselines::awac_finetune(*awac_ck, env, demos, fc);
    const meta::EvalResult awac_ev =
        evaluate_adapted(share(awac.checkpoint), t, d.demos, cfg);
    res.table.add(make_row("awac", t.task_id, Phase::kFinetune, awac_ev,
                           awac.episodes_used, awac.env_steps, awac.solved));
    append_episode_lines(episodes, "awac", t.task_id, Phase::kFinetune, awac_ev);
    res.curves["awac" + suffix] = awac.curve;

    // DDPG from demonstrations, from scratch.
    const baselines::DdpgResult ddpg =
        baselines::ddpgfd_train(env, demos, ddpg_config(cfg, t.task_id));
    const meta::EvalResult ddpg_ev =
        evaluate_adapted(share(ddpg.checkpoint), t, d.demos, cfg);
    res.table.add(make_row("ddpgfd", t.task_id, Phase::kFinetune, ddpg_ev,
                           ddpg.episodes_used, ddpg.env_steps, ddpg.solved));
    append_episode_lines(episodes, "ddpgfd", t.task_id, Phase::kFinetune, ddpg_ev);
    res.curves["ddpgfd" + suffix] = ddpg.curve;

    // Behavior cloning on the task's demonstrations (no online data).
    const meta::EvalResult bc_ev = evaluate_adapted(
        share(baselines::bc_train(demos, bc_config(cfg, t.task_id))), t,
        d.demos, cfg);
    res.table.add(make_row("bc", t.task_id, Phase::kAdapt, bc_ev, 0, 0,
                           bc_ev.success_rate >= cfg.finetune.threshold));
    append_episode_lines(episodes, "bc", t.task_id, Phase::kAdapt, bc_ev);
  }
  for (const auto& [name, curve] : res.curves) {
    write_curve(dir / "curves" / (name + ".csv"), curve);
  }
  write_text_file(dir / "results.csv", res.table.to_csv());
  write_text_file(dir / "episodes.csv", episodes_to_csv(episodes));
  return res;
}

std::vector<ScalingRow> run_scaling_study(const ExperimentConfig& cfg) {
  const fs::path dir = fs::path(cfg.out_dir) / "scaling";
  fs::create_directories(dir);
  write_text_file(dir / "config.txt", to_text(cfg));

  const int max_tasks = cfg.scaling_sizes.back();
  ExperimentConfig data_cfg = cfg;
  data_cfg.n_ood = 0;
  save_data(generate_data(data_cfg, max_tasks), dir);
  const StudyData d = load_data(dir);
  const data::Buffer train_buf = training_buffer(d);

  std::vector<ScalingRow> rows;
  std::vector<EpisodeLine> episodes;
  for (int s = 0; s < cfg.scaling_seeds; ++s) {
    for (int n : cfg.scaling_sizes) {
      meta::MetaTrainConfig mc = meta_config(cfg);
      mc.seed = derive_seed(component_seed(cfg, "scaling"),
                            static_cast<std::uint64_t>(s));
      if (cfg.scaling_iterations > 0) mc.iterations = cfg.scaling_iterations;
      const std::vector<sim::TaskSpec> subset(d.train.begin(),
                                              d.train.begin() + n);
      const meta::MetaTrainResult trained =
          meta::meta_train(subset, d.demos, train_buf, mc, nullptr, to_text(cfg));
      const auto ck = share(trained.checkpoint);
      double total = 0.0;
      const std::string method = "oda_n" + std::to_string(n) + "_s" + std::to_string(s);
      for (const sim::TaskSpec& t : d.test) {
        const meta::EvalResult ev = evaluate_adapted(ck, t, d.demos, cfg);
        total += ev.success_rate;
        append_episode_lines(episodes, method, t.task_id, Phase::kAdapt, ev);
      }
      rows.push_back({n, s, total / static_cast<double>(d.test.size())});
    }
  }
  write_text_file(dir / "results.csv", scaling_to_csv(rows));
  write_text_file(dir / "episodes.csv", episodes_to_csv(episodes));
  return rows;
}

std::string scaling_to_csv(const std::vector<ScalingRow>& rows) {
  std::ostringstream out;
  out << "n_train_tasks,seed_index,mean_success\n";
  for (const ScalingRow& r : rows) {
    out << r.n_train_tasks << ',' << r.seed_index << ','
        << format_double(r.mean_success) << "\n";
  }
  return out.str();
}

std::vector<ScalingRow> scaling_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "n_train_tasks,seed_index,mean_success") {
    throw FormatError("unexpected scaling CSV header");
  }
  std::vector<ScalingRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') ||
        !std::getline(ss, c)) {
      throw FormatError("bad scaling CSV line: " + line);
    }
    rows.push_back({std::stoi(a), std::stoi(b), parse_double(c)});
  }
  return rows;
}

}  // namespace oda::evalkit
