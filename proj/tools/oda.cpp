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

// Command-line driver. Every subcommand reads an optional config file;
// --seed and --out override the file's seed and out_dir.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "oda/baselines/baselines.hpp"
#include "oda/common/error.hpp"
#include "oda/common/io.hpp"
#include "oda/evalkit/config.hpp"
#include "oda/evalkit/report.hpp"
#include "oda/evalkit/results.hpp"
#include "oda/evalkit/study.hpp"
#include "oda/meta/adapt.hpp"
#include "oda/meta/evaluate.hpp"
#include "oda/meta/finetune.hpp"
#include "oda/meta/meta_train.hpp"

namespace fs = std::filesystem;
using namespace oda;

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "key = value configuration file");
  app->add_option("--seed", c.seed, "master seed (overrides the config)");
  app->add_option("--out", c.out, "output directory (overrides out_dir)");
}

evalkit::ExperimentConfig load(const Common& c) {
  evalkit::ExperimentConfig cfg;
  if (!c.config.empty()) cfg = evalkit::load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (!c.out.empty()) cfg.out_dir = c.out;
  return cfg;
}

std::shared_ptr<const meta::Checkpoint> load_ck(const std::string& path) {
  return std::make_shared<const meta::Checkpoint>(meta::load_checkpoint(path));
}

sim::TaskSpec find_task(const evalkit::StudyData& d, int id) {
  for (const auto* set : {&d.train, &d.test}) {
    for (const sim::TaskSpec& t : *set) {
      if (t.task_id == id) return t;
    }
  }
  throw ContractError("task " + std::to_string(id) + " is not in the data set");
}

std::vector<sim::TaskSpec> pick_tasks(const evalkit::StudyData& d,
                                      std::optional<int> id) {
  if (id) return {find_task(d, *id)};
  return d.test;
}

void write_curve(const fs::path& path, const std::vector<meta::CurvePoint>& c) {
  std::ostringstream out;
  meta::write_curve_csv(out, c);
  write_text_file(path, out.str());
}

void write_eval(const fs::path& dir, const std::string& stem,
                const std::string& method, evalkit::Phase phase,
                const std::vector<std::pair<int, meta::EvalResult>>& evals,
                int online_episodes = 0, long env_steps = 0,
                bool solved = false) {
  evalkit::ResultTable table;
  std::vector<evalkit::EpisodeLine> lines;
  for (const auto& [task, ev] : evals) {
    table.add(evalkit::make_row(method, task, phase, ev, online_episodes,
                                env_steps, solved));
    evalkit::append_episode_lines(lines, method, task, phase, ev);
    std::printf("%s task %d: success %.3f (%d/%d)\n", method.c_str(), task,
                ev.success_rate, ev.successes, ev.n_episodes);
  }
  write_text_file(dir / (stem + "_results.csv"), table.to_csv());
  write_text_file(dir / (stem + "_episodes.csv"),
                  evalkit::episodes_to_csv(lines));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Offline meta-RL with demonstration adaptation"};
  app.require_subcommand(1);
  Common common;
  std::string data_dir, checkpoint;
  std::optional<int> task;

  auto* tasks = app.add_subcommand("tasks", "task family");
  auto* tasks_gen = tasks->add_subcommand("gen", "write the task family");
  tasks->require_subcommand(1);
  add_common(tasks_gen, common);

  auto* data = app.add_subcommand("data", "datasets");
  auto* collect = data->add_subcommand("collect", "tasks, demos and offline data");
  data->require_subcommand(1);
  add_common(collect, common);

  auto* train = app.add_subcommand("meta-train", "offline meta-training");
  add_common(train, common);
  train->add_option("--data", data_dir, "directory written by data collect")
      ->required();

  auto* adapt = app.add_subcommand("adapt", "adapt from demos and evaluate");
  add_common(adapt, common);
  adapt->add_option("--data", data_dir)->required();
  adapt->add_option("--checkpoint", checkpoint)->required();
  adapt->add_option("--task", task, "task id (default: every held-out task)");

  auto* ft = app.add_subcommand("finetune", "adapt, then finetune online");
  add_common(ft, common);
  ft->add_option("--data", data_dir)->required();
  ft->add_option("--checkpoint", checkpoint)->required();
  ft->add_option("--task", task)->required();

  auto* baseline = app.add_subcommand("baseline", "comparison methods");
  baseline->require_subcommand(1);
  auto* awac = baseline->add_subcommand("awac", "pooled offline AWAC");
  auto* bc = baseline->add_subcommand("bc", "behavior cloning on one task");
  auto* ddpg = baseline->add_subcommand("ddpgfd", "DDPG from demonstrations");
  for (auto* b : {awac, bc, ddpg}) {
    add_common(b, common);
    b->add_option("--data", data_dir)->required();
  }
  bc->add_option("--task", task)->required();
  ddpg->add_option("--task", task)->required();

  auto* study = app.add_subcommand("study", "full experiment pipelines");
  study->require_subcommand(1);
  auto* s_adapt = study->add_subcommand("adaptation", "ODA vs AWAC adaptation");
  auto* s_ft = study->add_subcommand("finetune", "online finetuning comparison");
  auto* s_scale = study->add_subcommand("scaling", "number of training tasks");
  for (auto* s : {s_adapt, s_ft, s_scale}) add_common(s, common);

  auto* report = app.add_subcommand("report", "summaries and plots");
  add_common(report, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  try {
    const evalkit::ExperimentConfig cfg = load(common);
    const fs::path out = cfg.out_dir;

    if (*tasks_gen) {
      const sim::TaskFamily fam = evalkit::make_family(cfg, cfg.n_train);
      sim::save_tasks(fam.train, out / "tasks_train.txt");
      sim::save_tasks(fam.test, out / "tasks_test.txt");
      std::printf("%zu training and %zu held-out tasks written to %s\n",
                  fam.train.size(), fam.test.size(), out.string().c_str());
    } else if (*collect) {
      const evalkit::StudyData d = evalkit::generate_data(cfg, cfg.n_train);
      evalkit::save_data(d, out);
      std::printf("%zu demo and %zu offline transitions written to %s\n",
                  d.demos.size(), d.offline.size(), out.string().c_str());
    } else if (*train) {
      const evalkit::StudyData d = evalkit::load_data(data_dir);
      fs::create_directories(out);
      std::ofstream log(out / "train_log.csv");
      const meta::MetaTrainResult r = meta::meta_train(
          d.train, d.demos, evalkit::training_buffer(d),
          evalkit::meta_config(cfg), &log, evalkit::to_text(cfg));
      meta::save_checkpoint(r.checkpoint, out / "oda.ckpt");
      std::printf("checkpoint written to %s\n",
                  (out / "oda.ckpt").string().c_str());
    } else if (*adapt) {
      const evalkit::StudyData d = evalkit::load_data(data_dir);
      const auto ck = load_ck(checkpoint);
      std::vector<std::pair<int, meta::EvalResult>> evals;
      for (const sim::TaskSpec& t : pick_tasks(d, task)) {
        evals.emplace_back(t.task_id,
                           evalkit::evaluate_adapted(ck, t, d.demos, cfg));
      }
      write_eval(out, "adapt", ck->kind, evalkit::Phase::kAdapt, evals);
    } else if (*ft) {
      const evalkit::StudyData d = evalkit::load_data(data_dir);
      const auto ck = load_ck(checkpoint);
      const sim::TaskSpec t = find_task(d, *task);
      const auto demos = evalkit::demos_of(d.demos, t.task_id);
      meta::AdaptConfig ac = cfg.adapt;
      ac.seed = derive_seed(evalkit::component_seed(cfg, "adapt"),
                            static_cast<std::uint64_t>(t.task_id));
      sim::Env env(t, cfg.sim);
      const meta::FinetuneResult r =
          meta::finetune(meta::adapt(ck, demos, ac), env, demos,
                         evalkit::finetune_config(cfg, t.task_id));
      const std::string stem = "finetune_task" + std::to_string(t.task_id);
      meta::save_checkpoint(r.checkpoint, out / (stem + ".ckpt"));
      write_curve(out / (stem + "_curve.csv"), r.curve);
      std::printf("%s after %d online episodes (%ld env steps)\n",
                  r.solved ? "solved" : "not solved", r.episodes_used,
                  r.env_steps);
      write_eval(out, stem, ck->kind, evalkit::Phase::kFinetune,
                 {{t.task_id, evalkit::evaluate_adapted(
                                  std::make_shared<const meta::Checkpoint>(
                                      r.checkpoint),
                                  t, d.demos, cfg)}},
                 r.episodes_used, r.env_steps, r.solved);
    } else if (*awac) {
      const evalkit::StudyData d = evalkit::load_data(data_dir);
      fs::create_directories(out);
      std::ofstream log(out / "train_log_awac.csv");
      const meta::MetaTrainResult r = baselines::awac_train(
          d.train, d.demos, d.offline, evalkit::meta_config(cfg), &log,
          evalkit::to_text(cfg));
      meta::save_checkpoint(r.checkpoint, out / "awac.ckpt");
      std::printf("checkpoint written to %s\n",
                  (out / "awac.ckpt").string().c_str());
    } else if (*bc) {
      const evalkit::StudyData d = evalkit::load_data(data_dir);
      const sim::TaskSpec t = find_task(d, *task);
      const auto ck = std::make_shared<const meta::Checkpoint>(
          baselines::bc_train(evalkit::demos_of(d.demos, t.task_id),
                              evalkit::bc_config(cfg, t.task_id), nullptr,
                              evalkit::to_text(cfg)));
      const std::string stem = "bc_task" + std::to_string(t.task_id);
      meta::save_checkpoint(*ck, out / (stem + ".ckpt"));
      write_eval(out, stem, "bc", evalkit::Phase::kAdapt,
                 {{t.task_id, evalkit::evaluate_adapted(ck, t, d.demos, cfg)}});
    } else if (*ddpg) {
      const evalkit::StudyData d = evalkit::load_data(data_dir);
      const sim::TaskSpec t = find_task(d, *task);
      sim::Env env(t, cfg.sim);
      const baselines::DdpgResult r = baselines::ddpgfd_train(
          env, evalkit::demos_of(d.demos, t.task_id),
          evalkit::ddpg_config(cfg, t.task_id), evalkit::to_text(cfg));
      const std::string stem = "ddpgfd_task" + std::to_string(t.task_id);
      meta::save_checkpoint(r.checkpoint, out / (stem + ".ckpt"));
      write_curve(out / (stem + "_curve.csv"), r.curve);
      std::printf("%s after %d online episodes (%ld env steps)\n",
                  r.solved ? "solved" : "not solved", r.episodes_used,
                  r.env_steps);
      write_eval(out, stem, "ddpgfd", evalkit::Phase::kFinetune,
                 {{t.task_id, evalkit::evaluate_adapted(
                                  std::make_shared<const meta::Checkpoint>(
                                      r.checkpoint),
                                  t, d.demos, cfg)}},
                 r.episodes_used, r.env_steps, r.solved);
    } else if (*s_adapt) {
      std::cout << evalkit::run_adaptation_study(cfg).to_csv();
    } else if (*s_ft) {
      std::cout << evalkit::run_finetune_study(cfg).table.to_csv();
    } else if (*s_scale) {
      std::cout << evalkit::scaling_to_csv(evalkit::run_scaling_study(cfg));
    } else if (*report) {
      const evalkit::ReportSummary r = evalkit::write_report(out);
      for (const auto& f : r.written) std::printf("wrote report/%s\n", f.c_str());
      for (const auto& f : r.missing) std::printf("missing %s\n", f.c_str());
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntimeError;
  }
  return 0;
}
