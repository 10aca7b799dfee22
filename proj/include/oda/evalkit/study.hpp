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

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "oda/data/buffer.hpp"
#include "oda/evalkit/config.hpp"
#include "oda/evalkit/results.hpp"
#include "oda/meta/finetune.hpp"
#include "oda/sim/task.hpp"

namespace oda::evalkit {

// Task family and datasets shared by every method of a study.
struct StudyData {
  std::vector<sim::TaskSpec> train;
  std::vector<sim::TaskSpec> test;  // in-distribution first, then OOD
  data::Buffer demos;    // every task
  data::Buffer offline;  // training tasks, without the demos
};

// Task family of a study: seeded from the config, n_train training tasks
// followed by the held-out ones.
sim::TaskFamily make_family(const ExperimentConfig& cfg, int n_train);

// Draws the family (n_train training tasks) and collects the datasets.
StudyData generate_data(const ExperimentConfig& cfg, int n_train);

// Writes tasks.txt, data/demos.odabuf and data/offline.odabuf under dir.
void save_data(const StudyData& d, const std::filesystem::path& dir);
StudyData load_data(const std::filesystem::path& dir);

// Offline + demo transitions of the training tasks: the minibatch source
// for meta-training.
data::Buffer training_buffer(const StudyData& d);
std::vector<data::Transition> demos_of(const data::Buffer& demos, int task_id);

// Adapts `checkpoint` to the task from its demos in `demos` and evaluates
// cfg.n_eval episodes with the study's per-task seeds.
meta::EvalResult evaluate_adapted(std::shared_ptr<const meta::Checkpoint> ck,
                                  const sim::TaskSpec& task,
                                  const data::Buffer& demos,
                                  const ExperimentConfig& cfg);

// Adaptation study: meta-trains ODA and pooled AWAC on the same files and
// evaluates both on every held-out task with identical seeds. Writes under
// <out_dir>/adaptation.
ResultTable run_adaptation_study(const ExperimentConfig& cfg);

struct FinetuneStudyResult {
  ResultTable table;
  // "<method>_task<id>" -> learning curve.
  std::map<std::string, std::vector<meta::CurvePoint>> curves;
};

// Needs the adaptation study artifacts in <out_dir>/adaptation. For every
// held-out task where ODA adaptation is below the threshold it runs ODA
// finetuning, AWAC finetuning, DDPG from demonstrations and behavior
// cloning. Writes under <out_dir>/finetune.
FinetuneStudyResult run_finetune_study(const ExperimentConfig& cfg);

struct ScalingRow {
  int n_train_tasks = 0;
  int seed_index = 0;
  double mean_success = 0.0;  // over the in-distribution test tasks

  bool operator==(const ScalingRow&) const = default;
};

// Meta-trains on nested prefixes of one training family and evaluates
// demo adaptation on fixed test tasks. Writes under <out_dir>/scaling.
std::vector<ScalingRow> run_scaling_study(const ExperimentConfig& cfg);

std::string scaling_to_csv(const std::vector<ScalingRow>& rows);
std::vector<ScalingRow> scaling_from_csv(const std::string& text);

}  // namespace oda::evalkit
