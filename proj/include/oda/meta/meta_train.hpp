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

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "oda/data/buffer.hpp"
#include "oda/meta/agent.hpp"
#include "oda/meta/checkpoint.hpp"
#include "oda/sim/task.hpp"

namespace oda::meta {

struct MetaTrainConfig {
  learn::NetworkConfig network;
  UpdateConfig update;
  long iterations = 20000;
  int context_size = 32;
  int batch_size = 256;  // per task
  std::uint64_t seed = 0;
  long log_every = 100;
};

// Canonical "key = value" lines describing a training configuration.
std::string describe(const MetaTrainConfig& cfg);

struct TrainLogRow {
  long iteration = 0;
  LossStats stats;  // averaged over tasks
};

void write_train_log_header(std::ostream& out);
void write_train_log_row(std::ostream& out, const TrainLogRow& row);

struct MetaTrainResult {
  Checkpoint checkpoint;
  std::vector<TrainLogRow> log;
};

// Offline meta-training. Every iteration, for each task: a context from
// its demonstrations, a minibatch from its offline data, z from the
// encoded context, and the three losses; gradients are summed over tasks
// and then applied once per parameter group. Buffers are keyed by
// task_id. Log rows are also streamed to `log_out` when given.
// `config_snapshot` defaults to describe(cfg).
MetaTrainResult meta_train(std::span<const sim::TaskSpec> train_tasks,
                           const data::Buffer& demos,
                           const data::Buffer& offline,
                           const MetaTrainConfig& cfg,
                           std::ostream* log_out = nullptr,
                           std::string config_snapshot = {});

}  // namespace oda::meta
