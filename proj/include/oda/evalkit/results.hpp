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
#include <span>
#include <string>
#include <vector>

#include "oda/meta/evaluate.hpp"

namespace oda::evalkit {

enum class Phase { kAdapt, kFinetune };

const char* to_string(Phase p);
Phase phase_from_string(const std::string& s);

struct ResultRow {
  std::string method;
  int task_id = 0;
  Phase phase = Phase::kAdapt;
  int successes = 0;
  int n_eval = 0;
  double success_rate = 0.0;  // successes / n_eval
  int online_episodes_used = 0;
  long env_steps = 0;
  bool solved = false;  // reached the solves-task criterion

  bool operator==(const ResultRow&) const = default;
};

// Rows keyed uniquely by (method, task_id, phase).
class ResultTable {
 public:
  // Throws ContractError on a duplicate key or inconsistent counts.
  void add(ResultRow row);
  const std::vector<ResultRow>& rows() const { return rows_; }
  const ResultRow* find(const std::string& method, int task_id,
                        Phase phase) const;

  std::string to_csv() const;
  static ResultTable from_csv(const std::string& text);

  bool operator==(const ResultTable&) const = default;

 private:
  std::vector<ResultRow> rows_;
};

ResultRow make_row(std::string method, int task_id, Phase phase,
                   const meta::EvalResult& eval, int online_episodes = 0,
                   long env_steps = 0, bool solved = false);

// Raw per-episode evaluation records, one line each.
struct EpisodeLine {
  std::string method;
  int task_id = 0;
  Phase phase = Phase::kAdapt;
  meta::EpisodeRecord record;

  bool operator==(const EpisodeLine&) const = default;
};

void append_episode_lines(std::vector<EpisodeLine>& out,
                          const std::string& method, int task_id, Phase phase,
                          const meta::EvalResult& eval);
std::string episodes_to_csv(std::span<const EpisodeLine> lines);
std::vector<EpisodeLine> episodes_from_csv(const std::string& text);

}  // namespace oda::evalkit
