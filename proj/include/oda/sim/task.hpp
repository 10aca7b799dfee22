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
#include <filesystem>
#include <string>
#include <vector>

namespace oda::sim {

// One insertion task. Lengths in mm, stiffness in N/mm, damping in N*s/mm.
struct TaskSpec {
  int task_id = 0;
  double hole_center_x = 0.0;
  double clearance = 0.5;  // hole half-width minus peg half-width
  double hole_depth = 10.0;
  double peg_half_width = 5.0;
  double chamfer = 0.5;  // 45 degree entry bevel
  double friction_coeff = 0.3;
  double contact_stiffness = 50.0;
  double contact_damping = 1.0;
  double success_depth_frac = 0.9;
  // Clearance sampled below the training range.
  bool out_of_distribution = false;
  // Episodes start exactly at the nominal hover pose.
  bool no_start_noise = false;

  bool operator==(const TaskSpec&) const = default;

  double hole_half_width() const { return peg_half_width + clearance; }

  // Throws ContractError when an invariant does not hold.
  void validate() const;
};

// Sampling ranges for task families.
struct TaskRanges {
  double center_min = -10.0, center_max = 10.0;
  double clearance_min = 0.1, clearance_max = 1.0;
  double chamfer_min = 0.0, chamfer_max = 1.0;
  double friction_min = 0.1, friction_max = 0.8;
  double ood_clearance_min = 0.02, ood_clearance_max = 0.06;
};

struct TaskFamily {
  std::vector<TaskSpec> train;
  std::vector<TaskSpec> test;
};

// Draws n_tasks training tasks and `holdout` in-distribution test tasks,
// followed by `n_ood` out-of-distribution test tasks. Task ids are assigned
// consecutively from 0 in that order. Deterministic in `seed`.
TaskFamily make_task_family(std::uint64_t seed, int n_tasks, int holdout,
                            int n_ood = 0, const TaskRanges& ranges = {});

std::string format_tasks(const std::vector<TaskSpec>& tasks);
std::vector<TaskSpec> parse_tasks(const std::string& text);

void save_tasks(const std::vector<TaskSpec>& tasks,
                const std::filesystem::path& path);
std::vector<TaskSpec> load_tasks(const std::filesystem::path& path);

}  // namespace oda::sim
