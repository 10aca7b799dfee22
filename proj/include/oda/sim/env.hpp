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

#include "oda/sim/task.hpp"
#include "oda/sim/types.hpp"

namespace oda::sim {

// Simulator constants. The agent acts at 1/dt; contact dynamics are
// integrated with `substeps` semi-implicit sub-steps per agent step.
struct SimConfig {
  double dt = 0.1;
  int substeps = 20;
  int max_episode_steps = 100;
  Twist a_max{20.0, 20.0, 0.5};
  double tau_track = 0.05;
  // Contact admittance: velocity offset per unit contact force/torque.
  double linear_admittance = 2.0;     // (mm/s)/N
  double angular_admittance = 0.002;  // (rad/s)/(N*mm)
  // Friction is saturated linearly below this sliding speed (mm/s).
  double friction_slip_velocity = 0.5;
  double hover_height = 5.0;  // peg tip above the surface at the nominal pose
  double peg_length = 30.0;
  double theta_tol = 0.05;
  double start_angle_noise = 0.02;
  double start_noise_mm = 1.0;
  // Standard deviations of additive wrench sensor noise (N, N, N*mm).
  Wrench wrench_noise{0.0, 0.0, 0.0};
};

struct StepResult {
  SimState state;
  Observation obs;
  int reward = 0;
  bool done = false;
  bool success = false;
};

Pose nominal_start_pose(const SimConfig& cfg);

// Places the TCP at the nominal hover pose plus uniform noise of
// +-start_noise_mm on x and y and +-cfg.start_angle_noise on theta.
std::pair<SimState, Observation> reset(const TaskSpec& task,
                                       std::uint64_t episode_seed,
                                       double start_noise_mm,
                                       const SimConfig& cfg = {});

// Advances one agent step. Throws ContractError on a finished episode.
StepResult step(const SimState& state, const Action& action,
                const TaskSpec& task, const SimConfig& cfg = {});

// Penalty contact wrench on the peg at `pose` moving with `vel`.
Wrench contact_wrench(const Pose& pose, const Twist& vel,
                      const TaskSpec& task, const SimConfig& cfg = {});

bool is_success(const SimState& state, const TaskSpec& task,
                const SimConfig& cfg = {});

Action clip_action(const Action& a, const SimConfig& cfg);

double wrap_angle(double a);

Observation observe(const SimState& state, const SimConfig& cfg = {});

// Convenience wrapper owning one episode of one task.
class Env {
 public:
  explicit Env(TaskSpec task, SimConfig cfg = {})
      : task_(std::move(task)), cfg_(cfg) {}

  Observation reset(std::uint64_t episode_seed);
  Observation reset(std::uint64_t episode_seed, double start_noise_mm);
  StepResult step(const Action& a);

  const SimState& state() const { return state_; }
  const TaskSpec& task() const { return task_; }
  const SimConfig& config() const { return cfg_; }

 private:
  TaskSpec task_;
  SimConfig cfg_;
  SimState state_;
};

}  // namespace oda::sim
