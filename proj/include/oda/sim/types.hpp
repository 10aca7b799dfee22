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

#include <array>
#include <cstddef>
#include <cstdint>

namespace oda::sim {

inline constexpr std::size_t kObsDim = 9;
inline constexpr std::size_t kActDim = 3;

using ObsArray = std::array<double, kObsDim>;
using ActArray = std::array<double, kActDim>;

// Planar pose of the tool center point: mm, mm, rad.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  bool operator==(const Pose&) const = default;
};

// mm/s, mm/s, rad/s.
struct Twist {
  double vx = 0.0;
  double vy = 0.0;
  double omega = 0.0;
  bool operator==(const Twist&) const = default;
};

// N, N, N*mm; expressed in the world frame, torque about the TCP.
struct Wrench {
  double fx = 0.0;
  double fy = 0.0;
  double tau = 0.0;
  bool operator==(const Wrench&) const = default;
};

// Commanded TCP twist. Components are clipped to the actuation limits
// inside step().
struct Action {
  double vx = 0.0;
  double vy = 0.0;
  double omega = 0.0;
  bool operator==(const Action&) const = default;

  ActArray to_array() const { return {vx, vy, omega}; }
  static Action from_array(const ActArray& a) { return {a[0], a[1], a[2]}; }
};

// Agent-facing observation: pose relative to the episode start pose,
// velocity, and contact wrench, in that order.
struct Observation {
  Pose rel_pose;
  Twist vel;
  Wrench wrench;
  bool operator==(const Observation&) const = default;

  ObsArray to_array() const {
    return {rel_pose.x, rel_pose.y, rel_pose.theta, vel.vx, vel.vy,
            vel.omega,  wrench.fx,  wrench.fy,      wrench.tau};
  }
  static Observation from_array(const ObsArray& o) {
    return {{o[0], o[1], o[2]}, {o[3], o[4], o[5]}, {o[6], o[7], o[8]}};
  }
};

struct SimState {
  Pose tcp_pose;
  Twist tcp_vel;
  Wrench wrench;
  int step_index = 0;
  Pose start_pose;
  std::uint64_t episode_seed = 0;
  bool done = false;
  bool operator==(const SimState&) const = default;
};

}  // namespace oda::sim
