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

// Second implementation of the penalty contact model, written from the
// geometric description rather than from the simulator's half-plane
// tables: the hole is a slot with 45 degree bevels in a flat surface, the
// peg is a rectangle whose bottom edge midpoint is the TCP.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "oda/sim/env.hpp"

namespace oda::testing {

struct OracleContact {
  double depth;
  double nx, ny;   // unit direction of the normal force on the peg
  double ax, ay;   // contact point relative to the TCP, world frame
};

inline std::optional<OracleContact> deepest_exit(
    const std::vector<std::pair<double, std::pair<double, double>>>& faces) {
  // faces: (signed distance inside, outward normal). Inside all faces
  // means penetration; the shallowest face is the exit direction.
  OracleContact c{0, 0, 0, 0, 0};
  bool first = true;
  for (const auto& [d, n] : faces) {
    if (d <= 0.0) return std::nullopt;
    if (first || d < c.depth) {
      c.depth = d;
      c.nx = n.first;
      c.ny = n.second;
      first = false;
    }
  }
  return c;
}

inline sim::Wrench oracle_contact_wrench(const sim::Pose& pose,
                                         const sim::Twist& vel,
                                         const sim::TaskSpec& task,
                                         const sim::SimConfig& cfg) {
  const double left = task.hole_center_x - task.hole_half_width();
  const double right = task.hole_center_x + task.hole_half_width();
  const double bevel = task.chamfer;
  const double s2 = std::sqrt(2.0);
  const double co = std::cos(pose.theta), si = std::sin(pose.theta);
  const double hw = task.peg_half_width, len = cfg.peg_length;

  std::vector<OracleContact> contacts;

  // Peg corners penetrating the environment.
  for (const auto [lx, ly] : {std::pair{-hw, 0.0}, std::pair{hw, 0.0},
                              std::pair{-hw, len}, std::pair{hw, len}}) {
    const double ax = co * lx - si * ly, ay = si * lx + co * ly;
    const double x = pose.x + ax, y = pose.y + ay;
    std::optional<OracleContact> best;
    auto consider = [&](std::optional<OracleContact> c) {
      if (c && (!best || c->depth < best->depth)) best = c;
    };
    consider(deepest_exit({{left - x, {1.0, 0.0}},
                           {-y, {0.0, 1.0}},
                           {(left - bevel - x - y) / s2, {1 / s2, 1 / s2}}}));
    consider(deepest_exit({{x - right, {-1.0, 0.0}},
                           {-y, {0.0, 1.0}},
                           {(x - y - right - bevel) / s2, {-1 / s2, 1 / s2}}}));
    consider(deepest_exit({{-task.hole_depth - y, {0.0, 1.0}}}));
    if (best) {
      best->ax = ax;
      best->ay = ay;
      contacts.push_back(*best);
    }
  }

  // Environment corners penetrating the peg.
  std::vector<std::pair<double, double>> rim;
  if (bevel > 0.0) {
    rim = {{left - bevel, 0.0}, {left, -bevel}, {right, -bevel},
           {right + bevel, 0.0}};
  } else {
    rim = {{left, 0.0}, {right, 0.0}};
  }
  for (const auto [vx, vy] : rim) {
    const double ax = vx - pose.x, ay = vy - pose.y;
    const double qx = co * ax + si * ay, qy = -si * ax + co * ay;
    if (!(qx > -hw && qx < hw && qy > 0.0 && qy < len)) continue;
    // Force pushes the peg away from the nearest side.
    const double depth[4] = {hw - qx, hw + qx, qy, len - qy};
    const double lnx[4] = {-1.0, 1.0, 0.0, 0.0};
    const double lny[4] = {0.0, 0.0, 1.0, -1.0};
    int k = 0;
    for (int i = 1; i < 4; ++i) {
      if (depth[i] < depth[k]) k = i;
    }
    contacts.push_back({depth[k], co * lnx[k] - si * lny[k],
                        si * lnx[k] + co * lny[k], ax, ay});
  }

  sim::Wrench w;
  for (const OracleContact& c : contacts) {
    const double px = vel.vx - vel.omega * c.ay;
    const double py = vel.vy + vel.omega * c.ax;
    const double vn = px * c.nx + py * c.ny;
    const double vt = -px * c.ny + py * c.nx;
    const double fn = std::max(0.0, task.contact_stiffness * c.depth -
                                        task.contact_damping * vn);
    const double ft = -task.friction_coeff * fn *
                      std::clamp(vt / cfg.friction_slip_velocity, -1.0, 1.0);
    const double fx = fn * c.nx - ft * c.ny;
    const double fy = fn * c.ny + ft * c.nx;
    w.fx += fx;
    w.fy += fy;
    w.tau += c.ax * fy - c.ay * fx;
  }
  return w;
}

}  // namespace oda::testing
