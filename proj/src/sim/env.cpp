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

#include "oda/sim/env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oda/common/error.hpp"
#include "oda/common/rng.hpp"

namespace oda::sim {
namespace {

struct Vec2 {
  double x, y;
};

inline Vec2 rotate(Vec2 v, double c, double s) {
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

// Solid region as a union of convex pieces, each an intersection of
// half-planes n.p <= b with unit outward normals n.
struct HalfPlane {
  Vec2 n;
  double b;
};

struct ConvexPiece {
  HalfPlane faces[3];
  int count;
};

struct Penetration {
  double depth;
  Vec2 normal;  // direction of the force on the peg
};

struct Geometry {
  ConvexPiece pieces[3];
  Vec2 rim[4];
  int rim_count;
};

Geometry build_geometry(const TaskSpec& task) {
  const double cx = task.hole_center_x;
  const double w = task.hole_half_width();
  const double ch = task.chamfer;
  const double r2 = std::numbers::sqrt2 / 2.0;
  Geometry g{};
  // Left block: wall, top surface, chamfer bevel.
  g.pieces[0] = {{{{1.0, 0.0}, cx - w},
                  {{0.0, 1.0}, 0.0},
                  {{r2, r2}, (cx - w - ch) * r2}},
                 3};
  // Right block.
  g.pieces[1] = {{{{-1.0, 0.0}, -(cx + w)},
                  {{0.0, 1.0}, 0.0},
                  {{-r2, r2}, -(cx + w + ch) * r2}},
                 3};
  // Hole floor, extended under everything.
  g.pieces[2] = {{{{0.0, 1.0}, -task.hole_depth}, {}, {}}, 1};
  if (ch > 0.0) {
    g.rim[0] = {cx - w - ch, 0.0};
    g.rim[1] = {cx - w, -ch};
    g.rim[2] = {cx + w, -ch};
    g.rim[3] = {cx + w + ch, 0.0};
    g.rim_count = 4;
  } else {
    g.rim[0] = {cx - w, 0.0};
    g.rim[1] = {cx + w, 0.0};
    g.rim_count = 2;
  }
  return g;
}

// Penetration of a point into the solid. Among all pieces containing the
// point, the one with the shallowest exit is used.
bool point_in_solid(const Geometry& g, Vec2 p, Penetration* out) {
  bool found = false;
  for (const ConvexPiece& piece : g.pieces) {
    double depth = 0.0;
    Vec2 normal{0.0, 0.0};
    bool inside = true;
    for (int j = 0; j < piece.count; ++j) {
      const double d = piece.faces[j].b - dot(piece.faces[j].n, p);
      if (d <= 0.0) {
        inside = false;
        break;
      }
      if (j == 0 || d < depth) {
        depth = d;
        normal = piece.faces[j].n;
      }
    }
    if (inside && (!found || depth < out->depth)) {
      *out = {depth, normal};
      found = true;
    }
  }
  return found;
}

// Penetration of an environment vertex into the peg rectangle, given the
// vertex in peg coordinates. The force on the peg points away from the
// penetrated face, i.e. against that face's outward normal.
bool vertex_in_peg(Vec2 q, double half_width, double length,
                   Penetration* out) {
  if (q.x <= -half_width || q.x >= half_width || q.y <= 0.0 ||
      q.y >= length) {
    return false;
  }
  const double d[4] = {half_width - q.x, half_width + q.x, q.y, length - q.y};
  const Vec2 n[4] = {{-1.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}};
  int best = 0;
  for (int i = 1; i < 4; ++i) {
    if (d[i] < d[best]) best = i;
  }
  *out = {d[best], n[best]};
  return true;
}

struct Accumulator {
  double fx = 0.0, fy = 0.0, tau = 0.0;
};

void add_contact(const Penetration& pen, Vec2 arm, const Twist& vel, const TaskSpec& task, double slip_velocity,
                 Accumulator& acc) {
  // Velocity of the peg material point at the contact.
  const Vec2 v_pt{vel.vx - vel.omega * arm.y, vel.vy + vel.omega * arm.x};
  const Vec2 n = pen.normal;
  const Vec2 t{-n.y, n.x};
  const double normal_force =
      std::max(0.0, task.contact_stiffness * pen.depth -
                        task.contact_damping * dot(v_pt, n));
  const double slip = std::clamp(dot(v_pt, t) / slip_velocity, -1.0, 1.0);
  const double tangential_force = -task.friction_coeff * normal_force * slip;
  const double fx = normal_force * n.x + tangential_force * t.x;
  const double fy = normal_force * n.y + tangential_force * t.y;
  acc.fx += fx;
  acc.fy += fy;
  acc.tau += arm.x * fy - arm.y * fx;
}

}  // namespace

double wrap_angle(double a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double w = std::fmod(a, kTwoPi);
  if (w > std::numbers::pi) w -= kTwoPi;
  if (w <= -std::numbers::pi) w += kTwoPi;
  return w;
}

Pose nominal_start_pose(const SimConfig& cfg) {
  return {0.0, cfg.hover_height, 0.0};
}

Action clip_action(const Action& a, const SimConfig& cfg) {
  if (!std::isfinite(a.vx) || !std::isfinite(a.vy) ||
      !std::isfinite(a.omega)) {
    throw ContractError("action has a non-finite component");
  }
  return {std::clamp(a.vx, -cfg.a_max.vx, cfg.a_max.vx),
          std::clamp(a.vy, -cfg.a_max.vy, cfg.a_max.vy),
          std::clamp(a.omega, -cfg.a_max.omega, cfg.a_max.omega)};
}

Wrench contact_wrench(const Pose& pose, const Twist& vel,
                      const TaskSpec& task, const SimConfig& cfg) {
  const Geometry g = build_geometry(task);
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  const double hw = task.peg_half_width;
  const double len = cfg.peg_length;
  Accumulator acc;

  const Vec2 corners[4] = {{-hw, 0.0}, {hw, 0.0}, {-hw, len}, {hw, len}};
  for (Vec2 local : corners) {
    const Vec2 arm = rotate(local, c, s);
    const Vec2 p{pose.x + arm.x, pose.y + arm.y};
    Penetration pen;
    if (point_in_solid(g, p, &pen)) {
      add_contact(pen, arm, vel, task, cfg.friction_slip_velocity, acc);
    }
  }
  for (int i = 0; i < g.rim_count; ++i) {
    const Vec2 arm{g.rim[i].x - pose.x, g.rim[i].y - pose.y};
    const Vec2 q = rotate(arm, c, -s);
    Penetration pen;
    if (vertex_in_peg(q, hw, len, &pen)) {
      pen.normal = rotate(pen.normal, c, s);
      add_contact(pen, arm, vel, task, cfg.friction_slip_velocity, acc);
    }
  }
  return {acc.fx, acc.fy, acc.tau};
}

bool is_success(const SimState& state, const TaskSpec& task,
                const SimConfig& cfg) {
  const Pose& p = state.tcp_pose;
  return -p.y >= task.success_depth_frac * task.hole_depth &&
         std::abs(p.x - task.hole_center_x) <= task.clearance &&
         std::abs(p.theta) <= cfg.theta_tol;
}

Observation observe(const SimState& state, const SimConfig& cfg) {
  Observation o;
  o.rel_pose = {state.tcp_pose.x - state.start_pose.x,
                state.tcp_pose.y - state.start_pose.y,
                wrap_angle(state.tcp_pose.theta - state.start_pose.theta)};
  o.vel = state.tcp_vel;
  o.wrench = state.wrench;
  const Wrench& sd = cfg.wrench_noise;
  if (sd.fx > 0.0 || sd.fy > 0.0 || sd.tau > 0.0) {
    Rng rng(derive_seed(state.episode_seed,
                        static_cast<std::uint64_t>(state.step_index)));
    o.wrench.fx += sd.fx * rng.normal();
    o.wrench.fy += sd.fy * rng.normal();
    o.wrench.tau += sd.tau * rng.normal();
  }
  return o;
}

std::pair<SimState, Observation> reset(const TaskSpec& task,
                                       std::uint64_t episode_seed,
                                       double start_noise_mm,
                                       const SimConfig& cfg) {
  if (!(start_noise_mm >= 0.0)) {
    throw ContractError("start_noise_mm must be non-negative");
  }
  Rng rng(derive_seed(episode_seed, "reset"));
  Pose start = nominal_start_pose(cfg);
  // Draws happen unconditionally so the stream layout does not depend on
  // the noise level.
  const double ux = rng.uniform(-1.0, 1.0);
  const double uy = rng.uniform(-1.0, 1.0);
  const double ut = rng.uniform(-1.0, 1.0);
  if (start_noise_mm > 0.0) {
    start.x += start_noise_mm * ux;
    start.y += start_noise_mm * uy;
    start.theta += cfg.start_angle_noise * ut;
  }
  SimState st;
  st.tcp_pose = start;
  st.start_pose = start;
  st.episode_seed = episode_seed;
  st.wrench = contact_wrench(st.tcp_pose, st.tcp_vel, task, cfg);
  return {st, observe(st, cfg)};
}

StepResult step(const SimState& state, const Action& action,
                const TaskSpec& task, const SimConfig& cfg) {
  if (state.done || state.step_index >= cfg.max_episode_steps) {
    throw ContractError("step called on a finished episode");
  }
  const Action cmd = clip_action(action, cfg);
  const double h = cfg.dt / cfg.substeps;
  const double decay = std::exp(-h / cfg.tau_track);

  SimState next = state;
  Pose& p = next.tcp_pose;
  Twist& v = next.tcp_vel;
  for (int k = 0; k < cfg.substeps; ++k) {
    const Wrench f = contact_wrench(p, v, task, cfg);
    const double dvx = cmd.vx + cfg.linear_admittance * f.fx;
    const double dvy = cmd.vy + cfg.linear_admittance * f.fy;
    const double dom = cmd.omega + cfg.angular_admittance * f.tau;
    v.vx = dvx + (v.vx - dvx) * decay;
    v.vy = dvy + (v.vy - dvy) * decay;
    v.omega = dom + (v.omega - dom) * decay;
    p.x += h * v.vx;
    p.y += h * v.vy;
    p.theta += h * v.omega;
  }
  next.wrench = contact_wrench(p, v, task, cfg);
  next.step_index = state.step_index + 1;

  StepResult r;
  r.success = is_success(next, task, cfg);
  r.reward = r.success ? 1 : 0;
  r.done = r.success || next.step_index == cfg.max_episode_steps;
  next.done = r.done;
  r.state = next;
  r.obs = observe(next, cfg);
  return r;
}

Observation Env::reset(std::uint64_t episode_seed) {
  return reset(episode_seed, task_.no_start_noise ? 0.0 : cfg_.start_noise_mm);
}

Observation Env::reset(std::uint64_t episode_seed, double start_noise_mm) {
  auto [st, obs] = sim::reset(task_, episode_seed, start_noise_mm, cfg_);
  state_ = st;
  return obs;
}

StepResult Env::step(const Action& a) {
  StepResult r = sim::step(state_, a, task_, cfg_);
  state_ = r.state;
  return r;
}

}  // namespace oda::sim
