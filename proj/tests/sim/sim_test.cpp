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

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "contact_oracle.hpp"
#include "oda/common/error.hpp"
#include "oda/common/rng.hpp"
#include "oda/data/demonstrator.hpp"
#include "oda/sim/env.hpp"
#include "oda/sim/task.hpp"

namespace oda::sim {
namespace {

TaskSpec centered_task(double clearance = 1.0, double chamfer = 1.0) {
  TaskSpec t;
  t.hole_center_x = 0.0;
  t.clearance = clearance;
  t.chamfer = chamfer;
  return t;
}

TEST(TaskFamily, CardinalityAndDistinctIds) {
  const TaskFamily f = make_task_family(7, 11, 3);
  ASSERT_EQ(f.train.size(), 11u);
  ASSERT_EQ(f.test.size(), 3u);
  std::set<int> ids;
  for (const auto* set : {&f.train, &f.test}) {
    for (const TaskSpec& t : *set) ids.insert(t.task_id);
  }
  EXPECT_EQ(ids.size(), 14u);
}

TEST(TaskFamily, Deterministic) {
  const TaskFamily a = make_task_family(7, 11, 3);
  const TaskFamily b = make_task_family(7, 11, 3);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
}

TEST(TaskFamily, ParametersWithinDocumentedRanges) {
  const TaskRanges r;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const TaskFamily f = make_task_family(seed, 1, 0);
    ASSERT_EQ(f.train.size(), 1u);
    const TaskSpec& t = f.train[0];
    EXPECT_GE(t.clearance, 0.1);
    EXPECT_LE(t.clearance, 1.0);
    EXPECT_GE(t.hole_center_x, r.center_min);
    EXPECT_LE(t.hole_center_x, r.center_max);
    EXPECT_GE(t.chamfer, 0.0);
    EXPECT_LE(t.chamfer, 1.0);
    EXPECT_GE(t.friction_coeff, 0.1);
    EXPECT_LE(t.friction_coeff, 0.8);
    EXPECT_FALSE(t.out_of_distribution);
  }
}

TEST(TaskFamily, OutOfDistributionClearanceBelowTrainingRange) {
  const TaskFamily f = make_task_family(3, 4, 2, 5);
  ASSERT_EQ(f.test.size(), 7u);
  int flagged = 0;
  for (const TaskSpec& t : f.test) {
    if (!t.out_of_distribution) continue;
    ++flagged;
    EXPECT_LT(t.clearance, 0.1);
    EXPECT_GT(t.clearance, 0.0);
  }
  EXPECT_EQ(flagged, 5);
}

TEST(TaskFamily, AddingTasksKeepsExistingOnes) {
  const TaskFamily small = make_task_family(9, 3, 0);
  const TaskFamily large = make_task_family(9, 6, 0);
  for (std::size_t i = 0; i < small.train.size(); ++i) {
    EXPECT_EQ(small.train[i], large.train[i]);
  }
}

TEST(TaskFamily, RejectsBadSizes) {
  EXPECT_THROW(make_task_family(1, 0, 1), ContractError);
  EXPECT_THROW(make_task_family(1, 2, -1), ContractError);
}

TEST(TaskSpec, ValidateRejectsBrokenInvariants) {
  TaskSpec t;
  EXPECT_NO_THROW(t.validate());
  t.clearance = 0.0;
  EXPECT_THROW(t.validate(), ContractError);
  t = TaskSpec{};
  t.success_depth_frac = 1.5;
  EXPECT_THROW(t.validate(), ContractError);
  t = TaskSpec{};
  t.chamfer = -0.1;
  EXPECT_THROW(t.validate(), ContractError);
}

TEST(TaskSpec, TextRoundTripIsExact) {
  const TaskFamily f = make_task_family(21, 5, 2, 1);
  std::vector<TaskSpec> all = f.train;
  all.insert(all.end(), f.test.begin(), f.test.end());
  EXPECT_EQ(parse_tasks(format_tasks(all)), all);
}

TEST(Reset, ZeroNoiseGivesNominalPose) {
  const auto [st, obs] = reset(centered_task(), 123, 0.0);
  EXPECT_EQ(st.tcp_pose, nominal_start_pose(SimConfig{}));
  EXPECT_EQ(obs.rel_pose, (Pose{0.0, 0.0, 0.0}));
}

TEST(Reset, DeterministicInSeed) {
  const auto a = reset(centered_task(), 99, 1.0);
  const auto b = reset(centered_task(), 99, 1.0);
  EXPECT_EQ(a.first, b.first);
  EXPECT_EQ(a.second, b.second);
}

TEST(Reset, StartNoiseMonteCarlo) {
  const Pose nominal = nominal_start_pose(SimConfig{});
  double lo = 1e9, hi = -1e9, sum = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const auto [st, obs] = reset(centered_task(), derive_seed(5, i), 1.0);
    const double dx = st.tcp_pose.x - nominal.x;
    lo = std::min(lo, dx);
    hi = std::max(hi, dx);
    sum += dx;
    ASSERT_EQ(obs.rel_pose, (Pose{0.0, 0.0, 0.0}));
    ASSERT_LE(std::abs(st.tcp_pose.theta), SimConfig{}.start_angle_noise);
  }
  EXPECT_GE(lo, -1.0);
  EXPECT_LE(hi, 1.0);
  EXPECT_LT(std::abs(sum / n), 0.05);
  // The draws should actually fill the interval.
  EXPECT_LT(lo, -0.99);
  EXPECT_GT(hi, 0.99);
}

TEST(Reset, RejectsNegativeNoise) {
  EXPECT_THROW(reset(centered_task(), 1, -0.5), ContractError);
}

TEST(Step, NoContactGivesZeroWrench) {
  const TaskSpec t = centered_task();
  auto [st, obs] = reset(t, 1, 0.0);
  const StepResult r = step(st, Action{3.0, 2.0, 0.1}, t);
  EXPECT_EQ(r.state.wrench, (Wrench{0.0, 0.0, 0.0}));
  EXPECT_EQ(r.obs.wrench, (Wrench{0.0, 0.0, 0.0}));
}

TEST(Step, ZeroTwistFromRestIsFixedPoint) {
  const TaskSpec t = centered_task();
  SimState st = reset(t, 1, 0.0).first;
  const Pose start = st.tcp_pose;
  for (int k = 0; k < 99; ++k) {
    const StepResult r = step(st, Action{}, t);
    ASSERT_EQ(r.state.tcp_pose, start);
    ASSERT_EQ(r.reward, 0);
    ASSERT_FALSE(r.done);
    st = r.state;
  }
  const StepResult last = step(st, Action{}, t);
  EXPECT_TRUE(last.done);
  EXPECT_FALSE(last.success);
  EXPECT_THROW(step(last.state, Action{}, t), ContractError);
}

TEST(Step, ClipsCommandsAndRejectsNonFinite) {
  const TaskSpec t = centered_task();
  const SimState st = reset(t, 1, 0.0).first;
  const StepResult big = step(st, Action{1e6, 0.0, 0.0}, t);
  const StepResult capped = step(st, Action{20.0, 0.0, 0.0}, t);
  EXPECT_EQ(big.state, capped.state);
  EXPECT_THROW(step(st, Action{NAN, 0.0, 0.0}, t), ContractError);
}

TEST(Step, ZeroCommandVelocityDecaysMonotonically) {
  const TaskSpec t = centered_task();
  SimState st = reset(t, 1, 0.0).first;
  st.tcp_pose.y = 100.0;  // far from any contact
  st.tcp_vel = {15.0, -12.0, 0.3};
  double prev = std::hypot(st.tcp_vel.vx, st.tcp_vel.vy, st.tcp_vel.omega);
  for (int k = 0; k < 20; ++k) {
    st = step(st, Action{}, t).state;
    const double now = std::hypot(st.tcp_vel.vx, st.tcp_vel.vy, st.tcp_vel.omega);
    ASSERT_LT(now, prev);
    prev = now;
  }
}

TEST(Step, ScriptedDescentIntoWideHoleSucceeds) {
  TaskSpec t = centered_task(1.0, 1.0);
  t.no_start_noise = true;
  const data::Episode ep = data::scripted_demonstrator(t, 4, 0.0);
  EXPECT_TRUE(ep.success);
  EXPECT_LE(ep.size(), 60u);
}

TEST(Step, TrajectoriesAreDeterministicAndObservationsConsistent) {
  const TaskFamily f = make_task_family(2, 3, 0);
  for (const TaskSpec& t : f.train) {
    Env a(t), b(t);
    a.reset(77);
    b.reset(77);
    Rng rng(3);
    for (int k = 0; k < 100; ++k) {
      const Action act{rng.uniform(-20, 20), rng.uniform(-20, 5),
                       rng.uniform(-0.5, 0.5)};
      const StepResult ra = a.step(act);
      const StepResult rb = b.step(act);
      ASSERT_EQ(ra.state, rb.state);
      const SimState& s = ra.state;
      ASSERT_EQ(ra.obs.rel_pose.x, s.tcp_pose.x - s.start_pose.x);
      ASSERT_EQ(ra.obs.rel_pose.y, s.tcp_pose.y - s.start_pose.y);
      ASSERT_EQ(ra.obs.rel_pose.theta,
                wrap_angle(s.tcp_pose.theta - s.start_pose.theta));
      ASSERT_EQ(s.wrench, contact_wrench(s.tcp_pose, s.tcp_vel, t));
      ASSERT_EQ(ra.success, ra.reward == 1);
      if (ra.success) ASSERT_TRUE(ra.done);
      if (ra.done && s.step_index < SimConfig{}.max_episode_steps) {
        ASSERT_TRUE(ra.success);
      }
      if (ra.done) break;
    }
  }
}

TEST(ContactWrench, ZeroPenetration) {
  const TaskSpec t = centered_task();
  EXPECT_EQ(contact_wrench({0.0, 5.0, 0.0}, {}, t), (Wrench{0.0, 0.0, 0.0}));
  EXPECT_EQ(contact_wrench({30.0, 0.5, 0.0}, {1.0, -2.0, 0.0}, t),
            (Wrench{0.0, 0.0, 0.0}));
}

TEST(ContactWrench, FlatVerticalPenetrationAtRest) {
  const TaskSpec t = centered_task();
  const double delta = 0.125;
  // Both bottom corners rest on the flat surface right of the hole.
  const Wrench w = contact_wrench({30.0, -delta, 0.0}, {}, t);
  EXPECT_DOUBLE_EQ(w.fy, t.contact_stiffness * delta * 2.0);
  EXPECT_EQ(w.fx, 0.0);
  EXPECT_NEAR(w.tau, 0.0, 1e-12);
}

TEST(ContactWrench, MatchesIndependentImplementation) {
  Rng rng(2024);
  const SimConfig cfg;
  int in_contact = 0;
  for (int i = 0; i < 1000; ++i) {
    TaskSpec t;
    t.hole_center_x = rng.uniform(-10, 10);
    t.clearance = rng.uniform(0.02, 1.0);
    t.chamfer = i % 10 == 0 ? 0.0 : rng.uniform(0.0, 1.0);
    t.friction_coeff = rng.uniform(0.1, 0.8);
    const Pose p{t.hole_center_x + rng.uniform(-8, 8),
                 rng.uniform(-t.hole_depth - 0.5, 1.0), rng.uniform(-0.2, 0.2)};
    const Twist v{rng.uniform(-20, 20), rng.uniform(-20, 20),
                  rng.uniform(-0.5, 0.5)};
    const Wrench a = contact_wrench(p, v, t, cfg);
    const Wrench b = testing::oracle_contact_wrench(p, v, t, cfg);
    const double diff = std::hypot(a.fx - b.fx, a.fy - b.fy, a.tau - b.tau);
    const double scale = std::hypot(b.fx, b.fy, b.tau);
    if (scale > 0.0) ++in_contact;
    ASSERT_LE(diff, 1e-9 * scale) << "pose " << i;
  }
  EXPECT_GT(in_contact, 300);
}

TEST(IsSuccess, HoverIsNotSuccess) {
  const TaskSpec t = centered_task();
  EXPECT_FALSE(is_success(reset(t, 1, 0.0).first, t));
}

TEST(IsSuccess, BoundaryDepthIsIncluded) {
  const TaskSpec t = centered_task();
  SimState s;
  s.tcp_pose = {0.0, -t.success_depth_frac * t.hole_depth, 0.0};
  EXPECT_TRUE(is_success(s, t));
  s.tcp_pose.x = t.clearance;
  EXPECT_TRUE(is_success(s, t));
  s.tcp_pose.x = 0.0;
  s.tcp_pose.theta = SimConfig{}.theta_tol;
  EXPECT_TRUE(is_success(s, t));
  s.tcp_pose.theta = std::nextafter(SimConfig{}.theta_tol, 1.0);
  EXPECT_FALSE(is_success(s, t));
}

TEST(IsSuccess, FlipsOnceAlongCenteredDescent) {
  const TaskSpec t = centered_task(0.3, 0.5);
  SimState s;
  int flips = 0;
  bool prev = false;
  for (int i = 0; i <= 2000; ++i) {
    s.tcp_pose = {t.hole_center_x, 5.0 - i * 0.0075, 0.0};
    const bool now = is_success(s, t);
    if (now != prev) ++flips;
    prev = now;
  }
  EXPECT_EQ(flips, 1);
  EXPECT_TRUE(prev);
}

}  // namespace
}  // namespace oda::sim
