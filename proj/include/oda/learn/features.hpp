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

#include <Eigen/Dense>
#include <span>

#include "oda/data/transition.hpp"
#include "oda/sim/env.hpp"

namespace oda::learn {

// Fixed per-component scales that bring observations to O(1):
// rel pose (mm, mm, rad), velocity (mm/s, mm/s, rad/s), wrench (N, N, N*mm).
inline constexpr double kObsScale[sim::kObsDim] = {10.0, 10.0, 0.05,
                                                   20.0, 20.0, 0.5,
                                                   20.0, 20.0, 100.0};

// Encoder input per context transition: s, a, r, s'.
inline constexpr int kContextFeatureDim =
    static_cast<int>(2 * sim::kObsDim + sim::kActDim + 1);

Eigen::VectorXd normalize_obs(const sim::ObsArray& o);
// Divides by the actuation limits, so valid actions lie in [-1, 1].
Eigen::VectorXd normalize_act(const sim::ActArray& a,
                              const sim::SimConfig& cfg = {});
sim::Action denormalize_act(const Eigen::VectorXd& a,
                            const sim::SimConfig& cfg = {});

// Column-per-sample, normalized view of a set of transitions.
struct Batch {
  Eigen::MatrixXd s;       // kObsDim x B
  Eigen::MatrixXd a;       // kActDim x B
  Eigen::RowVectorXd r;    // 1 x B
  Eigen::MatrixXd s_next;  // kObsDim x B
  Eigen::MatrixXd a_next;  // kActDim x B
  Eigen::RowVectorXd done;           // 1.0 on terminal transitions
  Eigen::RowVectorXd a_next_valid;   // 1.0 when a_next is meaningful

  Eigen::Index size() const { return s.cols(); }
};

Batch make_batch(std::span<const data::Transition> transitions,
                 const sim::SimConfig& cfg = {});

// kContextFeatureDim x N encoder inputs.
Eigen::MatrixXd context_features(std::span<const data::Transition> context,
                                 const sim::SimConfig& cfg = {});

}  // namespace oda::learn
