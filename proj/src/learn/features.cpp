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

#include "oda/learn/features.hpp"

namespace oda::learn {

Eigen::VectorXd normalize_obs(const sim::ObsArray& o) {
  Eigen::VectorXd v(sim::kObsDim);
  for (std::size_t i = 0; i < sim::kObsDim; ++i) v[i] = o[i] / kObsScale[i];
  return v;
}

Eigen::VectorXd normalize_act(const sim::ActArray& a,
                              const sim::SimConfig& cfg) {
  return Eigen::Vector3d(a[0] / cfg.a_max.vx, a[1] / cfg.a_max.vy,
                         a[2] / cfg.a_max.omega);
}

sim::Action denormalize_act(const Eigen::VectorXd& a,
                            const sim::SimConfig& cfg) {
  return {a[0] * cfg.a_max.vx, a[1] * cfg.a_max.vy, a[2] * cfg.a_max.omega};
}

Batch make_batch(std::span<const data::Transition> transitions,
                 const sim::SimConfig& cfg) {
  const auto n = static_cast<Eigen::Index>(transitions.size());
  Batch b;
  b.s.resize(sim::kObsDim, n);
  b.a.resize(sim::kActDim, n);
  b.r.resize(n);
  b.s_next.resize(sim::kObsDim, n);
  b.a_next.resize(sim::kActDim, n);
  b.done.resize(n);
  b.a_next_valid.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const data::Transition& t = transitions[static_cast<std::size_t>(j)];
    b.s.col(j) = normalize_obs(t.s);
    b.a.col(j) = normalize_act(t.a, cfg);
    b.r[j] = t.r;
    b.s_next.col(j) = normalize_obs(t.s_next);
    b.a_next.col(j) = normalize_act(t.a_next, cfg);
    b.done[j] = t.done ? 1.0 : 0.0;
    b.a_next_valid[j] = t.a_next_valid ? 1.0 : 0.0;
  }
  return b;
}

Eigen::MatrixXd context_features(std::span<const data::Transition> context,
                                 const sim::SimConfig& cfg) {
  const auto n = static_cast<Eigen::Index>(context.size());
  Eigen::MatrixXd x(kContextFeatureDim, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const data::Transition& t = context[static_cast<std::size_t>(j)];
    x.col(j) << normalize_obs(t.s), normalize_act(t.a, cfg), t.r,
        normalize_obs(t.s_next);
  }
  return x;
}

}  // namespace oda::learn
