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
#include <vector>

#include "oda/learn/param_set.hpp"

namespace oda::learn {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  // Rescales the whole gradient when its L2 norm exceeds this (0 = off).
  double max_grad_norm = 0.0;
};

struct AdamState {
  std::vector<Eigen::MatrixXd> m;
  std::vector<Eigen::MatrixXd> v;
  long step = 0;

  static AdamState zeros_like(const ParamSet& params);
  bool operator==(const AdamState&) const = default;
};

// One Adam step on params.value using params.grad. Rejects shape mismatches
// and non-finite gradients (ContractError / DivergenceError) without
// modifying anything.
void apply_update(ParamSet& params, AdamState& state, double learning_rate,
                  const AdamConfig& cfg = {});

}  // namespace oda::learn
