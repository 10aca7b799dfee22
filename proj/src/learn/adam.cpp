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

#include "oda/learn/adam.hpp"

#include <cmath>

#include "oda/common/error.hpp"

namespace oda::learn {

AdamState AdamState::zeros_like(const ParamSet& params) {
  AdamState s;
  for (const auto& e : params) {
    s.m.push_back(Eigen::MatrixXd::Zero(e.value.rows(), e.value.cols()));
    s.v.push_back(Eigen::MatrixXd::Zero(e.value.rows(), e.value.cols()));
  }
  return s;
}

void apply_update(ParamSet& params, AdamState& state, double learning_rate,
                  const AdamConfig& cfg) {
  if (state.m.size() != params.size() || state.v.size() != params.size()) {
    throw ContractError("optimizer state does not match parameters");
  }
  double sq_norm = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& e = params[i];
    if (e.grad.rows() != e.value.rows() || e.grad.cols() != e.value.cols() ||
        state.m[i].rows() != e.value.rows() ||
        state.m[i].cols() != e.value.cols()) {
      throw ContractError("shape mismatch for parameter " + e.name);
    }
    if (!e.grad.allFinite()) {
      throw DivergenceError("non-finite gradient in parameter " + e.name);
    }
    sq_norm += e.grad.squaredNorm();
  }
  double scale = 1.0;
  if (cfg.max_grad_norm > 0.0) {
    const double norm = std::sqrt(sq_norm);
    if (norm > cfg.max_grad_norm) scale = cfg.max_grad_norm / norm;
  }

  ++state.step;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& e = params[i];
    const Eigen::ArrayXXd g = scale * e.grad.array();
    state.m[i] = (cfg.beta1 * state.m[i].array() + (1.0 - cfg.beta1) * g).matrix();
    state.v[i] =
        (cfg.beta2 * state.v[i].array() + (1.0 - cfg.beta2) * g.square()).matrix();
    const Eigen::ArrayXXd m_hat = state.m[i].array() / bc1;
    const Eigen::ArrayXXd v_hat = state.v[i].array() / bc2;
    e.value.array() -= learning_rate * m_hat / (v_hat.sqrt() + cfg.eps);
  }
}

}  // namespace oda::learn
