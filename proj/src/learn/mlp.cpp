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

#include "oda/learn/mlp.hpp"

#include <cmath>

#include "oda/common/error.hpp"

namespace oda::learn {

Mlp::Mlp(std::string prefix, std::vector<int> sizes)
    : prefix_(std::move(prefix)), sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw ContractError("an MLP needs at least 2 sizes");
}

std::string Mlp::weight_name(std::size_t layer) const {
  return prefix_ + "/l" + std::to_string(layer) + "/W";
}

std::string Mlp::bias_name(std::size_t layer) const {
  return prefix_ + "/l" + std::to_string(layer) + "/b";
}

void Mlp::init(ParamSet& params, Rng& rng, double last_layer_scale) const {
  const std::size_t layers = sizes_.size() - 1;
  for (std::size_t l = 0; l < layers; ++l) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    double bound = in > 0 ? 1.0 / std::sqrt(static_cast<double>(in)) : 0.0;
    if (l + 1 == layers) bound *= last_layer_scale;
    Eigen::MatrixXd w(out, in);
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) {
        w(i, j) = rng.uniform(-bound, bound);
      }
    }
    Eigen::MatrixXd b(out, 1);
    for (Eigen::Index i = 0; i < b.rows(); ++i) b(i, 0) = rng.uniform(-bound, bound);
    params.add(weight_name(l), std::move(w));
    params.add(bias_name(l), std::move(b));
  }
}

Eigen::MatrixXd Mlp::forward(const ParamSet& params, const Eigen::MatrixXd& x,
                             Cache* cache) const {
  if (x.rows() != sizes_.front()) {
    throw ContractError(prefix_ + ": input has " + std::to_string(x.rows()) +
                        " rows, expected " + std::to_string(sizes_.front()));
  }
  const std::size_t layers = sizes_.size() - 1;
  if (cache) {
    cache->activations.clear();
    cache->activations.push_back(x);
  }
  Eigen::MatrixXd h = x;
  for (std::size_t l = 0; l < layers; ++l) {
    const Eigen::MatrixXd& w = params.at(weight_name(l)).value;
    const Eigen::MatrixXd& b = params.at(bias_name(l)).value;
    Eigen::MatrixXd pre = w * h;
    pre.colwise() += b.col(0);
    if (l + 1 < layers) {
      h = pre.array().tanh().matrix();
    } else {
      h = std::move(pre);
    }
    if (cache) cache->activations.push_back(h);
  }
  return h;
}

Eigen::MatrixXd Mlp::backward(ParamSet& params, const Cache& cache,
                              const Eigen::MatrixXd& d_out) const {
  const std::size_t layers = sizes_.size() - 1;
  Eigen::MatrixXd delta = d_out;
  for (std::size_t l = layers; l-- > 0;) {
    const Eigen::MatrixXd& input = cache.activations[l];
    if (l + 1 < layers) {
      // Output of layer l is tanh(pre); d pre = d out * (1 - out^2).
      const Eigen::MatrixXd& out = cache.activations[l + 1];
      delta = (delta.array() * (1.0 - out.array().square())).matrix();
    }
    ParamSet::Entry& w = params.at(weight_name(l));
    ParamSet::Entry& b = params.at(bias_name(l));
    w.grad.noalias() += delta * input.transpose();
    b.grad.col(0) += delta.rowwise().sum();
    delta = w.value.transpose() * delta;
  }
  return delta;
}

}  // namespace oda::learn
