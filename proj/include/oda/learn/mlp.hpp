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
#include <string>
#include <vector>

#include "oda/common/rng.hpp"
#include "oda/learn/param_set.hpp"

namespace oda::learn {

// Fully connected network with tanh hidden layers and a linear output.
// Inputs and outputs are column-per-sample matrices. Parameters live in a
// ParamSet under "<prefix>/l<i>/W" and "<prefix>/l<i>/b".
class Mlp {
 public:
  Mlp() = default;
  Mlp(std::string prefix, std::vector<int> sizes);

  // Appends freshly initialized layers to `params`.
  void init(ParamSet& params, Rng& rng, double last_layer_scale = 0.1) const;

  struct Cache {
    // activations[0] is the input, activations.back() the output.
    std::vector<Eigen::MatrixXd> activations;
  };

  Eigen::MatrixXd forward(const ParamSet& params, const Eigen::MatrixXd& x,
                          Cache* cache = nullptr) const;

  // Accumulates parameter gradients given dL/d(output); returns dL/d(input).
  Eigen::MatrixXd backward(ParamSet& params, const Cache& cache,
                           const Eigen::MatrixXd& d_out) const;

  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  const std::string& prefix() const { return prefix_; }

 private:
  std::string prefix_;
  std::vector<int> sizes_;
  std::string weight_name(std::size_t layer) const;
  std::string bias_name(std::size_t layer) const;
};

}  // namespace oda::learn
