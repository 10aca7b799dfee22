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
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "oda/common/rng.hpp"

namespace oda::learn {

// Named real-valued arrays with a companion gradient of identical shape.
// Loss functions read `value` and accumulate into `grad`.
class ParamSet {
 public:
  struct Entry {
    std::string name;
    Eigen::MatrixXd value;
    Eigen::MatrixXd grad;
  };

  // Adds a new array; the gradient starts at zero. Names must be unique.
  void add(std::string name, Eigen::MatrixXd value);

  std::size_t size() const { return entries_.size(); }
  // Total number of scalars.
  std::size_t numel() const;

  Entry& operator[](std::size_t i) { return entries_[i]; }
  const Entry& operator[](std::size_t i) const { return entries_[i]; }
  Entry& at(std::string_view name);
  const Entry& at(std::string_view name) const;
  bool contains(std::string_view name) const;

  auto begin() { return entries_.begin(); }
  auto end() { return entries_.end(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  void zero_grad();
  bool values_finite() const;
  bool grads_finite() const;
  bool same_shape(const ParamSet& other) const;

  // Flat views in entry order, column-major within each array.
  Eigen::VectorXd flat_values() const;
  Eigen::VectorXd flat_grads() const;
  void set_flat_values(const Eigen::VectorXd& v);

  // FNV-1a over names, shapes and value bits.
  std::uint64_t hash() const;

  // Values only; gradients are not compared.
  bool operator==(const ParamSet& o) const;

 private:
  std::vector<Entry> entries_;
};

// target <- rho * target + (1 - rho) * source, per array.
void polyak_update(ParamSet& target, const ParamSet& source, double rho);

}  // namespace oda::learn
