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

#include "oda/learn/param_set.hpp"

#include <bit>

#include "oda/common/error.hpp"
#include "oda/common/hash.hpp"

namespace oda::learn {

void ParamSet::add(std::string name, Eigen::MatrixXd value) {
  if (contains(name)) throw ContractError("duplicate parameter " + name);
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(value.rows(), value.cols());
  entries_.push_back({std::move(name), std::move(value), std::move(grad)});
}

std::size_t ParamSet::numel() const {
  std::size_t n = 0;
  for (const Entry& e : entries_) n += static_cast<std::size_t>(e.value.size());
  return n;
}

ParamSet::Entry& ParamSet::at(std::string_view name) {
  for (Entry& e : entries_) {
    if (e.name == name) return e;
  }
  throw ContractError("no parameter named " + std::string(name));
}

const ParamSet::Entry& ParamSet::at(std::string_view name) const {
  for (const Entry& e : entries_) {
    if (e.name == name) return e;
  }
  throw ContractError("no parameter named " + std::string(name));
}

bool ParamSet::contains(std::string_view name) const {
  for (const Entry& e : entries_) {
    if (e.name == name) return true;
  }
  return false;
}

void ParamSet::zero_grad() {
  for (Entry& e : entries_) e.grad.setZero();
}

bool ParamSet::values_finite() const {
  for (const Entry& e : entries_) {
    if (!e.value.allFinite()) return false;
  }
  return true;
}

bool ParamSet::grads_finite() const {
  for (const Entry& e : entries_) {
    if (!e.grad.allFinite()) return false;
  }
  return true;
}

bool ParamSet::same_shape(const ParamSet& other) const {
  if (entries_.size() != other.entries_.size()) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Entry& a = entries_[i];
    const Entry& b = other.entries_[i];
    if (a.name != b.name || a.value.rows() != b.value.rows() ||
        a.value.cols() != b.value.cols()) {
      return false;
    }
  }
  return true;
}

Eigen::VectorXd ParamSet::flat_values() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(numel()));
  Eigen::Index k = 0;
  for (const Entry& e : entries_) {
    out.segment(k, e.value.size()) = e.value.reshaped();
    k += e.value.size();
  }
  return out;
}

Eigen::VectorXd ParamSet::flat_grads() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(numel()));
  Eigen::Index k = 0;
  for (const Entry& e : entries_) {
    out.segment(k, e.grad.size()) = e.grad.reshaped();
    k += e.grad.size();
  }
  return out;
}

void ParamSet::set_flat_values(const Eigen::VectorXd& v) {
  if (v.size() != static_cast<Eigen::Index>(numel())) {
    throw ContractError("flat parameter vector has the wrong length");
  }
  Eigen::Index k = 0;
  for (Entry& e : entries_) {
    e.value.reshaped() = v.segment(k, e.value.size());
    k += e.value.size();
  }
}

std::uint64_t ParamSet::hash() const {
  std::uint64_t h = kFnvOffset;
  for (const Entry& e : entries_) {
    h = fnv1a(e.name, h);
    const std::uint64_t shape[2] = {static_cast<std::uint64_t>(e.value.rows()),
                                    static_cast<std::uint64_t>(e.value.cols())};
    h = fnv1a(std::as_bytes(std::span(shape)), h);
    for (Eigen::Index i = 0; i < e.value.size(); ++i) {
      const std::uint64_t bits = std::bit_cast<std::uint64_t>(e.value.data()[i]);
      h = fnv1a(std::as_bytes(std::span(&bits, 1)), h);
    }
  }
  return h;
}

bool ParamSet::operator==(const ParamSet& o) const {
  if (!same_shape(o)) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].value != o.entries_[i].value) return false;
  }
  return true;
}

void polyak_update(ParamSet& target, const ParamSet& source, double rho) {
  if (!target.same_shape(source)) {
    throw ContractError("polyak update between mismatched parameter sets");
  }
  for (std::size_t i = 0; i < target.size(); ++i) {
    target[i].value = rho * target[i].value + (1.0 - rho) * source[i].value;
  }
}

}  // namespace oda::learn
