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
#include <algorithm>
#include <functional>

#include "oda/learn/param_set.hpp"

namespace oda::testing {

// Central differences of f over every scalar of `params`. Values are
// restored afterwards.
inline Eigen::VectorXd numeric_gradient(
    learn::ParamSet& params, const std::function<double()>& f,
    double h = 1e-5) {
  Eigen::VectorXd x = params.flat_values();
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + h;
    params.set_flat_values(x);
    const double fp = f();
    x[i] = orig - h;
    params.set_flat_values(x);
    const double fm = f();
    x[i] = orig;
    g[i] = (fp - fm) / (2.0 * h);
  }
  params.set_flat_values(x);
  return g;
}

// ||a - b|| / max(||a||, ||b||), with 0 when both vanish.
inline double relative_error(const Eigen::VectorXd& a,
                             const Eigen::VectorXd& b) {
  const double scale = std::max(a.norm(), b.norm());
  if (scale == 0.0) return 0.0;
  return (a - b).norm() / scale;
}

}  // namespace oda::testing
