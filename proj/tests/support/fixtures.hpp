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

#include <vector>

#include "oda/common/rng.hpp"
#include "oda/data/transition.hpp"
#include "oda/learn/features.hpp"
#include "oda/sim/types.hpp"

namespace oda::testing {

// Transitions with arbitrary finite contents; not physically consistent.
inline std::vector<data::Transition> random_transitions(Rng& rng, int n,
                                                        double terminal_prob = 0.2) {
  std::vector<data::Transition> out;
  for (int i = 0; i < n; ++i) {
    data::Transition t;
    for (std::size_t k = 0; k < sim::kObsDim; ++k) {
      t.s[k] = learn::kObsScale[k] * rng.uniform(-1.5, 1.5);
      t.s_next[k] = learn::kObsScale[k] * rng.uniform(-1.5, 1.5);
    }
    const double amax[3] = {20.0, 20.0, 0.5};
    for (std::size_t k = 0; k < sim::kActDim; ++k) {
      t.a[k] = amax[k] * rng.uniform(-1.0, 1.0);
      t.a_next[k] = amax[k] * rng.uniform(-1.0, 1.0);
    }
    t.done = rng.uniform() < terminal_prob;
    t.r = t.done && rng.uniform() < 0.5 ? 1.0 : 0.0;
    t.a_next_valid = !t.done;
    if (t.done) t.a_next = {};
    t.source = data::Source::kDemo;
    out.push_back(t);
  }
  return out;
}

}  // namespace oda::testing
