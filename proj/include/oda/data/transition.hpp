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

#include <cstdint>
#include <string>
#include <vector>

#include "oda/sim/types.hpp"

namespace oda::data {

enum class Source : std::uint8_t { kDemo = 0, kRl = 1, kScriptedNoise = 2 };

std::string to_string(Source s);
Source source_from_string(const std::string& s);

// One (s, a, r, s', a') tuple. a_next is the action actually taken at
// s_next, or zeros with a_next_valid = false on the terminal transition.
struct Transition {
  sim::ObsArray s{};
  sim::ActArray a{};
  double r = 0.0;
  sim::ObsArray s_next{};
  sim::ActArray a_next{};
  bool done = false;
  bool a_next_valid = false;
  int task_id = 0;
  Source source = Source::kRl;

  bool operator==(const Transition&) const = default;
};

struct Episode {
  std::vector<Transition> transitions;
  int task_id = 0;
  std::uint64_t episode_seed = 0;
  Source source = Source::kRl;
  bool success = false;

  std::size_t size() const { return transitions.size(); }
};

// Checks the chaining, reward sparsity and terminal flag invariants.
// Throws ContractError naming the first violation.
void validate_episode(const Episode& ep);

}  // namespace oda::data
