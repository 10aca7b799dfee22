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

#include "oda/data/transition.hpp"

#include "oda/common/error.hpp"

namespace oda::data {

std::string to_string(Source s) {
  switch (s) {
    case Source::kDemo:
      return "demo";
    case Source::kRl:
      return "rl";
    case Source::kScriptedNoise:
      return "scripted-noise";
  }
  return "unknown";
}

Source source_from_string(const std::string& s) {
  if (s == "demo") return Source::kDemo;
  if (s == "rl") return Source::kRl;
  if (s == "scripted-noise") return Source::kScriptedNoise;
  throw FormatError("unknown data source '" + s + "'");
}

void validate_episode(const Episode& ep) {
  const auto& tr = ep.transitions;
  double reward_sum = 0.0;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const Transition& t = tr[k];
    const bool last = k + 1 == tr.size();
    if (t.task_id != ep.task_id) {
      throw ContractError("episode mixes task ids");
    }
    if (t.r != 0.0 && t.r != 1.0) throw ContractError("reward not in {0,1}");
    if (t.r == 1.0 && !last) {
      throw ContractError("reward before the final transition");
    }
    if (t.done != last) throw ContractError("done flag misplaced");
    if (t.a_next_valid == t.done) {
      throw ContractError("a_next validity must be the negation of done");
    }
    if (!last && t.s_next != tr[k + 1].s) {
      throw ContractError("transitions do not chain");
    }
    if (!last && t.a_next != tr[k + 1].a) {
      throw ContractError("a_next does not match the following action");
    }
    reward_sum += t.r;
  }
  if (reward_sum > 1.0) throw ContractError("more than one reward");
}

}  // namespace oda::data
