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

#include "oda/meta/evaluate.hpp"

#include "oda/common/error.hpp"

namespace oda::meta {

EvalResult evaluate(data::Policy& policy, sim::Env& env, int n_episodes,
                    std::uint64_t seed) {
  if (n_episodes < 1) throw ContractError("evaluate: n_episodes must be >= 1");
  EvalResult res;
  res.n_episodes = n_episodes;
  long total_length = 0;
  for (int i = 0; i < n_episodes; ++i) {
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(i));
    const data::Episode ep =
        data::run_episode(env, policy, s, data::Source::kRl);
    const int length = static_cast<int>(ep.transitions.size());
    res.records.push_back({i, s, ep.success, length});
    res.successes += ep.success ? 1 : 0;
    total_length += length;
  }
  res.success_rate =
      static_cast<double>(res.successes) / static_cast<double>(n_episodes);
  res.mean_length =
      static_cast<double>(total_length) / static_cast<double>(n_episodes);
  return res;
}

bool solves_task(data::Policy& policy, sim::Env& env, int n_eval,
                 double threshold, std::uint64_t seed) {
  if (n_eval < 1) throw ContractError("solves_task: n_eval must be >= 1");
  return evaluate(policy, env, n_eval, seed).success_rate >= threshold;
}

}  // namespace oda::meta
