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
#include <filesystem>
#include <string>

#include "oda/learn/archive.hpp"
#include "oda/learn/networks.hpp"
#include "oda/meta/agent.hpp"

namespace oda::meta {

// Trained parameters plus everything needed to rebuild the networks and
// to recognize the configuration that produced them.
struct Checkpoint {
  std::string kind;  // "oda", "awac", "bc", "ddpgfd"
  learn::NetworkConfig network;
  AgentState agent;
  // Canonical "key = value" lines of the producing configuration.
  std::string config_snapshot;
  std::uint64_t config_hash = 0;

  learn::Model model() const { return learn::Model(network); }
  // Hash over all parameter values (not optimizer state).
  std::uint64_t params_hash() const;

  bool operator==(const Checkpoint&) const = default;
};

using MetaCheckpoint = Checkpoint;

learn::Archive to_archive(const Checkpoint& c);
// Throws FormatError when the stored configuration hash does not match
// the stored snapshot.
Checkpoint from_archive(const learn::Archive& a);

void save_checkpoint(const Checkpoint& c, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

std::uint64_t snapshot_hash(const std::string& snapshot);

}  // namespace oda::meta
