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

#include "oda/meta/checkpoint.hpp"

#include "oda/common/error.hpp"
#include "oda/common/hash.hpp"
#include "oda/common/io.hpp"

namespace oda::meta {

std::uint64_t Checkpoint::params_hash() const {
  std::uint64_t h = kFnvOffset;
  for (const learn::ParamSet* p :
       {&agent.phi, &agent.theta, &agent.psi, &agent.psi_target}) {
    const std::uint64_t sub = p->hash();
    h = fnv1a(std::as_bytes(std::span(&sub, 1)), h);
  }
  return h;
}

std::uint64_t snapshot_hash(const std::string& snapshot) {
  return fnv1a(std::string_view(snapshot));
}

learn::Archive to_archive(const Checkpoint& c) {
  learn::Archive a;
  a.meta["kind"] = c.kind;
  a.meta["net.latent_dim"] = std::to_string(c.network.latent_dim);
  a.meta["net.encoder_hidden"] = std::to_string(c.network.encoder_hidden);
  a.meta["net.actor_hidden"] = std::to_string(c.network.actor_hidden);
  a.meta["net.critic_hidden"] = std::to_string(c.network.critic_hidden);
  a.meta["net.hidden_layers"] = std::to_string(c.network.hidden_layers);
  a.meta["net.log_std_min"] = format_double(c.network.log_std_min);
  a.meta["net.log_std_max"] = format_double(c.network.log_std_max);
  a.meta["net.var_floor"] = format_double(c.network.var_floor);
  a.meta["config_snapshot"] = c.config_snapshot;
  a.meta["config_hash"] = std::to_string(c.config_hash);
  put_agent(a, c.agent);
  return a;
}

Checkpoint from_archive(const learn::Archive& a) {
  Checkpoint c;
  try {
    c.kind = a.get("kind");
    c.network.latent_dim = std::stoi(a.get("net.latent_dim"));
    c.network.encoder_hidden = std::stoi(a.get("net.encoder_hidden"));
    c.network.actor_hidden = std::stoi(a.get("net.actor_hidden"));
    c.network.critic_hidden = std::stoi(a.get("net.critic_hidden"));
    c.network.hidden_layers = std::stoi(a.get("net.hidden_layers"));
    c.network.log_std_min = parse_double(a.get("net.log_std_min"));
    c.network.log_std_max = parse_double(a.get("net.log_std_max"));
    c.network.var_floor = parse_double(a.get("net.var_floor"));
    c.config_snapshot = a.get("config_snapshot");
    c.config_hash = std::stoull(a.get("config_hash"));
  } catch (const std::logic_error& e) {
    throw FormatError(std::string("bad checkpoint metadata: ") + e.what());
  }
  if (snapshot_hash(c.config_snapshot) != c.config_hash) {
    throw FormatError("checkpoint config hash does not match its snapshot");
  }
  c.agent = get_agent(a, c.model());
  return c;
}

void save_checkpoint(const Checkpoint& c, const std::filesystem::path& path) {
  learn::save_archive(to_archive(c), path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return from_archive(learn::load_archive(path));
}

}  // namespace oda::meta
