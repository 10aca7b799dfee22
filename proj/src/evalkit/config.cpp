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

#include "oda/evalkit/config.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "oda/common/error.hpp"
#include "oda/common/hash.hpp"
#include "oda/common/io.hpp"

namespace oda::evalkit {
namespace {

using Getter = std::function<std::string(const ExperimentConfig&)>;
using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

struct Key {
  std::string name;
  std::string doc;
  Getter get;
  Setter set;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_integer(const std::string& v) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("not an integer: '" + v + "'");
  }
  return out;
}

double parse_real(const std::string& v) {
  try {
    return parse_double(v);
  } catch (const FormatError&) {
    throw ConfigError("not a number: '" + v + "'");
  }
}

bool parse_bool(const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("expected true or false, got '" + v + "'");
}

std::string show(bool b) { return b ? "true" : "false"; }

// Field accessors are written out per key through these adapters.
template <typename F>
Key int_key(std::string name, std::string doc, F field) {
  return {std::move(name), std::move(doc),
          [field](const ExperimentConfig& c) {
            return std::to_string(field(const_cast<ExperimentConfig&>(c)));
          },
          [field](ExperimentConfig& c, const std::string& v) {
            field(c) = parse_integer<std::remove_reference_t<decltype(field(c))>>(v);
          }};
}

template <typename F>
Key real_key(std::string name, std::string doc, F field) {
  return {std::move(name), std::move(doc),
          [field](const ExperimentConfig& c) {
            return format_double(field(const_cast<ExperimentConfig&>(c)));
          },
          [field](ExperimentConfig& c, const std::string& v) {
            field(c) = parse_real(v);
          }};
}

template <typename F>
Key bool_key(std::string name, std::string doc, F field) {
  return {std::move(name), std::move(doc),
          [field](const ExperimentConfig& c) {
            return show(field(const_cast<ExperimentConfig&>(c)));
          },
          [field](ExperimentConfig& c, const std::string& v) {
            field(c) = parse_bool(v);
          }};
}

const std::vector<Key>& keys() {
  using C = ExperimentConfig;
  static const std::vector<Key> k = {
      int_key("seed", "master seed; every random stream derives from it",
              [](C& c) -> std::uint64_t& { return c.seed; }),
      {"out_dir", "output directory for study artifacts",
       [](const C& c) { return c.out_dir; },
       [](C& c, const std::string& v) {
         if (v.empty()) throw ConfigError("out_dir must not be empty");
         c.out_dir = v;
       }},
      int_key("tasks.n_train", "training tasks",
              [](C& c) -> int& { return c.n_train; }),
      int_key("tasks.n_test", "held-out in-distribution tasks",
              [](C& c) -> int& { return c.n_test; }),
      int_key("tasks.n_ood", "held-out out-of-distribution tasks",
              [](C& c) -> int& { return c.n_ood; }),
      int_key("sim.max_episode_steps", "episode time limit in steps",
              [](C& c) -> int& { return c.sim.max_episode_steps; }),
      int_key("sim.substeps", "integration substeps per 0.1 s step",
              [](C& c) -> int& { return c.sim.substeps; }),
      real_key("sim.start_noise_mm", "uniform start offset bound on x and y (mm)",
               [](C& c) -> double& { return c.sim.start_noise_mm; }),
      real_key("sim.start_angle_noise", "uniform start angle bound (rad)",
               [](C& c) -> double& { return c.sim.start_angle_noise; }),
      real_key("sim.theta_tol", "angle tolerance of the success test (rad)",
               [](C& c) -> double& { return c.sim.theta_tol; }),
      real_key("sim.tau_track", "velocity tracking time constant (s)",
               [](C& c) -> double& { return c.sim.tau_track; }),
      int_key("data.n_demos", "demonstration episodes per task",
              [](C& c) -> int& { return c.n_demos; }),
      int_key("data.n_offline", "offline episodes per training task",
              [](C& c) -> int& { return c.n_offline; }),
      real_key("data.demo_skill_noise", "scripted demonstrator noise level",
               [](C& c) -> double& { return c.demo_skill_noise; }),
      real_key("data.offline_noise", "offline data action noise (fraction of a_max)",
               [](C& c) -> double& { return c.offline_noise; }),
      {"data.offline_source", "scripted-noise or ddpgfd",
       [](const C& c) { return c.offline_source; },
       [](C& c, const std::string& v) {
         if (v != "scripted-noise" && v != "ddpgfd") {
           throw ConfigError("data.offline_source must be scripted-noise or ddpgfd");
         }
         c.offline_source = v;
       }},
      int_key("net.latent_dim", "dimension of the task variable z",
              [](C& c) -> int& { return c.meta.network.latent_dim; }),
      int_key("net.encoder_hidden", "encoder hidden width",
              [](C& c) -> int& { return c.meta.network.encoder_hidden; }),
      int_key("net.actor_hidden", "actor hidden width",
              [](C& c) -> int& { return c.meta.network.actor_hidden; }),
      int_key("net.critic_hidden", "critic hidden width",
              [](C& c) -> int& { return c.meta.network.critic_hidden; }),
      int_key("net.hidden_layers", "hidden layers per network",
              [](C& c) -> int& { return c.meta.network.hidden_layers; }),
      real_key("net.log_std_min", "lower clamp of the policy log-std",
               [](C& c) -> double& { return c.meta.network.log_std_min; }),
      real_key("net.log_std_max", "upper clamp of the policy log-std",
               [](C& c) -> double& { return c.meta.network.log_std_max; }),
      int_key("meta.iterations", "meta-training iterations",
              [](C& c) -> long& { return c.meta.iterations; }),
      int_key("meta.context_size", "context transitions per task and iteration",
              [](C& c) -> int& { return c.meta.context_size; }),
      int_key("meta.batch_size", "offline minibatch per task and iteration",
              [](C& c) -> int& { return c.meta.batch_size; }),
      int_key("meta.log_every", "iterations between training log rows",
              [](C& c) -> long& { return c.meta.log_every; }),
      real_key("train.gamma", "discount",
               [](C& c) -> double& { return c.meta.update.gamma; }),
      real_key("train.lambda", "AWAC temperature",
               [](C& c) -> double& { return c.meta.update.lambda_temp; }),
      real_key("train.beta", "KL weight",
               [](C& c) -> double& { return c.meta.update.beta; }),
      real_key("train.weight_clip", "upper bound of the AWAC weights",
               [](C& c) -> double& { return c.meta.update.weight_clip; }),
      {"train.target_mode", "dataset_action or policy_action",
       [](const C& c) {
         return std::string(c.meta.update.target_mode ==
                                    learn::TargetMode::kDatasetAction
                                ? "dataset_action"
                                : "policy_action");
       },
       [](C& c, const std::string& v) {
         if (v == "dataset_action") {
           c.meta.update.target_mode = learn::TargetMode::kDatasetAction;
         } else if (v == "policy_action") {
           c.meta.update.target_mode = learn::TargetMode::kPolicyAction;
         } else {
           throw ConfigError("train.target_mode must be dataset_action or policy_action");
         }
       }},
      int_key("train.n_action_samples", "policy samples in the advantage baseline",
              [](C& c) -> int& { return c.meta.update.n_action_samples; }),
      bool_key("train.use_target_critic", "bootstrap from a Polyak-averaged critic",
               [](C& c) -> bool& { return c.meta.update.use_target_critic; }),
      real_key("train.polyak", "target critic averaging factor",
               [](C& c) -> double& { return c.meta.update.polyak; }),
      real_key("train.lr_encoder", "encoder learning rate",
               [](C& c) -> double& { return c.meta.update.lr_encoder; }),
      real_key("train.lr_actor", "actor learning rate",
               [](C& c) -> double& { return c.meta.update.lr_actor; }),
      real_key("train.lr_critic", "critic learning rate",
               [](C& c) -> double& { return c.meta.update.lr_critic; }),
      real_key("train.max_grad_norm", "gradient norm clip per group (0 = off)",
               [](C& c) -> double& { return c.meta.update.adam.max_grad_norm; }),
      {"adapt.latent_mode", "mean or sample",
       [](const C& c) {
         return std::string(c.adapt.latent_mode == meta::LatentMode::kPosteriorMean
                                ? "mean"
                                : "sample");
       },
       [](C& c, const std::string& v) {
         if (v == "mean") {
           c.adapt.latent_mode = meta::LatentMode::kPosteriorMean;
         } else if (v == "sample") {
           c.adapt.latent_mode = meta::LatentMode::kSample;
         } else {
           throw ConfigError("adapt.latent_mode must be mean or sample");
         }
       }},
      int_key("adapt.context_size", "demo transitions in the context (0 = all)",
              [](C& c) -> int& { return c.adapt.context_size; }),
      int_key("finetune.episode_budget", "online episodes available",
              [](C& c) -> int& { return c.finetune.episode_budget; }),
      int_key("finetune.check_every", "episodes between solves-task checks",
              [](C& c) -> int& { return c.finetune.check_every; }),
      int_key("finetune.n_eval", "episodes per solves-task check",
              [](C& c) -> int& { return c.finetune.n_eval; }),
      real_key("finetune.threshold", "success rate that counts as solved",
               [](C& c) -> double& { return c.finetune.threshold; }),
      int_key("finetune.updates_per_episode", "gradient steps per online episode",
              [](C& c) -> int& { return c.finetune.updates_per_episode; }),
      int_key("finetune.batch_size", "online minibatch size",
              [](C& c) -> int& { return c.finetune.batch_size; }),
      int_key("finetune.context_size", "context transitions per update",
              [](C& c) -> int& { return c.finetune.context_size; }),
      bool_key("finetune.seed_with_demos", "start the online buffer with the demos",
               [](C& c) -> bool& { return c.finetune.seed_with_demos; }),
      int_key("bc.iterations", "behavior cloning iterations",
              [](C& c) -> long& { return c.bc.iterations; }),
      int_key("bc.batch_size", "behavior cloning minibatch (0 = full batch)",
              [](C& c) -> int& { return c.bc.batch_size; }),
      real_key("bc.lr", "behavior cloning learning rate",
               [](C& c) -> double& { return c.bc.lr; }),
      real_key("ddpg.gamma", "DDPG discount",
               [](C& c) -> double& { return c.ddpg.gamma; }),
      real_key("ddpg.polyak", "DDPG target averaging factor",
               [](C& c) -> double& { return c.ddpg.polyak; }),
      real_key("ddpg.lr_actor", "DDPG actor learning rate",
               [](C& c) -> double& { return c.ddpg.lr_actor; }),
      real_key("ddpg.lr_critic", "DDPG critic learning rate",
               [](C& c) -> double& { return c.ddpg.lr_critic; }),
      real_key("ddpg.exploration_noise", "exploration std (fraction of a_max)",
               [](C& c) -> double& { return c.ddpg.exploration_noise; }),
      real_key("ddpg.action_penalty", "penalty on actor means outside the bounds",
               [](C& c) -> double& { return c.ddpg.action_penalty; }),
      int_key("ddpg.episode_budget", "DDPG online episodes available",
              [](C& c) -> int& { return c.ddpg.episode_budget; }),
      int_key("ddpg.updates_per_episode", "DDPG gradient steps per episode",
              [](C& c) -> int& { return c.ddpg.updates_per_episode; }),
      int_key("ddpg.batch_size", "DDPG minibatch size",
              [](C& c) -> int& { return c.ddpg.batch_size; }),
      int_key("eval.n_episodes", "evaluation episodes per task",
              [](C& c) -> int& { return c.n_eval; }),
      {"scaling.sizes", "comma-separated numbers of training tasks",
       [](const C& c) {
         std::string s;
         for (std::size_t i = 0; i < c.scaling_sizes.size(); ++i) {
           if (i) s += ",";
           s += std::to_string(c.scaling_sizes[i]);
         }
         return s;
       },
       [](C& c, const std::string& v) {
         std::vector<int> sizes;
         std::stringstream ss(v);
         std::string item;
         while (std::getline(ss, item, ',')) {
           sizes.push_back(parse_integer<int>(trim(item)));
         }
         if (sizes.empty()) throw ConfigError("scaling.sizes is empty");
         c.scaling_sizes = sizes;
       }},
      int_key("scaling.seeds", "training seeds per subset size",
              [](C& c) -> int& { return c.scaling_seeds; }),
      int_key("scaling.iterations", "meta-training iterations (0 = meta.iterations)",
              [](C& c) -> long& { return c.scaling_iterations; }),
  };
  return k;
}

const Key* find_key(const std::string& name) {
  for (const Key& k : keys()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

void validate(const ExperimentConfig& c) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  require(c.n_train >= 1, "tasks.n_train must be >= 1");
  require(c.n_test >= 0 && c.n_ood >= 0, "task counts must be >= 0");
  require(c.sim.max_episode_steps >= 1, "sim.max_episode_steps must be >= 1");
  require(c.sim.substeps >= 1, "sim.substeps must be >= 1");
  require(c.sim.start_noise_mm >= 0.0, "sim.start_noise_mm must be >= 0");
  require(c.sim.tau_track > 0.0, "sim.tau_track must be > 0");
  require(c.n_demos >= 1, "data.n_demos must be >= 1");
  require(c.n_offline >= 1, "data.n_offline must be >= 1");
  require(c.demo_skill_noise >= 0.0 && c.offline_noise >= 0.0,
          "noise levels must be >= 0");
  const auto& n = c.meta.network;
  require(n.latent_dim >= 0 && n.encoder_hidden >= 1 && n.actor_hidden >= 1 &&
              n.critic_hidden >= 1 && n.hidden_layers >= 0,
          "network sizes out of range");
  require(n.log_std_min < n.log_std_max, "net.log_std_min must be < log_std_max");
  require(c.meta.iterations >= 0, "meta.iterations must be >= 0");
  require(c.meta.context_size >= 1 && c.meta.batch_size >= 1,
          "meta.context_size and meta.batch_size must be >= 1");
  const auto& u = c.meta.update;
  require(u.gamma >= 0.0 && u.gamma <= 1.0, "train.gamma must be in [0, 1]");
  require(u.lambda_temp > 0.0, "train.lambda must be > 0");
  require(u.beta >= 0.0, "train.beta must be >= 0");
  require(u.weight_clip > 0.0, "train.weight_clip must be > 0");
  require(u.n_action_samples >= 1, "train.n_action_samples must be >= 1");
  require(u.polyak >= 0.0 && u.polyak <= 1.0, "train.polyak must be in [0, 1]");
  require(u.lr_encoder > 0.0 && u.lr_actor > 0.0 && u.lr_critic > 0.0,
          "learning rates must be > 0");
  require(c.adapt.context_size >= 0, "adapt.context_size must be >= 0");
  const auto& f = c.finetune;
  require(f.episode_budget >= 0 && f.check_every >= 1 && f.n_eval >= 1 &&
              f.updates_per_episode >= 0 && f.batch_size >= 1 &&
              f.context_size >= 1,
          "finetune settings out of range");
  require(f.threshold >= 0.0 && f.threshold <= 1.0,
          "finetune.threshold must be in [0, 1]");
  require(c.bc.iterations >= 0 && c.bc.batch_size >= 0 && c.bc.lr > 0.0,
          "bc settings out of range");
  require(c.ddpg.episode_budget >= 0 && c.ddpg.updates_per_episode >= 0 &&
              c.ddpg.batch_size >= 1 && c.ddpg.lr_actor > 0.0 &&
              c.ddpg.lr_critic > 0.0 && c.ddpg.exploration_noise >= 0.0,
          "ddpg settings out of range");
  require(c.n_eval >= 1, "eval.n_episodes must be >= 1");
  for (int s : c.scaling_sizes) {
    require(s >= 1, "scaling.sizes entries must be >= 1");
  }
  require(std::is_sorted(c.scaling_sizes.begin(), c.scaling_sizes.end()),
          "scaling.sizes must be increasing");
  require(c.scaling_seeds >= 1, "scaling.seeds must be >= 1");
  require(c.scaling_iterations >= 0, "scaling.iterations must be >= 0");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) {
      throw ConfigError(where + "expected 'key = value'");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    const Key* k = find_key(key);
    if (!k) throw ConfigError(where + "unknown key '" + key + "'");
    if (!seen.insert(key).second) {
      throw ConfigError(where + "duplicate key '" + key + "'");
    }
    try {
      k->set(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + key + ": " + e.what());
    }
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
  return parse_config(text);
}

std::string to_text(const ExperimentConfig& cfg) {
  std::map<std::string, std::string> sorted;
  for (const Key& k : keys()) sorted[k.name] = k.get(cfg);
  std::string out;
  for (const auto& [name, value] : sorted) out += name + " = " + value + "\n";
  return out;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  return fnv1a(std::string_view(to_text(cfg)));
}

std::vector<KeyDoc> documented_keys() {
  const ExperimentConfig defaults;
  std::vector<KeyDoc> out;
  for (const Key& k : keys()) out.push_back({k.name, k.get(defaults), k.doc});
  std::sort(out.begin(), out.end(),
            [](const KeyDoc& a, const KeyDoc& b) { return a.key < b.key; });
  return out;
}

std::uint64_t component_seed(const ExperimentConfig& cfg, const char* tag) {
  return derive_seed(cfg.seed, tag);
}

meta::MetaTrainConfig meta_config(const ExperimentConfig& cfg) {
  meta::MetaTrainConfig m = cfg.meta;
  m.seed = component_seed(cfg, "meta-train");
  return m;
}

meta::FinetuneConfig finetune_config(const ExperimentConfig& cfg, int task_id) {
  meta::FinetuneConfig f = cfg.finetune;
  f.update = cfg.meta.update;
  f.seed = derive_seed(component_seed(cfg, "finetune"),
                       static_cast<std::uint64_t>(task_id));
  return f;
}

baselines::BcConfig bc_config(const ExperimentConfig& cfg, int task_id) {
  baselines::BcConfig b = cfg.bc;
  b.network = cfg.meta.network;
  b.seed = derive_seed(component_seed(cfg, "bc"),
                       static_cast<std::uint64_t>(task_id));
  return b;
}

baselines::DdpgConfig ddpg_config(const ExperimentConfig& cfg, int task_id) {
  baselines::DdpgConfig d = cfg.ddpg;
  d.network = cfg.meta.network;
  d.check_every = cfg.finetune.check_every;
  d.n_eval = cfg.finetune.n_eval;
  d.threshold = cfg.finetune.threshold;
  d.seed = derive_seed(component_seed(cfg, "ddpgfd"),
                       static_cast<std::uint64_t>(task_id));
  return d;
}

}  // namespace oda::evalkit
