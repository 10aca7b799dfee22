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
#include <vector>

#include "oda/baselines/baselines.hpp"
#include "oda/meta/adapt.hpp"
#include "oda/meta/finetune.hpp"
#include "oda/meta/meta_train.hpp"
#include "oda/sim/env.hpp"

namespace oda::evalkit {

// Every setting of an experiment. Defaults are the documented desk-scale
// values; study configuration files override some of them. Component
// seeds are derived from `seed` with fixed tags (see component_seed).
struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::string out_dir = "results";

  // Task family.
  int n_train = 8;
  int n_test = 3;
  int n_ood = 2;
  sim::SimConfig sim;

  // Datasets.
  int n_demos = 20;
  int n_offline = 500;
  double demo_skill_noise = 0.1;
  double offline_noise = 0.3;
  std::string offline_source = "scripted-noise";  // or "ddpgfd"

  // Learners (network settings are shared by every method).
  meta::MetaTrainConfig meta;
  meta::AdaptConfig adapt;
  meta::FinetuneConfig finetune;
  baselines::BcConfig bc;
  baselines::DdpgConfig ddpg;

  int n_eval = 100;

  // Scaling study.
  std::vector<int> scaling_sizes{1, 3, 5, 7, 9, 11};
  int scaling_seeds = 3;
  long scaling_iterations = 0;  // 0: use meta.iterations
};

struct KeyDoc {
  std::string key;
  std::string value;  // default
  std::string doc;
};

// Parses "key = value" lines; '#' starts a comment. Unknown keys,
// duplicates and malformed values throw ConfigError. Keys not present keep
// their defaults.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Every key with its current value, one "key = value" line each, sorted
// by key. parse_config(to_text(c)) reproduces c.
std::string to_text(const ExperimentConfig& cfg);
// FNV-1a of to_text(); independent of key order in the source file.
std::uint64_t config_hash(const ExperimentConfig& cfg);

// All keys with defaults and one-line descriptions.
std::vector<KeyDoc> documented_keys();

std::uint64_t component_seed(const ExperimentConfig& cfg, const char* tag);

// Component configurations with seeds filled in.
meta::MetaTrainConfig meta_config(const ExperimentConfig& cfg);
meta::FinetuneConfig finetune_config(const ExperimentConfig& cfg,
                                     int task_id);
baselines::BcConfig bc_config(const ExperimentConfig& cfg, int task_id);
baselines::DdpgConfig ddpg_config(const ExperimentConfig& cfg, int task_id);

}  // namespace oda::evalkit
