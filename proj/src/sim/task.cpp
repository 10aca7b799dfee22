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

#include "oda/sim/task.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "oda/common/error.hpp"
#include "oda/common/io.hpp"
#include "oda/common/rng.hpp"

namespace oda::sim {

void TaskSpec::validate() const {
  auto require = [&](bool ok, const char* what) {
    if (!ok) {
      throw ContractError("task " + std::to_string(task_id) + ": " + what);
    }
  };
  require(std::isfinite(hole_center_x), "hole_center_x must be finite");
  require(clearance > 0.0, "clearance must be positive");
  require(hole_depth > 0.0, "hole_depth must be positive");
  require(peg_half_width > 0.0, "peg_half_width must be positive");
  require(chamfer >= 0.0, "chamfer must be non-negative");
  require(success_depth_frac > 0.0 && success_depth_frac <= 1.0,
          "success_depth_frac must be in (0, 1]");
  require(friction_coeff >= 0.0, "friction_coeff must be non-negative");
  require(contact_stiffness > 0.0, "contact_stiffness must be positive");
  require(contact_damping >= 0.0, "contact_damping must be non-negative");
}

namespace {

TaskSpec draw_task(Rng& rng, int id, const TaskRanges& r, bool ood) {
  TaskSpec t;
  t.task_id = id;
  t.hole_center_x = rng.uniform(r.center_min, r.center_max);
  const double in_dist = rng.uniform(r.clearance_min, r.clearance_max);
  t.chamfer = rng.uniform(r.chamfer_min, r.chamfer_max);
  t.friction_coeff = rng.uniform(r.friction_min, r.friction_max);
  const double ood_clearance =
      rng.uniform(r.ood_clearance_min, r.ood_clearance_max);
  t.clearance = ood ? ood_clearance : in_dist;
  t.out_of_distribution = ood;
  return t;
}

}  // namespace

TaskFamily make_task_family(std::uint64_t seed, int n_tasks, int holdout,
                            int n_ood, const TaskRanges& ranges) {
  if (n_tasks < 1) throw ContractError("n_tasks must be at least 1");
  if (holdout < 0) throw ContractError("holdout must be non-negative");
  if (n_ood < 0) throw ContractError("n_ood must be non-negative");
  if (!(ranges.ood_clearance_max <= ranges.clearance_min)) {
    throw ContractError("out-of-distribution clearance must lie below the "
                        "training range");
  }
  TaskFamily fam;
  int id = 0;
  // Each task gets its own stream so that adding tasks never perturbs
  // previously drawn ones.
  for (int i = 0; i < n_tasks; ++i, ++id) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(id)));
    fam.train.push_back(draw_task(rng, id, ranges, false));
  }
  for (int i = 0; i < holdout + n_ood; ++i, ++id) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(id)));
    fam.test.push_back(draw_task(rng, id, ranges, i >= holdout));
  }
  return fam;
}

std::string format_tasks(const std::vector<TaskSpec>& tasks) {
  std::ostringstream out;
  out << "# oda task family v1\n";
  for (const TaskSpec& t : tasks) {
    out << "\n[task]\n"
        << "task_id = " << t.task_id << "\n"
        << "hole_center_x = " << format_double(t.hole_center_x) << "\n"
        << "clearance = " << format_double(t.clearance) << "\n"
        << "hole_depth = " << format_double(t.hole_depth) << "\n"
        << "peg_half_width = " << format_double(t.peg_half_width) << "\n"
        << "chamfer = " << format_double(t.chamfer) << "\n"
        << "friction_coeff = " << format_double(t.friction_coeff) << "\n"
        << "contact_stiffness = " << format_double(t.contact_stiffness) << "\n"
        << "contact_damping = " << format_double(t.contact_damping) << "\n"
        << "success_depth_frac = " << format_double(t.success_depth_frac)
        << "\n"
        << "out_of_distribution = " << (t.out_of_distribution ? 1 : 0) << "\n"
        << "no_start_noise = " << (t.no_start_noise ? 1 : 0) << "\n";
  }
  return out.str();
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

TaskSpec task_from_record(const std::map<std::string, std::string>& rec) {
  static const char* kKeys[] = {
      "task_id",          "hole_center_x",     "clearance",
      "hole_depth",       "peg_half_width",    "chamfer",
      "friction_coeff",   "contact_stiffness", "contact_damping",
      "success_depth_frac", "out_of_distribution", "no_start_noise"};
  for (const char* k : kKeys) {
    if (!rec.count(k)) {
      throw FormatError(std::string("task record missing key '") + k + "'");
    }
  }
  if (rec.size() != std::size(kKeys)) {
    throw FormatError("task record has unknown keys");
  }
  auto num = [&](const char* k) { return parse_double(rec.at(k)); };
  auto flag = [&](const char* k) {
    const std::string& v = rec.at(k);
    if (v != "0" && v != "1") throw FormatError(std::string("bad flag ") + k);
    return v == "1";
  };
  TaskSpec t;
  t.task_id = std::stoi(rec.at("task_id"));
  t.hole_center_x = num("hole_center_x");
  t.clearance = num("clearance");
  t.hole_depth = num("hole_depth");
  t.peg_half_width = num("peg_half_width");
  t.chamfer = num("chamfer");
  t.friction_coeff = num("friction_coeff");
  t.contact_stiffness = num("contact_stiffness");
  t.contact_damping = num("contact_damping");
  t.success_depth_frac = num("success_depth_frac");
  t.out_of_distribution = flag("out_of_distribution");
  t.no_start_noise = flag("no_start_noise");
  t.validate();
  return t;
}

}  // namespace

std::vector<TaskSpec> parse_tasks(const std::string& text) {
  std::vector<TaskSpec> tasks;
  std::map<std::string, std::string> rec;
  bool in_record = false;
  auto flush = [&] {
    if (in_record) tasks.push_back(task_from_record(rec));
    rec.clear();
  };
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line == "[task]") {
      flush();
      in_record = true;
      continue;
    }
    const auto eq = line.find('=');
    if (!in_record || eq == std::string::npos) {
      throw FormatError("unexpected line in task file: " + line);
    }
    const std::string key = trim(line.substr(0, eq));
    if (rec.count(key)) throw FormatError("duplicate key " + key);
    rec[key] = trim(line.substr(eq + 1));
  }
  flush();
  return tasks;
}

void save_tasks(const std::vector<TaskSpec>& tasks,
                const std::filesystem::path& path) {
  write_text_file(path, format_tasks(tasks));
}

std::vector<TaskSpec> load_tasks(const std::filesystem::path& path) {
  return parse_tasks(read_text_file(path));
}

}  // namespace oda::sim
