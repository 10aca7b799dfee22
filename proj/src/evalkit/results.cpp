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

#include "oda/evalkit/results.hpp"

#include <sstream>

#include "oda/common/error.hpp"
#include "oda/common/io.hpp"

namespace oda::evalkit {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename F>
void for_each_record(const std::string& text, const std::string& header,
                     std::size_t n_fields, F f) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw FormatError("unexpected CSV header: '" + line + "'");
  }
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != n_fields) {
      throw FormatError("CSV line " + std::to_string(line_no) + ": expected " +
                        std::to_string(n_fields) + " fields");
    }
    try {
      f(fields);
    } catch (const std::logic_error& e) {
      throw FormatError("CSV line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

const char kResultHeader[] =
    "method,task_id,phase,success_rate,successes,n_eval,online_episodes_used,"
    "env_steps,solved";
const char kEpisodeHeader[] = "method,task_id,phase,episode,seed,success,length";

}  // namespace

const char* to_string(Phase p) {
  return p == Phase::kAdapt ? "adapt" : "finetune";
}

Phase phase_from_string(const std::string& s) {
  if (s == "adapt") return Phase::kAdapt;
  if (s == "finetune") return Phase::kFinetune;
  throw FormatError("unknown phase '" + s + "'");
}

void ResultTable::add(ResultRow row) {
  if (find(row.method, row.task_id, row.phase)) {
    throw ContractError("duplicate result row for " + row.method + ", task " +
                        std::to_string(row.task_id) + ", " +
                        to_string(row.phase));
  }
  if (row.n_eval < 1 || row.successes < 0 || row.successes > row.n_eval ||
      row.success_rate != static_cast<double>(row.successes) /
                              static_cast<double>(row.n_eval)) {
    throw ContractError("inconsistent success counts for " + row.method);
  }
  rows_.push_back(std::move(row));
}

const ResultRow* ResultTable::find(const std::string& method, int task_id,
                                   Phase phase) const {
  for (const ResultRow& r : rows_) {
    if (r.method == method && r.task_id == task_id && r.phase == phase) {
      return &r;
    }
  }
  return nullptr;
}

std::string ResultTable::to_csv() const {
  std::ostringstream out;
  out << kResultHeader << "\n";
  for (const ResultRow& r : rows_) {
    out << r.method << ',' << r.task_id << ',' << to_string(r.phase) << ','
        << format_double(r.success_rate) << ',' << r.successes << ','
        << r.n_eval << ',' << r.online_episodes_used << ',' << r.env_steps
        << ',' << (r.solved ? 1 : 0) << "\n";
  }
  return out.str();
}

ResultTable ResultTable::from_csv(const std::string& text) {
  ResultTable t;
  for_each_record(text, kResultHeader, 9, [&](const auto& f) {
    ResultRow r;
    r.method = f[0];
    r.task_id = std::stoi(f[1]);
    r.phase = phase_from_string(f[2]);
    r.success_rate = parse_double(f[3]);
    r.successes = std::stoi(f[4]);
    r.n_eval = std::stoi(f[5]);
    r.online_episodes_used = std::stoi(f[6]);
    r.env_steps = std::stol(f[7]);
    r.solved = f[8] == "1";
    t.add(std::move(r));
  });
  return t;
}

ResultRow make_row(std::string method, int task_id, Phase phase,
                   const meta::EvalResult& eval, int online_episodes,
                   long env_steps, bool solved) {
  ResultRow r;
  r.method = std::move(method);
  r.task_id = task_id;
  r.phase = phase;
  r.successes = eval.successes;
  r.n_eval = eval.n_episodes;
  r.success_rate = eval.success_rate;
  r.online_episodes_used = online_episodes;
  r.env_steps = env_steps;
  r.solved = solved;
  return r;
}

void append_episode_lines(std::vector<EpisodeLine>& out,
                          const std::string& method, int task_id, Phase phase,
                          const meta::EvalResult& eval) {
  for (const meta::EpisodeRecord& rec : eval.records) {
    out.push_back({method, task_id, phase, rec});
  }
}

std::string episodes_to_csv(std::span<const EpisodeLine> lines) {
  std::ostringstream out;
  out << kEpisodeHeader << "\n";
  for (const EpisodeLine& l : lines) {
    out << l.method << ',' << l.task_id << ',' << to_string(l.phase) << ','
        << l.record.episode << ',' << l.record.seed << ','
        << (l.record.success ? 1 : 0) << ',' << l.record.length << "\n";
  }
  return out.str();
}

std::vector<EpisodeLine> episodes_from_csv(const std::string& text) {
  std::vector<EpisodeLine> out;
  for_each_record(text, kEpisodeHeader, 7, [&](const auto& f) {
    EpisodeLine l;
    l.method = f[0];
    l.task_id = std::stoi(f[1]);
    l.phase = phase_from_string(f[2]);
    l.record.episode = std::stoi(f[3]);
    l.record.seed = std::stoull(f[4]);
    l.record.success = f[5] == "1";
    l.record.length = std::stoi(f[6]);
    out.push_back(std::move(l));
  });
  return out;
}

}  // namespace oda::evalkit
