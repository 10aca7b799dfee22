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

#include <filesystem>
#include <string>
#include <vector>

namespace oda::evalkit {

struct ReportSummary {
  std::vector<std::string> written;  // paths relative to the report dir
  std::vector<std::string> missing;  // expected inputs that were absent
};

// Reads whatever study outputs exist under out_dir, recomputes every
// success rate from the per-episode records and writes summary CSVs, SVG
// plots and summary.md under <out_dir>/report. Throws FormatError when a
// stored success rate disagrees with its episode records. Rerunning on the
// same inputs rewrites identical bytes.
ReportSummary write_report(const std::filesystem::path& out_dir);

}  // namespace oda::evalkit
