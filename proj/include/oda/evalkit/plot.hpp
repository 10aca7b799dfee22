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

#include <string>
#include <vector>

namespace oda::evalkit {

struct BarSeries {
  std::string name;
  std::vector<double> values;  // one per category
};

// Grouped bar chart as a standalone SVG document.
std::string svg_bar_chart(const std::string& title,
                          const std::vector<std::string>& categories,
                          const std::vector<BarSeries>& series,
                          const std::string& y_label, double y_max);

struct LineSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> err;  // optional symmetric error bars
};

std::string svg_line_chart(const std::string& title,
                           const std::vector<LineSeries>& series,
                           const std::string& x_label,
                           const std::string& y_label, double y_max);

}  // namespace oda::evalkit
