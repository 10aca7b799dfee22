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

#include "oda/evalkit/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace oda::evalkit {
namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 60, kRight = 150, kTop = 40, kBottom = 50;
constexpr const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c",
                                   "#d62728", "#9467bd", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double plot_w = kWidth - kLeft - kRight;
  double plot_h = kHeight - kTop - kBottom;
  double y_max = 1.0;
  double y(double v) const { return kTop + plot_h * (1.0 - v / y_max); }
};

void open_svg(std::ostringstream& out, const std::string& title,
              const Frame& f, const std::string& y_label) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\" "
      << "font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-size=\"15\">" << escape(title) << "</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = f.y_max * i / 4.0;
    out << "<line x1=\"" << num(kLeft) << "\" x2=\"" << num(kLeft + f.plot_w)
        << "\" y1=\"" << num(f.y(v)) << "\" y2=\"" << num(f.y(v))
        << "\" stroke=\"#ddd\"/>\n"
        << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(f.y(v) + 4)
        << "\" text-anchor=\"end\">" << num(v) << "</text>\n";
  }
  out << "<text transform=\"translate(16," << num(kTop + f.plot_h / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label)
      << "</text>\n";
}

void legend(std::ostringstream& out, const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double y = kTop + 18.0 * static_cast<double>(i);
    out << "<rect x=\"" << num(kWidth - kRight + 15) << "\" y=\"" << num(y)
        << "\" width=\"12\" height=\"12\" fill=\"" << kColors[i % 6]
        << "\"/>\n<text x=\"" << num(kWidth - kRight + 32) << "\" y=\""
        << num(y + 10) << "\">" << escape(names[i]) << "</text>\n";
  }
}

}  // namespace

std::string svg_bar_chart(const std::string& title,
                          const std::vector<std::string>& categories,
                          const std::vector<BarSeries>& series,
                          const std::string& y_label, double y_max) {
  Frame f;
  f.y_max = y_max > 0.0 ? y_max : 1.0;
  std::ostringstream out;
  open_svg(out, title, f, y_label);
  const double group_w = f.plot_w / static_cast<double>(std::max<std::size_t>(1, categories.size()));
  const double bar_w =
      0.8 * group_w / static_cast<double>(std::max<std::size_t>(1, series.size()));
  for (std::size_t c = 0; c < categories.size(); ++c) {
    const double x0 = kLeft + group_w * static_cast<double>(c) + 0.1 * group_w;
    for (std::size_t s = 0; s < series.size(); ++s) {
      const double v = std::clamp(series[s].values.at(c), 0.0, f.y_max);
      out << "<rect x=\"" << num(x0 + bar_w * static_cast<double>(s))
          << "\" y=\"" << num(f.y(v)) << "\" width=\"" << num(bar_w)
          << "\" height=\"" << num(f.y(0) - f.y(v)) << "\" fill=\""
          << kColors[s % 6] << "\"/>\n";
    }
    out << "<text x=\"" << num(x0 + 0.4 * group_w) << "\" y=\""
        << num(kTop + f.plot_h + 18) << "\" text-anchor=\"middle\">"
        << escape(categories[c]) << "</text>\n";
  }
  std::vector<std::string> names;
  for (const auto& s : series) names.push_back(s.name);
  legend(out, names);
  out << "</svg>\n";
  return out.str();
}

std::string svg_line_chart(const std::string& title,
                           const std::vector<LineSeries>& series,
                           const std::string& x_label,
                           const std::string& y_label, double y_max) {
  Frame f;
  f.y_max = y_max > 0.0 ? y_max : 1.0;
  double x_min = 0.0, x_max = 1.0;
  bool first = true;
  for (const auto& s : series) {
    for (double x : s.x) {
      if (first) {
        x_min = x_max = x;
        first = false;
      }
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
    }
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  auto px = [&](double x) {
    return kLeft + f.plot_w * (x - x_min) / (x_max - x_min);
  };
  std::ostringstream out;
  open_svg(out, title, f, y_label);
  for (int i = 0; i <= 4; ++i) {
    const double x = x_min + (x_max - x_min) * i / 4.0;
    out << "<text x=\"" << num(px(x)) << "\" y=\"" << num(kTop + f.plot_h + 18)
        << "\" text-anchor=\"middle\">" << num(x) << "</text>\n";
  }
  out << "<text x=\"" << num(kLeft + f.plot_w / 2) << "\" y=\""
      << num(kHeight - 10) << "\" text-anchor=\"middle\">" << escape(x_label)
      << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& ls = series[s];
    const char* color = kColors[s % 6];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < ls.x.size(); ++i) {
      out << (i ? " " : "") << num(px(ls.x[i])) << ","
          << num(f.y(std::clamp(ls.y[i], 0.0, f.y_max)));
    }
    out << "\"/>\n";
    for (std::size_t i = 0; i < ls.err.size() && i < ls.x.size(); ++i) {
      const double lo = std::clamp(ls.y[i] - ls.err[i], 0.0, f.y_max);
      const double hi = std::clamp(ls.y[i] + ls.err[i], 0.0, f.y_max);
      out << "<line x1=\"" << num(px(ls.x[i])) << "\" x2=\"" << num(px(ls.x[i]))
          << "\" y1=\"" << num(f.y(lo)) << "\" y2=\"" << num(f.y(hi))
          << "\" stroke=\"" << color << "\"/>\n";
    }
  }
  std::vector<std::string> names;
  for (const auto& s : series) names.push_back(s.name);
  legend(out, names);
  out << "</svg>\n";
  return out.str();
}

}  // namespace oda::evalkit
