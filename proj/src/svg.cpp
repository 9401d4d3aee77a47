// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "reenet/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace reenet::svg {
namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 480;
constexpr double kLeft = 70;
constexpr double kRight = 170;  // legend column
constexpr double kTop = 40;
constexpr double kBottom = 60;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

const char* colour(std::size_t i) { return kPalette[i % std::size(kPalette)]; }

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  void pad() {
    if (!std::isfinite(lo)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double margin = 0.05 * (hi - lo);
    lo -= margin;
    hi += margin;
  }
};

// Shared frame: axes, ticks, title and axis labels.
class Canvas {
 public:
  Canvas(Range x, Range y) : x_(x), y_(y) {}

  [[nodiscard]] double px(double v) const {
    return kLeft + (v - x_.lo) / (x_.hi - x_.lo) * (kWidth - kLeft - kRight);
  }
  [[nodiscard]] double py(double v) const {
    return kHeight - kBottom - (v - y_.lo) / (y_.hi - y_.lo) * (kHeight - kTop - kBottom);
  }

  void open(std::ostringstream& out, const std::string& title, const std::string& xl,
            const std::string& yl, bool x_ticks) const {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
        << escape(title) << "</text>\n";
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    out << "<path d=\"M" << x0 << ' ' << y1 << " V" << y0 << " H" << x1
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
      const double v = y_.lo + (y_.hi - y_.lo) * i / 5.0;
      out << "<line x1=\"" << x0 - 4 << "\" x2=\"" << x1 << "\" y1=\"" << num(py(v)) << "\" y2=\""
          << num(py(v)) << "\" stroke=\"#ddd\"/>\n"
          << "<text x=\"" << x0 - 8 << "\" y=\"" << num(py(v) + 4)
          << "\" text-anchor=\"end\">" << tick(v) << "</text>\n";
      if (x_ticks) {
        const double u = x_.lo + (x_.hi - x_.lo) * i / 5.0;
        out << "<text x=\"" << num(px(u)) << "\" y=\"" << y0 + 18
            << "\" text-anchor=\"middle\">" << tick(u) << "</text>\n";
      }
    }
    out << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << kHeight - 15
        << "\" text-anchor=\"middle\">" << escape(xl) << "</text>\n"
        << "<text transform=\"translate(18 " << num((y0 + y1) / 2)
        << ") rotate(-90)\" text-anchor=\"middle\">" << escape(yl) << "</text>\n";
  }

  static void legend(std::ostringstream& out, std::size_t i, const std::string& label) {
    const double y = kTop + 10 + 20.0 * static_cast<double>(i);
    const double x = kWidth - kRight + 15;
    out << "<rect x=\"" << x << "\" y=\"" << y - 9 << "\" width=\"12\" height=\"12\" fill=\""
        << colour(i) << "\"/>\n"
        << "<text x=\"" << x + 18 << "\" y=\"" << y + 1 << "\">" << escape(label) << "</text>\n";
  }

 private:
  Range x_;
  Range y_;
};

}  // namespace

std::string LineChart::render() const {
  Range xr, yr;
  for (const Series& s : series) {
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
  }
  xr.pad();
  yr.pad();
  const Canvas canvas(xr, yr);
  std::ostringstream out;
  canvas.open(out, title, x_label, y_label, true);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const Series& s = series[i];
    const std::size_t n = std::min(s.x.size(), s.y.size());
    std::string path;
    for (std::size_t j = 0; j < n; ++j) {
      path += (j == 0 ? "M" : " L") + num(canvas.px(s.x[j])) + " " + num(canvas.py(s.y[j]));
    }
    out << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << colour(i)
        << "\" stroke-width=\"2\"/>\n";
    for (std::size_t j = 0; j < n; ++j) {
      out << "<circle cx=\"" << num(canvas.px(s.x[j])) << "\" cy=\"" << num(canvas.py(s.y[j]))
          << "\" r=\"3\" fill=\"" << colour(i) << "\"/>\n";
      if (j < s.annotations.size() && !s.annotations[j].empty()) {
        out << "<text x=\"" << num(canvas.px(s.x[j]) + 5) << "\" y=\""
            << num(canvas.py(s.y[j]) - 5) << "\" font-size=\"9\" fill=\"" << colour(i) << "\">"
            << escape(s.annotations[j]) << "</text>\n";
      }
    }
    Canvas::legend(out, i, s.label);
  }
  out << "</svg>\n";
  return out.str();
}

std::string BarChart::render() const {
  Range yr;
  yr.add(0.0);
  for (const BarSeries& s : series) {
    for (double v : s.values) yr.add(v);
  }
  yr.pad();
  yr.lo = 0.0;
  Range xr;
  xr.add(0.0);
  xr.add(static_cast<double>(std::max<std::size_t>(categories.size(), 1)));
  const Canvas canvas(xr, yr);
  std::ostringstream out;
  canvas.open(out, title, x_label, y_label, false);

  const double group = canvas.px(1.0) - canvas.px(0.0);
  const double bar = 0.8 * group / static_cast<double>(std::max<std::size_t>(series.size(), 1));
  for (std::size_t c = 0; c < categories.size(); ++c) {
    const double left = canvas.px(static_cast<double>(c)) + 0.1 * group;
    out << "<text x=\"" << num(left + 0.4 * group) << "\" y=\"" << kHeight - kBottom + 18
        << "\" text-anchor=\"middle\">" << escape(categories[c]) << "</text>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
      const double v = c < series[i].values.size() ? series[i].values[c] : 0.0;
      const double top = canvas.py(v);
      out << "<rect x=\"" << num(left + bar * static_cast<double>(i)) << "\" y=\"" << num(top)
          << "\" width=\"" << num(bar) << "\" height=\"" << num(canvas.py(0.0) - top)
          << "\" fill=\"" << colour(i) << "\"/>\n";
    }
  }
  for (std::size_t i = 0; i < series.size(); ++i) {
    Canvas::legend(out, i, series[i].label);
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace reenet::svg
