#include "tenantsched/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tsched::harness {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 760.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 420.0;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                         "#ff7f0e", "#9467bd", "#8c564b"};

std::string fmt2(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_line_chart(const std::string& title,
                              const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<Series>& series) {
  double x_min = std::numeric_limits<double>::infinity();
  double x_max = -x_min, y_min = x_min, y_max = -x_min;
  for (const Series& s : series) {
    for (const auto& [x, y] : s.points) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  }
  if (!std::isfinite(x_min)) {
    x_min = 0.0;
    x_max = 1.0;
    y_min = 0.0;
    y_max = 1.0;
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) {
    y_max += 0.5;
    y_min -= 0.5;
  }
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  auto sx = [&](double x) {
    return kLeft + (x - x_min) / (x_max - x_min) * (kRight - kLeft);
  };
  auto sy = [&](double y) {
    return kBottom - (y - y_min) / (y_max - y_min) * (kBottom - kTop);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n";
  svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2
      << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"17\">"
      << escape(title) << "</text>\n";

  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight
      << "\" y2=\"" << kBottom << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kBottom << "\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double fx = x_min + (x_max - x_min) * i / 4.0;
    const double px = sx(fx);
    svg << "<line x1=\"" << fmt2(px) << "\" y1=\"" << kBottom << "\" x2=\""
        << fmt2(px) << "\" y2=\"" << kBottom + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fmt2(px) << "\" y=\"" << kBottom + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">"
        << fmt_tick(fx) << "</text>\n";
    const double fy = y_min + (y_max - y_min) * i / 4.0;
    const double py = sy(fy);
    svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << fmt2(py) << "\" x2=\""
        << kLeft << "\" y2=\"" << fmt2(py) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << kLeft - 9 << "\" y=\"" << fmt2(py + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"12\">"
        << fmt_tick(fy) << "</text>\n";
  }

  svg << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">"
      << escape(x_label) << "</text>\n";
  svg << "<text x=\"18\" y=\"" << (kTop + kBottom) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 18 "
      << (kTop + kBottom) / 2 << ")\">" << escape(y_label) << "</text>\n";

  const std::size_t n_colors = sizeof(kColors) / sizeof(kColors[0]);
  for (std::size_t si = 0; si < series.size(); ++si) {
    const Series& s = series[si];
    const char* color = kColors[si % n_colors];
    if (!s.points.empty()) {
      svg << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.8\" points=\"";
      for (std::size_t i = 0; i < s.points.size(); ++i) {
        if (i > 0) svg << ' ';
        svg << fmt2(sx(s.points[i].first)) << ',' << fmt2(sy(s.points[i].second));
      }
      svg << "\"/>\n";
    }
    const double ly = kTop + 16.0 * static_cast<double>(si);
    svg << "<line x1=\"" << kRight - 150 << "\" y1=\"" << fmt2(ly) << "\" x2=\""
        << kRight - 126 << "\" y2=\"" << fmt2(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"1.8\"/>\n";
    svg << "<text x=\"" << kRight - 120 << "\" y=\"" << fmt2(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(s.label)
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_line_chart_file(const std::string& path, const std::string& title,
                           const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<Series>& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write chart '" + path + "'");
  out << render_line_chart(title, x_label, y_label, series);
  if (!out.flush()) {
    throw std::runtime_error("failed writing chart '" + path + "'");
  }
}

}  // namespace tsched::harness
