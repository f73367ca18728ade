#pragma once

#include <string>
#include <utility>
#include <vector>

namespace tsched::harness {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

// Minimal self-contained line chart: axes, one polyline per series, legend.
std::string render_line_chart(const std::string& title,
                              const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<Series>& series);

void write_line_chart_file(const std::string& path, const std::string& title,
                           const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<Series>& series);

}  // namespace tsched::harness
