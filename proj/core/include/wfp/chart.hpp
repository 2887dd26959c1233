#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace wfp {

struct Series {
  std::string name;
  std::vector<double> values;
};

struct ChartSpec {
  enum class Kind { bar, line, heatmap };
  Kind kind = Kind::bar;
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<std::string> x_ticks;  // one per position; may be empty
  std::vector<Series> series;        // heatmap: one series per matrix row
  int width = 960;
  int height = 540;
};

/// Renders a standalone SVG. The spec is validated (non-empty, equal-length
/// series) before the file is created, so errors never leave partial output.
void render_chart(const ChartSpec& spec, const std::filesystem::path& path);

}  // namespace wfp
