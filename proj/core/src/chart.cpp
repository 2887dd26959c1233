#include "wfp/chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace wfp {

namespace {

// Fixed two-decimal coordinates keep the output byte-stable across runs.
std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

struct Frame {
  double x0, y0, x1, y1;  // plot area in SVG coordinates
  double vmin, vmax;      // value range mapped onto the y axis

  double y(double v) const {
    const double t = (v - vmin) / (vmax - vmin);
    return y1 - t * (y1 - y0);
  }
};

void text(std::string& svg, double x, double y, const std::string& s, int size,
          const char* anchor, const char* extra = "") {
  svg += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" +
         std::to_string(size) + "\" font-family=\"sans-serif\" text-anchor=\"" +
         anchor + "\"" + extra + ">" + escape(s) + "</text>\n";
}

void axes_and_ticks(std::string& svg, const ChartSpec& spec, const Frame& f,
                    std::size_t n_positions) {
  svg += "<line x1=\"" + num(f.x0) + "\" y1=\"" + num(f.y1) + "\" x2=\"" + num(f.x1) +
         "\" y2=\"" + num(f.y1) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + num(f.x0) + "\" y1=\"" + num(f.y0) + "\" x2=\"" + num(f.x0) +
         "\" y2=\"" + num(f.y1) + "\" stroke=\"black\"/>\n";

  for (int k = 0; k <= 4; ++k) {
    const double v = f.vmin + (f.vmax - f.vmin) * k / 4.0;
    const double y = f.y(v);
    svg += "<line x1=\"" + num(f.x0 - 4) + "\" y1=\"" + num(y) + "\" x2=\"" + num(f.x0) +
           "\" y2=\"" + num(y) + "\" stroke=\"black\"/>\n";
    char label[64];
    std::snprintf(label, sizeof(label), "%.4g", v);
    text(svg, f.x0 - 8, y + 4, label, 11, "end");
  }

  if (!spec.x_ticks.empty()) {
    const double slot = (f.x1 - f.x0) / static_cast<double>(n_positions);
    const std::size_t stride =
        std::max<std::size_t>(1, spec.x_ticks.size() / 16);  // avoid label pileup
    for (std::size_t i = 0; i < spec.x_ticks.size(); i += stride) {
      const double x = f.x0 + slot * (static_cast<double>(i) + 0.5);
      text(svg, x, f.y1 + 16, spec.x_ticks[i], 11, "middle");
    }
  }
  text(svg, (f.x0 + f.x1) / 2, f.y1 + 34, spec.x_label, 12, "middle");
  text(svg, 16, (f.y0 + f.y1) / 2, spec.y_label, 12, "middle",
       (" transform=\"rotate(-90 16 " + num((f.y0 + f.y1) / 2) + ")\"").c_str());
}

void legend(std::string& svg, const ChartSpec& spec, const Frame& f) {
  if (spec.series.size() < 2) return;
  double y = f.y0 + 6;
  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    svg += "<rect x=\"" + num(f.x1 - 150) + "\" y=\"" + num(y) +
           "\" width=\"12\" height=\"12\" fill=\"" + color + "\"/>\n";
    text(svg, f.x1 - 132, y + 10, spec.series[s].name, 11, "start");
    y += 18;
  }
}

void render_bar(std::string& svg, const ChartSpec& spec, const Frame& f) {
  const std::size_t n = spec.series[0].values.size();
  const std::size_t groups = spec.series.size();
  const double slot = (f.x1 - f.x0) / static_cast<double>(n);
  const double bar = slot * 0.8 / static_cast<double>(groups);
  for (std::size_t s = 0; s < groups; ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    for (std::size_t i = 0; i < n; ++i) {
      const double v = spec.series[s].values[i];
      const double x =
          f.x0 + slot * static_cast<double>(i) + slot * 0.1 + bar * static_cast<double>(s);
      const double ytop = f.y(std::max(v, 0.0));
      const double ybase = f.y(std::max(f.vmin, 0.0));
      svg += "<rect x=\"" + num(x) + "\" y=\"" + num(std::min(ytop, f.y(std::min(v, 0.0)))) +
             "\" width=\"" + num(bar) + "\" height=\"" + num(std::abs(ybase - ytop)) +
             "\" fill=\"" + color + "\"/>\n";
    }
  }
}

void render_line(std::string& svg, const ChartSpec& spec, const Frame& f) {
  const std::size_t n = spec.series[0].values.size();
  const double slot = (f.x1 - f.x0) / static_cast<double>(n);
  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    std::string points;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = f.x0 + slot * (static_cast<double>(i) + 0.5);
      points += num(x) + "," + num(f.y(spec.series[s].values[i])) + " ";
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
  }
}

void render_heatmap(std::string& svg, const ChartSpec& spec, const Frame& f,
                    double vmin, double vmax) {
  const std::size_t rows = spec.series.size();
  const std::size_t cols = spec.series[0].values.size();
  const double cw = (f.x1 - f.x0) / static_cast<double>(cols);
  const double ch = (f.y1 - f.y0) / static_cast<double>(rows);
  const double span = vmax > vmin ? vmax - vmin : 1.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = spec.series[r].values[c];
      const double t = std::clamp((v - vmin) / span, 0.0, 1.0);
      // White (low) to saturated red (high).
      const int g = static_cast<int>(std::lround(255.0 * (1.0 - t)));
      char fill[16];
      std::snprintf(fill, sizeof(fill), "#ff%02x%02x", g, g);
      const double x = f.x0 + cw * static_cast<double>(c);
      const double y = f.y0 + ch * static_cast<double>(r);
      svg += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(cw) +
             "\" height=\"" + num(ch) + "\" fill=\"" + fill +
             "\" stroke=\"#cccccc\"/>\n";
      char label[64];
      std::snprintf(label, sizeof(label), "%.3g", v);
      text(svg, x + cw / 2, y + ch / 2 + 4, label, 10, "middle");
    }
    text(svg, f.x0 - 8, f.y0 + ch * (static_cast<double>(r) + 0.5) + 4,
         spec.series[r].name, 11, "end");
  }
}

}  // namespace

void render_chart(const ChartSpec& spec, const std::filesystem::path& path) {
  if (spec.series.empty()) throw std::invalid_argument("render_chart: no series");
  const std::size_t n = spec.series[0].values.size();
  if (n == 0) throw std::invalid_argument("render_chart: empty series");
  for (const auto& s : spec.series) {
    if (s.values.size() != n) {
      throw std::invalid_argument("render_chart: series lengths differ");
    }
  }
  if (!spec.x_ticks.empty() && spec.x_ticks.size() != n) {
    throw std::invalid_argument("render_chart: x_ticks length does not match series");
  }
  if (spec.width < 100 || spec.height < 100) {
    throw std::invalid_argument("render_chart: canvas too small");
  }

  double vmin = spec.series[0].values[0], vmax = vmin;
  for (const auto& s : spec.series) {
    for (double v : s.values) {
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  }
  if (spec.kind != ChartSpec::Kind::heatmap) {
    vmin = std::min(vmin, 0.0);  // anchor bars and lines at zero
    if (vmax <= vmin) vmax = vmin + 1.0;
  }

  Frame f;
  f.x0 = 70;
  f.y0 = 40;
  f.x1 = static_cast<double>(spec.width) - 20;
  f.y1 = static_cast<double>(spec.height) - 50;
  f.vmin = vmin;
  f.vmax = vmax;

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(spec.width) + "\" height=\"" + std::to_string(spec.height) +
         "\" viewBox=\"0 0 " + std::to_string(spec.width) + " " +
         std::to_string(spec.height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  text(svg, static_cast<double>(spec.width) / 2, 24, spec.title, 14, "middle");

  switch (spec.kind) {
    case ChartSpec::Kind::bar:
      axes_and_ticks(svg, spec, f, n);
      render_bar(svg, spec, f);
      legend(svg, spec, f);
      break;
    case ChartSpec::Kind::line:
      axes_and_ticks(svg, spec, f, n);
      render_line(svg, spec, f);
      legend(svg, spec, f);
      break;
    case ChartSpec::Kind::heatmap:
      render_heatmap(svg, spec, f, vmin, vmax);
      text(svg, (f.x0 + f.x1) / 2, f.y1 + 34, spec.x_label, 12, "middle");
      if (!spec.x_ticks.empty()) {
        const double cw = (f.x1 - f.x0) / static_cast<double>(n);
        for (std::size_t i = 0; i < spec.x_ticks.size(); ++i) {
          text(svg, f.x0 + cw * (static_cast<double>(i) + 0.5), f.y1 + 16,
               spec.x_ticks[i], 11, "middle");
        }
      }
      break;
  }
  svg += "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << svg;
  if (!out) throw std::runtime_error("short write: " + path.string());
}

}  // namespace wfp
