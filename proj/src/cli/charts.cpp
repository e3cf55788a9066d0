#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "ncga/cli.hpp"
#include "ncga/error.hpp"

namespace ncga::cli {

namespace {

constexpr double kWidth = 800, kHeight = 500;
constexpr double kLeft = 80, kRight = 150, kTop = 50, kBottom = 60;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

struct Labels {
  const char* title;
  const char* x;
  const char* y;
};

Labels labels(ChartKind kind) {
  switch (kind) {
    case ChartKind::download_time_vs_filesize: return {"Download Time Vs File Size", "File size (blocks)", "Average download time (rounds)"};
    case ChartKind::failure_vs_dynamic_links: return {"Failure rate Vs Number of dynamic links", "Number of dynamic links", "Failure rate"};
    case ChartKind::redundancy_vs_filesize: return {"Packet Redundancy Vs File Size", "File size (blocks)", "Packet redundancy"};
    case ChartKind::throughput_vs_time: return {"System Throughput", "Time (rounds)", "Throughput (bytes/round)"};
  }
  return {"", "", ""};
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string to_string(ChartKind kind) {
  switch (kind) {
    case ChartKind::download_time_vs_filesize: return "download_time_vs_filesize";
    case ChartKind::failure_vs_dynamic_links: return "failure_vs_dynamic_links";
    case ChartKind::redundancy_vs_filesize: return "redundancy_vs_filesize";
    case ChartKind::throughput_vs_time: return "throughput_vs_time";
  }
  return "?";
}

void ChartSpec::validate() const {
  for (const auto& [name, ys] : series) {
    if (ys.size() != x.size()) {
      throw InvalidParams("series " + name + " has " + std::to_string(ys.size()) + " points, x has " +
                          std::to_string(x.size()));
    }
  }
}

std::string render_svg(const ChartSpec& chart) {
  chart.validate();
  const Labels text = labels(chart.kind);

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = 0, y1 = -x0;
  for (double v : chart.x) {
    x0 = std::min(x0, v);
    x1 = std::max(x1, v);
  }
  for (const auto& [name, ys] : chart.series) {
    for (double v : ys) {
      if (std::isfinite(v)) y1 = std::max(y1, v);
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1;
  if (x1 <= x0) x1 = x0 + 1;
  if (!std::isfinite(y1) || y1 <= y0) y1 = y0 + 1;
  y1 *= 1.05;

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (v - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return kTop + ph - (v - y0) / (y1 - y0) * ph; };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" viewBox=\"0 0 800 500\">\n";
  s += "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
  s += "<text x=\"" + coord(kLeft + pw / 2) + "\" y=\"28\" text-anchor=\"middle\" font-size=\"18\">" + text.title +
       "</text>\n";
  s += "<line x1=\"" + coord(kLeft) + "\" y1=\"" + coord(kTop + ph) + "\" x2=\"" + coord(kLeft + pw) + "\" y2=\"" +
       coord(kTop + ph) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + coord(kLeft) + "\" y1=\"" + coord(kTop) + "\" x2=\"" + coord(kLeft) + "\" y2=\"" +
       coord(kTop + ph) + "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double xv = x0 + (x1 - x0) * k / 5, yv = y0 + (y1 - y0) * k / 5;
    s += "<text x=\"" + coord(px(xv)) + "\" y=\"" + coord(kTop + ph + 18) + "\" text-anchor=\"middle\" font-size=\"12\">" +
         num(xv) + "</text>\n";
    s += "<text x=\"" + coord(kLeft - 6) + "\" y=\"" + coord(py(yv) + 4) + "\" text-anchor=\"end\" font-size=\"12\">" +
         num(yv) + "</text>\n";
  }
  s += "<text x=\"" + coord(kLeft + pw / 2) + "\" y=\"" + coord(kHeight - 15) +
       "\" text-anchor=\"middle\" font-size=\"14\">" + text.x + "</text>\n";
  s += "<text x=\"20\" y=\"" + coord(kTop + ph / 2) + "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 " +
       coord(kTop + ph / 2) + ")\">" + text.y + "</text>\n";

  for (std::size_t i = 0; i < chart.series.size(); ++i) {
    const auto& [name, ys] = chart.series[i];
    const std::string color = kColors[i % std::size(kColors)];
    // A NaN splits the series into separate polylines.
    std::string points;
    auto flush = [&] {
      if (!points.empty()) {
        s += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
      }
      points.clear();
    };
    for (std::size_t k = 0; k < ys.size(); ++k) {
      if (!std::isfinite(ys[k])) {
        flush();
        continue;
      }
      if (!points.empty()) points += ' ';
      points += coord(px(chart.x[k])) + "," + coord(py(ys[k]));
    }
    flush();
    const double ly = kTop + 10 + 22 * static_cast<double>(i);
    s += "<line x1=\"" + coord(kWidth - kRight + 15) + "\" y1=\"" + coord(ly) + "\" x2=\"" + coord(kWidth - kRight + 40) +
         "\" y2=\"" + coord(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + coord(kWidth - kRight + 46) + "\" y=\"" + coord(ly + 4) + "\" font-size=\"12\">" + name +
         "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace ncga::cli
