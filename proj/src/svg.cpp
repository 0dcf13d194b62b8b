#include "ttsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace ttsim::svg {

namespace {

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

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Roughly five "nice" tick positions covering [lo, hi].
std::vector<double> ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> out;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step) out.push_back(t);
  return out;
}

}  // namespace

std::string render(const Chart& chart, int width, int height) {
  const double left = 70, right = 170, top = 40, bottom = 55;
  const double pw = width - left - right, ph = height - top - bottom;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  auto tx = [&](double x) { return chart.log_x ? std::log10(x) : x; };
  for (const auto& s : chart.series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      const double e = s.err.empty() ? 0.0 : s.err[i];
      xmin = std::min(xmin, tx(s.x[i]));
      xmax = std::max(xmax, tx(s.x[i]));
      ymin = std::min(ymin, s.y[i] - e);
      ymax = std::max(ymax, s.y[i] + e);
    }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  auto px = [&](double x) { return left + (tx(x) - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

  std::string o;
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
       std::to_string(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o += "<text x=\"" + fmt(left + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
       escape(chart.title) + "</text>\n";

  for (const auto& b : chart.bands) {
    const double x0 = std::clamp(px(b.x0), left, left + pw), x1 = std::clamp(px(b.x1), left, left + pw);
    if (x1 <= x0) continue;
    o += "<rect x=\"" + fmt(x0) + "\" y=\"" + fmt(top) + "\" width=\"" + fmt(x1 - x0) + "\" height=\"" + fmt(ph) +
         "\" fill=\"" + b.fill + "\"/>\n";
    o += "<text x=\"" + fmt((x0 + x1) / 2) + "\" y=\"" + fmt(top + 14) + "\" text-anchor=\"middle\" fill=\"#555\">" +
         escape(b.label) + "</text>\n";
  }

  o += "<rect x=\"" + fmt(left) + "\" y=\"" + fmt(top) + "\" width=\"" + fmt(pw) + "\" height=\"" + fmt(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ticks(xmin, xmax)) {
    const double x = left + (t - xmin) / (xmax - xmin) * pw;
    o += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(top + ph) + "\" x2=\"" + fmt(x) + "\" y2=\"" + fmt(top + ph + 5) +
         "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(top + ph + 18) + "\" text-anchor=\"middle\">" +
         tick_label(chart.log_x ? std::pow(10.0, t) : t) + "</text>\n";
  }
  for (double t : ticks(ymin, ymax)) {
    o += "<line x1=\"" + fmt(left - 5) + "\" y1=\"" + fmt(py(t)) + "\" x2=\"" + fmt(left) + "\" y2=\"" + fmt(py(t)) +
         "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + fmt(left - 8) + "\" y=\"" + fmt(py(t) + 4) + "\" text-anchor=\"end\">" + tick_label(t) +
         "</text>\n";
  }
  o += "<text x=\"" + fmt(left + pw / 2) + "\" y=\"" + fmt(height - 12.0) + "\" text-anchor=\"middle\">" +
       escape(chart.x_label) + "</text>\n";
  o += "<text transform=\"translate(16," + fmt(top + ph / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
       escape(chart.y_label) + "</text>\n";

  double legend_y = top + 10;
  for (const auto& s : chart.series) {
    const std::string dash = s.dashed ? " stroke-dasharray=\"6,4\"" : "";
    if (s.err.empty()) {
      std::string pts;
      for (std::size_t i = 0; i < s.x.size(); ++i)
        if (std::isfinite(s.y[i])) pts += fmt(px(s.x[i])) + "," + fmt(py(s.y[i])) + " ";
      o += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.8\"" + dash + " points=\"" + pts +
           "\"/>\n";
    } else {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.y[i])) continue;
        const double x = px(s.x[i]);
        o += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(py(s.y[i] - s.err[i])) + "\" x2=\"" + fmt(x) + "\" y2=\"" +
             fmt(py(s.y[i] + s.err[i])) + "\" stroke=\"" + s.color + "\"/>\n";
        o += "<circle cx=\"" + fmt(x) + "\" cy=\"" + fmt(py(s.y[i])) + "\" r=\"2.8\" fill=\"" + s.color + "\"/>\n";
      }
    }
    const double lx = left + pw + 12;
    o += "<line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(legend_y) + "\" x2=\"" + fmt(lx + 22) + "\" y2=\"" +
         fmt(legend_y) + "\" stroke=\"" + s.color + "\" stroke-width=\"2\"" + dash + "/>\n";
    o += "<text x=\"" + fmt(lx + 28) + "\" y=\"" + fmt(legend_y + 4) + "\">" + escape(s.label) + "</text>\n";
    legend_y += 18;
  }
  o += "</svg>\n";
  return o;
}

}  // namespace ttsim::svg
