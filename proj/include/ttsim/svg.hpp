#pragma once

#include <string>
#include <vector>

namespace ttsim::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> err;  // half-width of the error bar; empty draws a line instead of points
  std::string color = "#1f77b4";
  bool dashed = false;
};

struct Band {
  double x0 = 0.0;
  double x1 = 0.0;
  std::string label;
  std::string fill = "#eeeeee";
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  std::vector<Band> bands;
  bool log_x = false;
};

// Static SVG, no scripting.
std::string render(const Chart& chart, int width = 720, int height = 440);

}  // namespace ttsim::svg
