#pragma once

#include "newsflow/simulate.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

/// Minimal SVG charts. Output depends only on the inputs.
namespace newsflow::report {

struct ScatterLayer {
  std::string label;
  std::string color;
  std::vector<double> x, y;
};

struct CurveLayer {
  std::string label;
  std::string color;
  std::vector<double> x, y;
  std::vector<double> lower, upper; ///< optional band, same length as x
};

struct Figure {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<ScatterLayer> scatter;
  std::vector<CurveLayer> curves;
  /// Shaded x-intervals (e.g. where bands separate).
  std::vector<std::pair<double, double>> highlights;
  /// Plot limits; computed from the data when absent.
  std::optional<std::pair<double, double>> x_range, y_range;
  int width = 720;
  int height = 480;
};

std::string render_svg(const Figure& figure);

/// Curve layer from a smoother fit, dropping missing grid points.
CurveLayer curve_from_fit(const simulate::SmootherFit& fit, std::string label, std::string color);

} // namespace newsflow::report
