#pragma once

#include <string>

#include "json.hpp"

namespace infoplane::cli {

// Maps plane coordinates (utility, leakage) to SVG user units. Utility grows
// to the right, leakage grows upward, so the desired corner is bottom-right.
struct PlotTransform {
  double left = 70.0;
  double top = 30.0;
  double width = 540.0;
  double height = 390.0;
  double utility_max = 1.0;
  double leakage_max = 1.0;

  double X(double utility) const { return left + utility / utility_max * width; }
  double Y(double leakage) const { return top + height - leakage / leakage_max * height; }
};

inline constexpr double kSvgWidth = 640.0;
inline constexpr double kSvgHeight = 480.0;

// Axis ranges from the plane bounds and the reported points.
PlotTransform TransformForReport(const nlohmann::json& report);

// Deterministic SVG of a report's plane: shaded region, frontier, vertices
// and labeled points.
std::string RenderSvg(const nlohmann::json& report);

}  // namespace infoplane::cli
