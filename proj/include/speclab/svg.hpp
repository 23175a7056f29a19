#pragma once

#include <string>

#include "speclab/common.hpp"

namespace speclab {

struct SvgPoint {
  double x = 0.0;
  double y = 0.0;
};

struct SvgLine {
  std::string label;
  std::vector<SvgPoint> pts;
};

// Standalone SVG scatter with linear axes, one circle per point and one
// polyline per overlay line. Throws ValidationError on non-finite input.
void emit_svg_scatter(const std::vector<SvgPoint>& points, const std::vector<SvgLine>& lines,
                      const std::string& x_label, const std::string& y_label,
                      const std::string& path);

}  // namespace speclab
