#include "speclab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace speclab {

namespace {

constexpr double kW = 640.0, kH = 480.0;
constexpr double kML = 70.0, kMR = 20.0, kMT = 20.0, kMB = 50.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

void emit_svg_scatter(const std::vector<SvgPoint>& points, const std::vector<SvgLine>& lines,
                      const std::string& x_label, const std::string& y_label,
                      const std::string& path) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  auto absorb = [&](const SvgPoint& p) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw ValidationError("svg: non-finite coordinate");
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  };
  for (const auto& p : points) absorb(p);
  for (const auto& l : lines)
    for (const auto& p : l.pts) absorb(p);
  if (x0 > x1) {  // nothing to plot: default frame
    x0 = 0.0; x1 = 1.0; y0 = 0.0; y1 = 1.0;
  }
  if (x1 - x0 < 1e-300) { x0 -= 0.5; x1 += 0.5; }
  if (y1 - y0 < 1e-300) { y0 -= 0.5; y1 += 0.5; }
  const double padx = 0.05 * (x1 - x0), pady = 0.05 * (y1 - y0);
  x0 -= padx; x1 += padx; y0 -= pady; y1 += pady;

  auto px = [&](double x) { return kML + (x - x0) / (x1 - x0) * (kW - kML - kMR); };
  auto py = [&](double y) { return kH - kMB - (y - y0) / (y1 - y0) * (kH - kMT - kMB); };

  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // axes
  out << "<line x1=\"" << kML << "\" y1=\"" << kH - kMB << "\" x2=\"" << kW - kMR << "\" y2=\""
      << kH - kMB << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kML << "\" y1=\"" << kMT << "\" x2=\"" << kML << "\" y2=\""
      << kH - kMB << "\" stroke=\"black\"/>\n";
  // ticks
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0;
    const double yv = y0 + (y1 - y0) * i / 4.0;
    out << "<line x1=\"" << px(xv) << "\" y1=\"" << kH - kMB << "\" x2=\"" << px(xv)
        << "\" y2=\"" << kH - kMB + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << px(xv) << "\" y=\"" << kH - kMB + 18
        << "\" font-size=\"11\" text-anchor=\"middle\">" << num(xv) << "</text>\n";
    out << "<line x1=\"" << kML - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << kML << "\" y2=\""
        << py(yv) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kML - 8 << "\" y=\"" << py(yv) + 4
        << "\" font-size=\"11\" text-anchor=\"end\">" << num(yv) << "</text>\n";
  }
  out << "<text x=\"" << (kML + kW - kMR) / 2 << "\" y=\"" << kH - 12
      << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label << "</text>\n";
  out << "<text x=\"14\" y=\"" << (kMT + kH - kMB) / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << (kMT + kH - kMB) / 2 << ")\">" << y_label << "</text>\n";

  for (const auto& l : lines) {
    out << "<polyline fill=\"none\" stroke=\"#777777\" stroke-width=\"1\" points=\"";
    for (const auto& p : l.pts) out << px(p.x) << "," << py(p.y) << " ";
    out << "\"><title>" << l.label << "</title></polyline>\n";
  }
  for (const auto& p : points)
    out << "<circle cx=\"" << px(p.x) << "\" cy=\"" << py(p.y)
        << "\" r=\"3\" fill=\"#c02020\"/>\n";
  out << "</svg>\n";
  if (!out) throw ValidationError("write failure on '" + path + "'");
}

}  // namespace speclab
