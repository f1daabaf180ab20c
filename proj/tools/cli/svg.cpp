#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace curvfam::cli {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

// Model point to cell coordinates, y flipped.
struct Mapper {
  Viewport view;
  double cell, margin, x0, y0;

  std::pair<double, double> operator()(std::complex<double> p) const {
    const double inner = cell * (1.0 - 2.0 * margin);
    const double s = inner / (2.0 * view.half);
    return {x0 + cell * margin + (p.real() - view.cx + view.half) * s,
            y0 + cell * margin + (view.cy + view.half - p.imag()) * s};
  }
};

void write_path(std::ostream& out, const Path& path, const Mapper& map, const SvgStyle& style, bool dashed) {
  if (path.empty()) return;
  out << "<path d=\"";
  for (std::size_t i = 0; i < path.size(); ++i) {
    const auto [x, y] = map(path[i]);
    out << (i == 0 ? "M" : " L") << num(x) << ' ' << num(y);
  }
  out << "\" fill=\"none\" stroke=\"black\" stroke-width=\"" << num(style.stroke_width) << '"';
  if (dashed) out << " stroke-dasharray=\"" << num(4.0 * style.stroke_width) << ' ' << num(3.0 * style.stroke_width) << '"';
  out << " stroke-linejoin=\"round\"/>\n";
}

void write_cell(std::ostream& out, const SvgFrame& frame, const Mapper& map, const SvgStyle& style) {
  out << "<g>\n";
  if (!frame.title.empty()) out << "<title>" << escape(frame.title) << "</title>\n";
  for (const auto& p : frame.solid) write_path(out, p, map, style, false);
  for (const auto& p : frame.dashed) write_path(out, p, map, style, true);
  out << "</g>\n";
}

void header(std::ostream& out, double width, double height) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
      << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n"
      << "<rect width=\"" << num(width) << "\" height=\"" << num(height) << "\" fill=\"white\"/>\n";
}

}  // namespace

Viewport fit(const std::vector<SvgFrame>& frames) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  const auto take = [&](const Path& path) {
    for (const auto& p : path) {
      xmin = std::min(xmin, p.real());
      xmax = std::max(xmax, p.real());
      ymin = std::min(ymin, p.imag());
      ymax = std::max(ymax, p.imag());
    }
  };
  for (const auto& f : frames) {
    for (const auto& p : f.solid) take(p);
    for (const auto& p : f.dashed) take(p);
  }
  if (!(xmin <= xmax)) return {};
  Viewport v;
  v.cx = 0.5 * (xmin + xmax);
  v.cy = 0.5 * (ymin + ymax);
  v.half = 0.5 * std::max(xmax - xmin, ymax - ymin);
  if (!(v.half > 0.0)) v.half = 1.0;
  return v;
}

std::string render_frame(const SvgFrame& frame, const Viewport& view, const SvgStyle& style) {
  std::ostringstream out;
  header(out, style.cell, style.cell);
  write_cell(out, frame, Mapper{view, style.cell, style.margin, 0.0, 0.0}, style);
  out << "</svg>\n";
  return out.str();
}

std::string render_montage(const std::vector<SvgFrame>& frames, int columns, const Viewport& view,
                           const SvgStyle& style) {
  const auto cols = static_cast<std::size_t>(std::max(1, columns));
  const std::size_t rows = std::max<std::size_t>(1, (frames.size() + cols - 1) / cols);
  std::ostringstream out;
  header(out, style.cell * static_cast<double>(cols), style.cell * static_cast<double>(rows));
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const double x0 = style.cell * static_cast<double>(i % cols);
    const double y0 = style.cell * static_cast<double>(i / cols);
    write_cell(out, frames[i], Mapper{view, style.cell, style.margin, x0, y0}, style);
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace curvfam::cli
