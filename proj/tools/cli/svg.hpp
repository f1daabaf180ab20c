#pragma once

#include <complex>
#include <string>
#include <vector>

namespace curvfam::cli {

using Path = std::vector<std::complex<double>>;

struct SvgFrame {
  std::vector<Path> solid;
  std::vector<Path> dashed;
  std::string title;
};

struct SvgStyle {
  double cell = 400.0;  // side of one frame in user units
  double margin = 0.05;  // fraction of the cell left blank on each side
  double stroke_width = 1.5;
};

/// Axis-aligned box in model coordinates, enlarged to a square.
struct Viewport {
  double cx = 0.0, cy = 0.0, half = 1.0;
};

/// Smallest square box holding every point of every frame.
Viewport fit(const std::vector<SvgFrame>& frames);

/// A single frame.
std::string render_frame(const SvgFrame& frame, const Viewport& view, const SvgStyle& style);

/// Frames laid out row by row, `columns` per row.
std::string render_montage(const std::vector<SvgFrame>& frames, int columns, const Viewport& view,
                           const SvgStyle& style);

}  // namespace curvfam::cli
