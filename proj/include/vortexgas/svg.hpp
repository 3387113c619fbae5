#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "vortexgas/common.hpp"
#include "vortexgas/detail/format.hpp"
#include "vortexgas/point_vortex.hpp"

namespace vortexgas {

struct SvgStyle {
  double width = 640.0;
  double height = 640.0;
  double stroke_width = 1.5;
  std::vector<std::string> colors = {"#1b6ca8", "#c0392b", "#2e8b57", "#8e44ad",
                                     "#d4820a", "#16727c", "#7f8c8d"};
};

/// Minimal SVG track plot: one polyline per vortex, viewBox fitted to the
/// data with a 5% margin. Byte output is deterministic for identical inputs.
inline std::string export_tracks_svg(const Trajectory& traj, const SvgStyle& style = {}) {
  require(traj.n_samples() > 0 && traj.n_vortices > 0, errc::validation, "empty trajectory");

  double lx = traj.positions[0].x, hx = lx, ly = traj.positions[0].y, hy = ly;
  for (const auto& p : traj.positions) {
    lx = std::min(lx, p.x);
    hx = std::max(hx, p.x);
    ly = std::min(ly, p.y);
    hy = std::max(hy, p.y);
  }
  const double mx = std::max(hx - lx, 1e-12) * 0.05;
  const double my = std::max(hy - ly, 1e-12) * 0.05;
  lx -= mx;
  hx += mx;
  ly -= my;
  hy += my;

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::format_double(style.width) +
         "\" height=\"" + detail::format_double(style.height) + "\" viewBox=\"" +
         detail::format_double(lx) + " " + detail::format_double(-hy) + " " +
         detail::format_double(hx - lx) + " " + detail::format_double(hy - ly) + "\">\n";
  for (std::size_t v = 0; v < traj.n_vortices; ++v) {
    const std::string& color = style.colors[v % style.colors.size()];
    svg += "  <polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
           detail::format_double(style.stroke_width * (hx - lx) / style.width) + "\" points=\"";
    for (std::size_t s = 0; s < traj.n_samples(); ++s) {
      const Vec2 p = traj.position(s, v);
      if (s) svg += ' ';
      svg += detail::format_double(p.x) + "," + detail::format_double(-p.y);  // y up
    }
    svg += "\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

inline void write_tracks_svg(const Trajectory& traj, const std::filesystem::path& path,
                             const SvgStyle& style = {}) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io, "cannot write " + path.string());
  out << export_tracks_svg(traj, style);
}

}  // namespace vortexgas
