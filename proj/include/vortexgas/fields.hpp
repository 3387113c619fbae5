#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "vortexgas/common.hpp"

namespace vortexgas {

/// Uniform 2D grid of scalars, row-major with index iy * nx + ix.
/// Node (ix, iy) sits at (x0 + ix*dx, y0 + iy*dy); units are SI throughout.
struct Grid2D {
  int nx = 0;
  int ny = 0;
  double dx = 0.0;
  double dy = 0.0;
  double x0 = 0.0;
  double y0 = 0.0;
  std::vector<double> values;

  Grid2D() = default;
  Grid2D(int nx_, int ny_, double dx_, double dy_, double x0_ = 0.0, double y0_ = 0.0)
      : nx(nx_), ny(ny_), dx(dx_), dy(dy_), x0(x0_), y0(y0_), values(static_cast<std::size_t>(nx_) * ny_, 0.0) {
    validate_geometry();
  }

  void validate_geometry() const {
    require(nx >= 2 && ny >= 2, errc::geometry, "grid needs nx, ny >= 2");
    require(dx > 0.0 && dy > 0.0, errc::geometry, "grid spacing must be positive");
    require(values.size() == static_cast<std::size_t>(nx) * ny, errc::geometry,
            "value array length must equal nx*ny");
  }

  double& at(int ix, int iy) { return values[static_cast<std::size_t>(iy) * nx + ix]; }
  double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * nx + ix]; }

  double x_of(int ix) const { return x0 + ix * dx; }
  double y_of(int iy) const { return y0 + iy * dy; }
  double width() const { return (nx - 1) * dx; }
  double height() const { return (ny - 1) * dy; }

  bool same_geometry(const Grid2D& o) const {
    return nx == o.nx && ny == o.ny && dx == o.dx && dy == o.dy && x0 == o.x0 && y0 == o.y0;
  }

  /// Index of the node nearest to (x, y), clamped to the grid.
  std::pair<int, int> nearest_node(double x, double y) const {
    int ix = static_cast<int>(std::lround((x - x0) / dx));
    int iy = static_cast<int>(std::lround((y - y0) / dy));
    ix = std::max(0, std::min(nx - 1, ix));
    iy = std::max(0, std::min(ny - 1, iy));
    return {ix, iy};
  }
};

enum class Quantity { vorticity, generic };

inline const char* quantity_name(Quantity q) {
  return q == Quantity::vorticity ? "vorticity" : "generic";
}
inline const char* quantity_units(Quantity q) {
  return q == Quantity::vorticity ? "s^-1" : "";
}

struct ScalarField2D {
  Grid2D grid;
  Quantity quantity = Quantity::generic;

  ScalarField2D() = default;
  ScalarField2D(Grid2D g, Quantity q) : grid(std::move(g)), quantity(q) { validate(); }

  void validate() const {
    grid.validate_geometry();
    for (double v : grid.values)
      require(std::isfinite(v), errc::validation, "scalar field has non-finite values");
  }

  double max_value() const {
    double m = grid.values[0];
    for (double v : grid.values) m = std::max(m, v);
    return m;
  }
  double min_value() const {
    double m = grid.values[0];
    for (double v : grid.values) m = std::min(m, v);
    return m;
  }
};

/// Planar velocity field; u and v share one geometry, m/s.
struct VectorField2D {
  Grid2D u;
  Grid2D v;

  VectorField2D() = default;
  VectorField2D(Grid2D u_, Grid2D v_) : u(std::move(u_)), v(std::move(v_)) { validate(); }

  void validate() const {
    u.validate_geometry();
    v.validate_geometry();
    require(u.same_geometry(v), errc::geometry, "u and v grids differ");
    for (double w : u.values)
      require(std::isfinite(w), errc::validation, "u has non-finite values");
    for (double w : v.values)
      require(std::isfinite(w), errc::validation, "v has non-finite values");
  }
};

/// Vertical vorticity zeta = dv/dx - du/dy. Centered differences inside,
/// first-order one-sided stencils on the boundary rows/columns.
inline ScalarField2D curl_z(const VectorField2D& field) {
  field.validate();
  const Grid2D& u = field.u;
  const Grid2D& v = field.v;
  require(u.nx >= 3 && u.ny >= 3, errc::geometry, "curl_z needs nx, ny >= 3");

  Grid2D out(u.nx, u.ny, u.dx, u.dy, u.x0, u.y0);
  auto dvdx = [&](int ix, int iy) {
    if (ix == 0) return (v.at(1, iy) - v.at(0, iy)) / v.dx;
    if (ix == v.nx - 1) return (v.at(ix, iy) - v.at(ix - 1, iy)) / v.dx;
    return (v.at(ix + 1, iy) - v.at(ix - 1, iy)) / (2.0 * v.dx);
  };
  auto dudy = [&](int ix, int iy) {
    if (iy == 0) return (u.at(ix, 1) - u.at(ix, 0)) / u.dy;
    if (iy == u.ny - 1) return (u.at(ix, iy) - u.at(ix, iy - 1)) / u.dy;
    return (u.at(ix, iy + 1) - u.at(ix, iy - 1)) / (2.0 * u.dy);
  };
  for (int iy = 0; iy < u.ny; ++iy)
    for (int ix = 0; ix < u.nx; ++ix) out.at(ix, iy) = dvdx(ix, iy) - dudy(ix, iy);

  return ScalarField2D(std::move(out), Quantity::vorticity);
}

namespace detail_fields {

/// Snapped vortex center: nearest node to the grid midpoint (or to an
/// explicit request). Keeps generated fields exactly symmetric under 90-degree
/// rotations about the center.
inline Vec2 snapped_center(const Grid2D& g, const Vec2* want = nullptr) {
  const double cx = want ? want->x : g.x0 + 0.5 * g.width();
  const double cy = want ? want->y : g.y0 + 0.5 * g.height();
  auto [ix, iy] = g.nearest_node(cx, cy);
  return {g.x_of(ix), g.y_of(iy)};
}

}  // namespace detail_fields

/// Modified Rankine vortex: solid-body core v = v_max*r/R, power-law skirt
/// v = v_max*(R/r)^b, purely azimuthal and counterclockwise.
inline VectorField2D make_modified_rankine(double v_max, double core_radius, double decay_exponent,
                                           const Grid2D& geometry, const Vec2* center = nullptr) {
  require(v_max > 0.0, errc::validation, "v_max must be positive");
  require(core_radius > 0.0, errc::validation, "core radius must be positive");
  require(decay_exponent > 0.0, errc::validation, "decay exponent must be positive");
  geometry.validate_geometry();
  require(core_radius >= 2.0 * std::max(geometry.dx, geometry.dy), errc::resolution,
          "core radius under-resolved: R < 2*max(dx,dy)");

  const Vec2 c = detail_fields::snapped_center(geometry, center);
  Grid2D u(geometry.nx, geometry.ny, geometry.dx, geometry.dy, geometry.x0, geometry.y0);
  Grid2D v = u;
  for (int iy = 0; iy < u.ny; ++iy) {
    for (int ix = 0; ix < u.nx; ++ix) {
      const double rx = u.x_of(ix) - c.x;
      const double ry = u.y_of(iy) - c.y;
      const double r = std::sqrt(rx * rx + ry * ry);
      if (r == 0.0) continue;  // speed is zero on the axis
      const double speed =
          (r <= core_radius) ? v_max * r / core_radius : v_max * std::pow(core_radius / r, decay_exponent);
      u.at(ix, iy) = -speed * ry / r;
      v.at(ix, iy) = speed * rx / r;
    }
  }
  return VectorField2D(std::move(u), std::move(v));
}

/// Vorticity plateau zeta_core inside R, power-law decay (r/R)^b outside
/// (b < 0).
inline ScalarField2D make_power_law_vorticity(double zeta_core, double core_radius, double exponent,
                                              const Grid2D& geometry, const Vec2* center = nullptr) {
  require(zeta_core > 0.0, errc::validation, "zeta_core must be positive");
  require(core_radius > 0.0, errc::validation, "core radius must be positive");
  require(exponent < 0.0, errc::validation, "power-law exponent must be negative");
  geometry.validate_geometry();
  require(core_radius >= 2.0 * std::max(geometry.dx, geometry.dy), errc::resolution,
          "core radius under-resolved: R < 2*max(dx,dy)");

  const Vec2 c = detail_fields::snapped_center(geometry, center);
  Grid2D g(geometry.nx, geometry.ny, geometry.dx, geometry.dy, geometry.x0, geometry.y0);
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double rx = g.x_of(ix) - c.x;
      const double ry = g.y_of(iy) - c.y;
      const double r = std::sqrt(rx * rx + ry * ry);
      g.at(ix, iy) = (r <= core_radius) ? zeta_core : zeta_core * std::pow(r / core_radius, exponent);
    }
  }
  return ScalarField2D(std::move(g), Quantity::vorticity);
}

/// Idealized singular profile zeta = amplitude * r^exponent with no core
/// plateau. The singularity is placed mid-cell (never on a node) and cells
/// near the axis take the cell-averaged value of the analytic profile, so the
/// field keeps the exact continuum scaling that slope-recovery experiments
/// probe. This is deliberately different from make_power_law_vorticity, whose
/// resolved core flattens the small scales.
inline ScalarField2D make_ideal_power_law_vorticity(double amplitude, double exponent,
                                                    const Grid2D& geometry, int refine_cells = 12,
                                                    int subsamples = 8) {
  require(amplitude > 0.0, errc::validation, "amplitude must be positive");
  require(exponent < 0.0 && exponent > -2.0, errc::validation,
          "exponent must lie in (-2, 0) for an integrable profile");
  geometry.validate_geometry();

  // center of the grid, then shifted half a cell so no node hits r = 0
  const double cx = geometry.x0 + 0.5 * geometry.width() + 0.5 * geometry.dx * ((geometry.nx % 2) ? 1.0 : 0.0);
  const double cy = geometry.y0 + 0.5 * geometry.height() + 0.5 * geometry.dy * ((geometry.ny % 2) ? 1.0 : 0.0);

  Grid2D g(geometry.nx, geometry.ny, geometry.dx, geometry.dy, geometry.x0, geometry.y0);
  const double near = refine_cells * std::max(g.dx, g.dy);
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double rx = g.x_of(ix) - cx;
      const double ry = g.y_of(iy) - cy;
      const double r = std::sqrt(rx * rx + ry * ry);
      if (r >= near) {
        g.at(ix, iy) = amplitude * std::pow(r, exponent);
        continue;
      }
      // midpoint-rule cell average close to the axis
      double acc = 0.0;
      for (int sy = 0; sy < subsamples; ++sy) {
        for (int sx = 0; sx < subsamples; ++sx) {
          const double ox = ((sx + 0.5) / subsamples - 0.5) * g.dx;
          const double oy = ((sy + 0.5) / subsamples - 0.5) * g.dy;
          const double rr = std::sqrt((rx + ox) * (rx + ox) + (ry + oy) * (ry + oy));
          acc += std::pow(rr, exponent);
        }
      }
      g.at(ix, iy) = amplitude * acc / (subsamples * subsamples);
    }
  }
  return ScalarField2D(std::move(g), Quantity::vorticity);
}

/// Straight horizontal band of vorticity: zeta_sheet inside a length x h box
/// centered on the grid, zero outside.
inline ScalarField2D make_vortex_sheet(double length, double thickness, double zeta_sheet,
                                       const Grid2D& geometry) {
  geometry.validate_geometry();
  require(length > 0.0, errc::validation, "sheet length must be positive");
  require(thickness >= 2.0 * std::min(geometry.dx, geometry.dy), errc::resolution,
          "sheet thickness under-resolved: h < 2*min(dx,dy)");
  require(length <= geometry.width() && thickness <= geometry.height(), errc::geometry,
          "sheet band exceeds the grid");

  const Vec2 c = detail_fields::snapped_center(geometry);
  Grid2D g(geometry.nx, geometry.ny, geometry.dx, geometry.dy, geometry.x0, geometry.y0);
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double rx = g.x_of(ix) - c.x;
      const double ry = g.y_of(iy) - c.y;
      const bool inside = std::abs(rx) <= 0.5 * length && std::abs(ry) <= 0.5 * thickness;
      g.at(ix, iy) = inside ? zeta_sheet : 0.0;
    }
  }
  return ScalarField2D(std::move(g), Quantity::vorticity);
}

/// Area integral of the field, sum(value) * dx * dy.
inline double total_circulation(const ScalarField2D& f) {
  double s = 0.0;
  for (double v : f.grid.values) s += v;
  return s * f.grid.dx * f.grid.dy;
}

}  // namespace vortexgas
