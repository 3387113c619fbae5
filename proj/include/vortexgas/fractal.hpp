#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "vortexgas/common.hpp"
#include "vortexgas/detail/linfit.hpp"
#include "vortexgas/rng.hpp"

namespace vortexgas {

struct PointSet2D {
  std::vector<Vec2> points;

  void validate() const {
    require(points.size() >= 2, errc::validation, "point set needs at least 2 points");
    bool distinct = false;
    for (std::size_t i = 1; i < points.size() && !distinct; ++i)
      distinct = points[i].x != points[0].x || points[i].y != points[0].y;
    require(distinct, errc::validation, "point set needs at least 2 distinct points");
    for (const auto& p : points)
      require(finite(p), errc::validation, "points must be finite");
  }

  /// Largest bounding-box extent.
  double diameter() const {
    double lx = points[0].x, hx = lx, ly = points[0].y, hy = ly;
    for (const auto& p : points) {
      lx = std::min(lx, p.x);
      hx = std::max(hx, p.x);
      ly = std::min(ly, p.y);
      hy = std::max(hy, p.y);
    }
    return std::max(hx - lx, hy - ly);
  }
};

/// n box sizes diameter/2, diameter/4, ... (halving).
inline std::vector<double> dyadic_scales(double diameter, int n_scales) {
  require(diameter > 0.0 && n_scales >= 1, errc::validation, "bad scale request");
  std::vector<double> s(n_scales);
  double v = diameter / 2.0;
  for (int i = 0; i < n_scales; ++i, v /= 2.0) s[i] = v;
  return s;
}

struct BoxCountResult {
  double dimension = 0.0;
  double ci_halfwidth = 0.0;  // 95% from fit residuals
  double r_squared = 0.0;
  std::vector<double> scales;
  std::vector<long> counts;
};

/// Box-counting dimension: slope of log N(s) against log(1/s) with the box
/// grid anchored at the bounding-box corner (deterministic, no origin
/// averaging). Scales must number at least 4 and span at least two decades
/// relative to the point-set diameter.
inline BoxCountResult box_counting_dimension(const PointSet2D& points,
                                             std::span<const double> scales) {
  points.validate();
  require(scales.size() >= 4, errc::scale_range, "need at least 4 box scales");
  std::vector<double> s(scales.begin(), scales.end());
  std::sort(s.begin(), s.end(), std::greater<>());
  for (double v : s) require(v > 0.0, errc::scale_range, "box scales must be positive");
  require(s.front() / s.back() >= 99.999, errc::scale_range,
          "box scales must span at least two decades");

  double lx = points.points[0].x, hx = lx, ly = points.points[0].y, hy = ly;
  for (const auto& p : points.points) {
    lx = std::min(lx, p.x);
    hx = std::max(hx, p.x);
    ly = std::min(ly, p.y);
    hy = std::max(hy, p.y);
  }

  BoxCountResult res;
  std::unordered_set<std::uint64_t> boxes;
  std::vector<double> fit_x, fit_y;
  for (double size : s) {
    const long mx = std::max(1L, static_cast<long>(std::ceil((hx - lx) / size)));
    const long my = std::max(1L, static_cast<long>(std::ceil((hy - ly) / size)));
    boxes.clear();
    for (const auto& p : points.points) {
      const long ix = std::min(mx - 1, static_cast<long>((p.x - lx) / size));
      const long iy = std::min(my - 1, static_cast<long>((p.y - ly) / size));
      boxes.insert((static_cast<std::uint64_t>(ix) << 32) | static_cast<std::uint64_t>(iy));
    }
    res.scales.push_back(size);
    res.counts.push_back(static_cast<long>(boxes.size()));
    fit_x.push_back(-std::log(size));
    fit_y.push_back(std::log(static_cast<double>(boxes.size())));
  }
  const auto fit = detail::linear_fit(fit_x, fit_y);
  res.dimension = fit.slope;
  res.ci_halfwidth = 1.96 * fit.slope_stderr;
  res.r_squared = fit.r_squared;
  return res;
}

/// n points evenly spaced on the unit segment; dimension 1 fixture.
inline PointSet2D make_segment_points(int n) {
  require(n >= 2, errc::validation, "need at least 2 points");
  PointSet2D ps;
  ps.points.reserve(n);
  for (int i = 0; i < n; ++i)
    ps.points.push_back({static_cast<double>(i) / (n - 1), 0.0});
  return ps;
}

/// n uniform points in the unit square; dimension 2 fixture.
inline PointSet2D make_square_points(int n, std::uint64_t seed) {
  require(n >= 2, errc::validation, "need at least 2 points");
  RandomSource rng(seed);
  PointSet2D ps;
  ps.points.reserve(n);
  for (int i = 0; i < n; ++i) ps.points.push_back({rng.uniform(), rng.uniform()});
  return ps;
}

/// Vertices of the level-`level` Koch curve on the unit base segment;
/// dimension log 4 / log 3.
inline PointSet2D make_koch_points(int level) {
  require(level >= 1 && level <= 10, errc::validation, "Koch level must lie in [1, 10]");
  std::vector<Vec2> pts{{0.0, 0.0}, {1.0, 0.0}};
  for (int l = 0; l < level; ++l) {
    std::vector<Vec2> next;
    next.reserve((pts.size() - 1) * 4 + 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const Vec2 a = pts[i];
      const Vec2 b = pts[i + 1];
      const Vec2 d = {(b.x - a.x) / 3.0, (b.y - a.y) / 3.0};
      const Vec2 p1 = {a.x + d.x, a.y + d.y};
      const Vec2 p3 = {a.x + 2.0 * d.x, a.y + 2.0 * d.y};
      // apex of the equilateral bump
      const Vec2 p2 = {p1.x + d.x * 0.5 - d.y * std::sqrt(3.0) / 2.0,
                       p1.y + d.y * 0.5 + d.x * std::sqrt(3.0) / 2.0};
      next.push_back(a);
      next.push_back(p1);
      next.push_back(p2);
      next.push_back(p3);
    }
    next.push_back(pts.back());
    pts = std::move(next);
  }
  return {std::move(pts)};
}

/// Boundary of the twindragon tile, extracted from a chaos-game raster of the
/// two-map IFS z -> c z and z -> c (z + 1), c = (1 - i)/2. Boundary dimension
/// is ~1.52.
inline PointSet2D make_twindragon_boundary_points(int n_points, int raster_n, std::uint64_t seed) {
  require(n_points >= 1000, errc::validation, "need at least 1000 chaos-game points");
  require(raster_n >= 64, errc::validation, "raster too coarse");
  RandomSource rng(seed);
  const std::complex<double> c(0.5, -0.5);

  std::vector<std::complex<double>> pts;
  pts.reserve(n_points);
  std::complex<double> z(0.3, 0.1);
  for (int i = 0; i < n_points + 100; ++i) {
    z = rng.uniform_below(2) ? c * z : c * (z + 1.0);
    if (i >= 100) pts.push_back(z);  // discard transient
  }

  double lx = pts[0].real(), hx = lx, ly = pts[0].imag(), hy = ly;
  for (const auto& p : pts) {
    lx = std::min(lx, p.real());
    hx = std::max(hx, p.real());
    ly = std::min(ly, p.imag());
    hy = std::max(hy, p.imag());
  }
  const double sx = (hx - lx) / raster_n;
  const double sy = (hy - ly) / raster_n;

  std::vector<std::uint8_t> occ(static_cast<std::size_t>(raster_n) * raster_n, 0);
  auto cell = [&](const std::complex<double>& p) {
    const int ix = std::min(raster_n - 1, static_cast<int>((p.real() - lx) / sx));
    const int iy = std::min(raster_n - 1, static_cast<int>((p.imag() - ly) / sy));
    return std::pair<int, int>{ix, iy};
  };
  for (const auto& p : pts) {
    auto [ix, iy] = cell(p);
    occ[static_cast<std::size_t>(iy) * raster_n + ix] = 1;
  }

  PointSet2D boundary;
  auto occupied = [&](int ix, int iy) {
    if (ix < 0 || iy < 0 || ix >= raster_n || iy >= raster_n) return false;
    return occ[static_cast<std::size_t>(iy) * raster_n + ix] != 0;
  };
  for (int iy = 0; iy < raster_n; ++iy) {
    for (int ix = 0; ix < raster_n; ++ix) {
      if (!occupied(ix, iy)) continue;
      if (occupied(ix - 1, iy) && occupied(ix + 1, iy) && occupied(ix, iy - 1) &&
          occupied(ix, iy + 1))
        continue;
      boundary.points.push_back({lx + (ix + 0.5) * sx, ly + (iy + 0.5) * sy});
    }
  }
  boundary.validate();
  return boundary;
}

}  // namespace vortexgas
