#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "vortexgas/common.hpp"
#include "vortexgas/detail/fft.hpp"
#include "vortexgas/detail/format.hpp"
#include "vortexgas/detail/linfit.hpp"
#include "vortexgas/detail/parallel.hpp"
#include "vortexgas/fields.hpp"

namespace vortexgas {

/// Regression-line slope at or below which a storm is classified
/// strong-tornadic (boundary inclusive).
inline constexpr double strong_tornadic_slope_threshold = -1.6;

/// Maximum axisymmetric tangential wind marking tornadogenesis, m/s.
inline constexpr double tornadogenesis_wind_threshold = 20.0;

/// Default mesocyclone-style analysis window radius, m.
inline constexpr double default_window_radius = 10000.0;

inline std::vector<double> default_epsilons() {
  return {300.0, 600.0, 1200.0, 2400.0, 4800.0, 9600.0};
}

/// Default fit window for vorticity lines, m.
inline constexpr std::pair<double, double> default_fit_range{300.0, 9600.0};

struct DiscWindow {
  Vec2 center{};
  double radius = 0.0;
};

/// Cressman smoothing at scale epsilon: every output node is the
/// w(r) = (R^2 - r^2)/(R^2 + r^2) weighted mean of input nodes within
/// R = 2 epsilon. Near the boundary the weights renormalize over in-grid
/// neighbors only. Implemented as two linear convolutions (field and mask)
/// on a zero-padded power-of-two grid.
inline ScalarField2D cressman_filter(const ScalarField2D& field, double epsilon) {
  field.validate();
  const Grid2D& g = field.grid;
  require(epsilon >= std::max(g.dx, g.dy), errc::resolution,
          "epsilon below the grid resolution");

  const double cutoff = 2.0 * epsilon;
  const int krx = std::min(static_cast<int>(std::floor(cutoff / g.dx)), g.nx - 1);
  const int kry = std::min(static_cast<int>(std::floor(cutoff / g.dy)), g.ny - 1);

  const std::size_t px = std::bit_ceil(static_cast<std::size_t>(g.nx + 2 * krx));
  const std::size_t py = std::bit_ceil(static_cast<std::size_t>(g.ny + 2 * kry));

  // field in the real part, in-grid mask in the imaginary part
  std::vector<detail::cplx> a(px * py, detail::cplx(0.0, 0.0));
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix)
      a[static_cast<std::size_t>(iy) * px + ix] = detail::cplx(g.at(ix, iy), 1.0);

  std::vector<detail::cplx> k(px * py, detail::cplx(0.0, 0.0));
  const double c2 = cutoff * cutoff;
  for (int oy = -kry; oy <= kry; ++oy) {
    for (int ox = -krx; ox <= krx; ++ox) {
      const double r2 = ox * g.dx * ox * g.dx + oy * g.dy * oy * g.dy;
      if (r2 >= c2) continue;
      k[static_cast<std::size_t>(oy + kry) * px + (ox + krx)] = detail::cplx((c2 - r2) / (c2 + r2), 0.0);
    }
  }

  detail::fft_2d(a, px, py, false);
  detail::fft_2d(k, px, py, false);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= k[i];
  detail::fft_2d(a, px, py, true);

  Grid2D out(g.nx, g.ny, g.dx, g.dy, g.x0, g.y0);
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const detail::cplx c = a[static_cast<std::size_t>(iy + kry) * px + (ix + krx)];
      out.at(ix, iy) = c.real() / c.imag();  // imag >= w(0) = 1 at the node itself
    }
  }
  return ScalarField2D(std::move(out), field.quantity);
}

/// Disc of radius 10 km about the field maximum; the default mesocyclone-
/// centered analysis window.
inline DiscWindow default_analysis_window(const ScalarField2D& field) {
  const Grid2D& g = field.grid;
  int bx = 0, by = 0;
  double best = g.at(0, 0);
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix)
      if (g.at(ix, iy) > best) {
        best = g.at(ix, iy);
        bx = ix;
        by = iy;
      }
  return {{g.x_of(bx), g.y_of(by)}, default_window_radius};
}

struct ScaleSeries {
  std::vector<double> epsilons;
  std::vector<double> zeta_max;
  DiscWindow window{};

  void validate() const {
    require(epsilons.size() == zeta_max.size(), errc::validation, "series length mismatch");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
      require(epsilons[i] > 0.0, errc::validation, "epsilons must be positive");
      if (i > 0)
        require(epsilons[i] > epsilons[i - 1], errc::validation, "epsilons must strictly increase");
      require(zeta_max[i] >= 0.0, errc::validation, "zeta_max must be >= 0");
    }
  }
};

/// Maximum of the epsilon-filtered field over the analysis window, per scale.
inline ScaleSeries max_filtered_vorticity(const ScalarField2D& field, std::span<const double> epsilons,
                                          std::optional<DiscWindow> window = std::nullopt,
                                          int threads = 1) {
  field.validate();
  require(!epsilons.empty(), errc::validation, "no scales given");
  const DiscWindow win = window ? *window : default_analysis_window(field);

  const Grid2D& g = field.grid;
  std::vector<std::size_t> nodes;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double dx = g.x_of(ix) - win.center.x;
      const double dy = g.y_of(iy) - win.center.y;
      if (dx * dx + dy * dy <= win.radius * win.radius)
        nodes.push_back(static_cast<std::size_t>(iy) * g.nx + ix);
    }
  }
  require(!nodes.empty(), errc::geometry, "analysis window contains no grid nodes");

  ScaleSeries series;
  series.window = win;
  series.epsilons.assign(epsilons.begin(), epsilons.end());
  series.zeta_max.resize(epsilons.size());
  detail::run_indexed(static_cast<int>(epsilons.size()), threads, [&](int i) {
    const ScalarField2D f = cressman_filter(field, epsilons[i]);
    double m = f.grid.values[nodes.front()];
    for (std::size_t n : nodes) m = std::max(m, f.grid.values[n]);
    series.zeta_max[i] = m;
  });
  series.validate();
  return series;
}

/// Least-squares line through (log eps, log zeta_max) over the fit range.
struct VorticityLine {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::pair<double, double> fit_range{};
  int points_used = 0;
  int points_excluded = 0;
};

inline VorticityLine vorticity_line(const ScaleSeries& series,
                                    std::pair<double, double> fit_range = default_fit_range) {
  series.validate();
  require(fit_range.first < fit_range.second, errc::validation, "empty fit range");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < series.epsilons.size(); ++i) {
    const double e = series.epsilons[i];
    if (e < fit_range.first || e > fit_range.second) continue;
    if (series.zeta_max[i] <= 0.0)
      fail(errc::log_domain,
           "zeta_max is zero at epsilon = " + detail::format_double(e) + "; log fit undefined");
    lx.push_back(std::log(e));
    ly.push_back(std::log(series.zeta_max[i]));
  }
  require(lx.size() >= 3, errc::validation, "need at least 3 points inside the fit range");
  const auto fit = detail::linear_fit(lx, ly);
  VorticityLine line;
  line.slope = fit.slope;
  line.intercept = fit.intercept;
  line.r_squared = fit.r_squared;
  line.fit_range = fit_range;
  line.points_used = fit.n;
  line.points_excluded = static_cast<int>(series.epsilons.size()) - fit.n;
  return line;
}

/// Radial-velocity view of a planar velocity field from azimuth `view_angle`:
/// the component along the unit vector (cos, sin), the single-Doppler proxy.
inline ScalarField2D radial_velocity_view(const VectorField2D& field, double view_angle) {
  field.validate();
  const double c = std::cos(view_angle);
  const double s = std::sin(view_angle);
  Grid2D g(field.u.nx, field.u.ny, field.u.dx, field.u.dy, field.u.x0, field.u.y0);
  for (std::size_t i = 0; i < g.values.size(); ++i)
    g.values[i] = c * field.u.values[i] + s * field.v.values[i];
  return ScalarField2D(std::move(g), Quantity::generic);
}

struct PseudoVorticityResult {
  double zeta_pv = 0.0;  // (V_max - V_min) / L, s^-1
  Vec2 max_location{};
  Vec2 min_location{};
  double separation = 0.0;  // L, m
  double v_max = 0.0;
  double v_min = 0.0;
};

/// Radar-style vorticity proxy from the extrema of a radial-velocity field.
inline PseudoVorticityResult pseudovorticity(const ScalarField2D& radial_velocity) {
  radial_velocity.validate();
  const Grid2D& g = radial_velocity.grid;
  int ax = 0, ay = 0, bx = 0, by = 0;
  double vmax = g.at(0, 0), vmin = g.at(0, 0);
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double v = g.at(ix, iy);
      if (v > vmax) {
        vmax = v;
        ax = ix;
        ay = iy;
      }
      if (v < vmin) {
        vmin = v;
        bx = ix;
        by = iy;
      }
    }
  }
  if (vmax == vmin) fail(errc::degenerate, "constant radial-velocity field");
  if (ax == bx && ay == by) fail(errc::degenerate, "velocity extrema at the same node");

  PseudoVorticityResult r;
  r.v_max = vmax;
  r.v_min = vmin;
  r.max_location = {g.x_of(ax), g.y_of(ay)};
  r.min_location = {g.x_of(bx), g.y_of(by)};
  r.separation = (r.max_location - r.min_location).norm();
  r.zeta_pv = (vmax - vmin) / r.separation;
  return r;
}

struct VelocityExponentFit {
  double exponent = 0.0;
  double r_squared = 0.0;
  int shells_used = 0;
};

/// Exponent b of v ~ r^b from azimuthally averaged speed on radial shells.
inline VelocityExponentFit velocity_exponent(const VectorField2D& field, Vec2 center,
                                             std::pair<double, double> r_range,
                                             double shell_width = 0.0) {
  field.validate();
  require(r_range.first > 0.0 && r_range.second > r_range.first, errc::validation,
          "invalid radial range");
  const Grid2D& gu = field.u;
  if (shell_width <= 0.0) shell_width = 2.0 * std::max(gu.dx, gu.dy);
  const int n_shells = static_cast<int>(std::ceil((r_range.second - r_range.first) / shell_width));
  require(n_shells >= 1, errc::range, "radial range narrower than one shell");

  std::vector<double> speed_sum(n_shells, 0.0), radius_sum(n_shells, 0.0);
  std::vector<long> count(n_shells, 0);
  for (int iy = 0; iy < gu.ny; ++iy) {
    for (int ix = 0; ix < gu.nx; ++ix) {
      const double dx = gu.x_of(ix) - center.x;
      const double dy = gu.y_of(iy) - center.y;
      const double r = std::sqrt(dx * dx + dy * dy);
      if (r < r_range.first || r >= r_range.second) continue;
      const int shell = std::min(n_shells - 1, static_cast<int>((r - r_range.first) / shell_width));
      const double u = gu.at(ix, iy);
      const double v = field.v.at(ix, iy);
      speed_sum[shell] += std::sqrt(u * u + v * v);
      radius_sum[shell] += r;
      ++count[shell];
    }
  }

  std::vector<double> lx, ly;
  for (int s = 0; s < n_shells; ++s) {
    if (count[s] == 0) continue;
    const double mean_speed = speed_sum[s] / count[s];
    if (mean_speed <= 0.0) continue;
    lx.push_back(std::log(radius_sum[s] / count[s]));
    ly.push_back(std::log(mean_speed));
  }
  if (lx.size() < 3) fail(errc::range, "fewer than 3 usable radial shells");
  const auto fit = detail::linear_fit(lx, ly);
  return {fit.slope, fit.r_squared, static_cast<int>(lx.size())};
}

enum class SlopeClass { strong_tornadic, non_tornadic };

inline const char* slope_class_name(SlopeClass c) {
  return c == SlopeClass::strong_tornadic ? "strong-tornadic" : "non-tornadic";
}

/// Strong-tornadic iff slope <= -1.6 (boundary inclusive).
inline SlopeClass classify_slope(const VorticityLine& line) {
  return line.slope <= strong_tornadic_slope_threshold ? SlopeClass::strong_tornadic
                                                       : SlopeClass::non_tornadic;
}

/// Largest azimuthally averaged tangential speed around `center`; exceeding
/// tornadogenesis_wind_threshold marks genesis in synthetic sequences.
inline double max_tangential_wind(const VectorField2D& field, Vec2 center, double shell_width = 0.0) {
  field.validate();
  const Grid2D& gu = field.u;
  if (shell_width <= 0.0) shell_width = 2.0 * std::max(gu.dx, gu.dy);
  const double r_max = 0.5 * std::min(gu.width(), gu.height());
  const int n_shells = std::max(1, static_cast<int>(r_max / shell_width));
  std::vector<double> sum(n_shells, 0.0);
  std::vector<long> count(n_shells, 0);
  for (int iy = 0; iy < gu.ny; ++iy) {
    for (int ix = 0; ix < gu.nx; ++ix) {
      const double dx = gu.x_of(ix) - center.x;
      const double dy = gu.y_of(iy) - center.y;
      const double r = std::sqrt(dx * dx + dy * dy);
      if (r <= 0.0 || r >= r_max) continue;
      // tangential unit vector is (-dy, dx)/r
      const double vt = (-dy * gu.at(ix, iy) + dx * field.v.at(ix, iy)) / r;
      const int shell = std::min(n_shells - 1, static_cast<int>(r / shell_width));
      sum[shell] += vt;
      ++count[shell];
    }
  }
  double best = 0.0;
  for (int s = 0; s < n_shells; ++s)
    if (count[s] > 0) best = std::max(best, sum[s] / count[s]);
  return best;
}

struct SlopeSample {
  double time = 0.0;
  double slope = 0.0;
  SlopeClass classification = SlopeClass::non_tornadic;
};

struct SlopeTimeSeries {
  std::vector<SlopeSample> samples;
  std::optional<std::size_t> first_tornadic_frame;
};

/// Per-frame vorticity-line slopes for a time-ordered field sequence, plus the
/// first frame the strong-tornadic classifier fires on. Frame errors are
/// rethrown annotated with the frame index.
inline SlopeTimeSeries slope_time_series(std::span<const ScalarField2D> frames,
                                         std::span<const double> epsilons,
                                         std::pair<double, double> fit_range = default_fit_range,
                                         std::optional<DiscWindow> window = std::nullopt,
                                         std::span<const double> times = {}, int threads = 1) {
  require(frames.size() >= 2, errc::validation, "need at least 2 frames");
  if (!times.empty())
    require(times.size() == frames.size(), errc::validation, "times/frames length mismatch");

  SlopeTimeSeries out;
  out.samples.resize(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    try {
      const auto series = max_filtered_vorticity(frames[i], epsilons, window, threads);
      const auto line = vorticity_line(series, fit_range);
      out.samples[i] = {times.empty() ? static_cast<double>(i) : times[i], line.slope,
                        classify_slope(line)};
    } catch (const Error& e) {
      fail(e.code(), "frame " + detail::format_int(static_cast<long long>(i)) + ": " + e.what());
    }
    if (!out.first_tornadic_frame && out.samples[i].classification == SlopeClass::strong_tornadic)
      out.first_tornadic_frame = i;
  }
  return out;
}

}  // namespace vortexgas
