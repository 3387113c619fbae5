#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "vortexgas/common.hpp"
#include "vortexgas/detail/fft.hpp"
#include "vortexgas/detail/format.hpp"
#include "vortexgas/detail/linfit.hpp"
#include "vortexgas/fields.hpp"
#include "vortexgas/rng.hpp"

namespace vortexgas {

/// Scaling exponent of the Kelvin-Helmholtz vortex cross-section area with
/// sheet thickness, A = O(h^1.55).
inline constexpr double sheet_area_exponent = 1.55;

struct SpectrumSeries {
  std::vector<double> wavenumbers;  // rad/m, strictly increasing
  std::vector<double> energies;     // >= 0

  void validate() const {
    require(wavenumbers.size() == energies.size(), errc::validation, "spectrum length mismatch");
    for (std::size_t i = 0; i < wavenumbers.size(); ++i) {
      require(wavenumbers[i] > 0.0, errc::validation, "wavenumbers must be positive");
      if (i > 0)
        require(wavenumbers[i] > wavenumbers[i - 1], errc::validation,
                "wavenumbers must strictly increase");
      require(energies[i] >= 0.0, errc::validation, "energies must be >= 0");
    }
  }

  double total_energy() const {
    double s = 0.0;
    for (double e : energies) s += e;
    return s;
  }
};

namespace detail_spec {

inline int signed_mode(int k, int n) { return k <= n / 2 ? k : k - n; }

inline int annulus_bin(int kx, int ky, int n) {
  const double sx = signed_mode(kx, n);
  const double sy = signed_mode(ky, n);
  return static_cast<int>(std::lround(std::sqrt(sx * sx + sy * sy)));
}

}  // namespace detail_spec

/// Radially averaged kinetic-energy spectrum of a square velocity field.
/// Means are removed, |k| is binned into unit-width annuli centered on
/// integer indices, and the total equals (1/2) mean(u'^2 + v'^2) exactly
/// (Parseval; every mode lands in exactly one bin).
inline SpectrumSeries radial_energy_spectrum(const VectorField2D& field) {
  field.validate();
  const Grid2D& gu = field.u;
  require(gu.nx == gu.ny, errc::geometry, "spectrum needs a square grid");
  const int n = gu.nx;

  auto load = [&](const Grid2D& g) {
    double mean = 0.0;
    for (double v : g.values) mean += v;
    mean /= static_cast<double>(g.values.size());
    std::vector<detail::cplx> a(g.values.size());
    for (std::size_t i = 0; i < g.values.size(); ++i) a[i] = detail::cplx(g.values[i] - mean, 0.0);
    detail::fft_2d(a, n, n, false);
    return a;
  };
  const auto fu = load(gu);
  const auto fv = load(field.v);

  const int n_bins = detail_spec::annulus_bin(n / 2, n / 2, n);
  std::vector<double> bins(n_bins + 1, 0.0);
  const double norm = 0.5 / (static_cast<double>(n) * n * n * n);
  for (int ky = 0; ky < n; ++ky) {
    for (int kx = 0; kx < n; ++kx) {
      const int m = detail_spec::annulus_bin(kx, ky, n);
      const std::size_t idx = static_cast<std::size_t>(ky) * n + kx;
      bins[m] += (std::norm(fu[idx]) + std::norm(fv[idx])) * norm;
    }
  }

  SpectrumSeries s;
  const double dk = two_pi / (n * gu.dx);
  for (int m = 1; m <= n_bins; ++m) {
    s.wavenumbers.push_back(m * dk);
    s.energies.push_back(bins[m]);
  }
  return s;
}

/// Square velocity field whose binned energy spectrum is exactly
/// amplitude * m^exponent on annuli m = 1..n/2 (random phases, Hermitian
/// symmetry, corner modes zeroed). Deterministic per seed.
inline VectorField2D make_powerlaw_spectrum_field(int n, double dx, double exponent,
                                                  std::uint64_t seed, double amplitude = 1.0) {
  require(n >= 8, errc::validation, "grid too small for spectral synthesis");
  require(dx > 0.0, errc::validation, "dx must be positive");
  require(amplitude > 0.0, errc::validation, "amplitude must be positive");

  std::vector<long> count(n / 2 + 1, 0);
  for (int ky = 0; ky < n; ++ky)
    for (int kx = 0; kx < n; ++kx) {
      const int m = detail_spec::annulus_bin(kx, ky, n);
      if (m >= 1 && m <= n / 2) ++count[m];
    }

  RandomSource rng(seed);
  const double n2 = static_cast<double>(n) * n;
  auto synthesize = [&]() {
    std::vector<detail::cplx> a(static_cast<std::size_t>(n) * n, detail::cplx(0.0, 0.0));
    for (int ky = 0; ky < n; ++ky) {
      for (int kx = 0; kx < n; ++kx) {
        const int cx = (n - kx) % n;
        const int cy = (n - ky) % n;
        if (std::make_pair(ky, kx) > std::make_pair(cy, cx)) continue;  // conjugate handles it
        const int m = detail_spec::annulus_bin(kx, ky, n);
        if (m < 1 || m > n / 2) continue;
        // per-mode energy so the bin sums to amplitude * m^exponent exactly,
        // split evenly between u and v
        const double mode_e = amplitude * std::pow(static_cast<double>(m), exponent) /
                              static_cast<double>(count[m]);
        const double amp = n2 * std::sqrt(mode_e);
        const std::size_t idx = static_cast<std::size_t>(ky) * n + kx;
        if (kx == cx && ky == cy) {
          a[idx] = detail::cplx(rng.uniform_below(2) ? amp : -amp, 0.0);
        } else {
          const double phase = rng.uniform(0.0, two_pi);
          a[idx] = std::polar(amp, phase);
          a[static_cast<std::size_t>(cy) * n + cx] = std::conj(a[idx]);
        }
      }
    }
    detail::fft_2d(a, n, n, true);
    Grid2D g(n, n, dx, dx);
    for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] = a[i].real();
    return g;
  };

  Grid2D u = synthesize();
  Grid2D v = synthesize();
  return VectorField2D(std::move(u), std::move(v));
}

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
  int points_used = 0;
};

/// OLS of log y on log x (natural logs) over the x-range.
inline PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y,
                                 std::pair<double, double> range) {
  require(x.size() == y.size(), errc::validation, "x/y length mismatch");
  require(range.first < range.second, errc::validation, "empty fit range");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < range.first || x[i] > range.second) continue;
    require(x[i] > 0.0, errc::log_domain, "nonpositive abscissa in fit range");
    if (y[i] <= 0.0)
      fail(errc::log_domain, "nonpositive value at x = " + detail::format_double(x[i]));
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  require(lx.size() >= 3, errc::validation, "need at least 3 in-range points");
  const auto fit = detail::linear_fit(lx, ly);
  return {fit.slope, std::exp(fit.intercept), fit.r_squared, fit.n};
}

inline PowerLawFit fit_power_law(const SpectrumSeries& s, std::pair<double, double> range) {
  return fit_power_law(s.wavenumbers, s.energies, range);
}

struct SpectrumRelation {
  double gamma = 0.0;
  bool in_tornado_band = false;  // 2 < gamma <= 3, the fractal cross-section band
};

/// E(k) = O(k^(-D_sigma - 1)): maps the cross-section dimension to the
/// spectral decay exponent gamma = D_sigma + 1.
inline SpectrumRelation spectrum_exponent_relation(double d_sigma) {
  require(d_sigma > 0.0 && d_sigma <= 2.0, errc::domain, "D_sigma must lie in (0, 2]");
  const double gamma = d_sigma + 1.0;
  return {gamma, gamma > 2.0 && gamma <= 3.0};
}

/// Inverse map: D_sigma = gamma - 1.
inline double cross_section_dimension_from_exponent(double gamma) {
  require(gamma > 1.0 && gamma <= 3.0, errc::domain, "gamma must lie in (1, 3]");
  return gamma - 1.0;
}

/// D = D_c + D_sigma. Additivity of the two dimensions is assumed, not
/// established; the flag travels with the number.
struct TotalDimension {
  double value = 0.0;
  bool additivity_assumed = true;
};

inline TotalDimension total_vorticity_support_dimension(double d_center_line, double d_sigma) {
  return {d_center_line + d_sigma, true};
}

struct SheetScaling {
  double area = 0.0;  // A = h^1.55 (unit prefactor)
  double zeta = 0.0;  // C / A
};

/// Kelvin heuristic zeta = C / A with the Kelvin-Helmholtz area scaling
/// A = h^1.55, so zeta = C h^(-1.55).
inline SheetScaling sheet_thickness_scaling(double thickness, double circulation) {
  require(thickness > 0.0, errc::validation, "thickness must be positive");
  require(circulation > 0.0, errc::validation, "circulation must be positive");
  const double area = std::pow(thickness, sheet_area_exponent);
  return {area, circulation / area};
}

struct CandidateExponentFit {
  double exponent = 0.0;
  double rms_log_residual = 0.0;
};

/// Residuals of fixed candidate exponents (best-fit prefactor each) against a
/// measured spectrum; reported side by side without adjudicating.
inline std::vector<CandidateExponentFit> compare_candidate_exponents(
    const SpectrumSeries& s, std::pair<double, double> range,
    std::span<const double> exponents) {
  s.validate();
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < s.wavenumbers.size(); ++i) {
    const double k = s.wavenumbers[i];
    if (k < range.first || k > range.second || s.energies[i] <= 0.0) continue;
    lx.push_back(std::log(k));
    ly.push_back(std::log(s.energies[i]));
  }
  require(lx.size() >= 3, errc::validation, "need at least 3 in-range points");
  std::vector<CandidateExponentFit> out;
  for (double p : exponents) {
    double offset = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) offset += ly[i] - p * lx[i];
    offset /= static_cast<double>(lx.size());
    double ss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      const double r = ly[i] - (p * lx[i] + offset);
      ss += r * r;
    }
    out.push_back({p, std::sqrt(ss / static_cast<double>(lx.size()))});
  }
  return out;
}

}  // namespace vortexgas
