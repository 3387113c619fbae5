#pragma once

#include <cmath>
#include <span>

#include "vortexgas/common.hpp"

namespace vortexgas::detail {

/// Ordinary least squares y = slope * x + intercept.
struct LinFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  double slope_stderr = 0.0;
  int n = 0;
};

inline LinFit linear_fit(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), errc::validation, "x/y size mismatch in fit");
  const int n = static_cast<int>(x.size());
  require(n >= 2, errc::validation, "fit needs at least 2 points");

  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;

  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  require(sxx > 0.0, errc::degenerate, "fit abscissae are all equal");

  LinFit f;
  f.n = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;

  double ss_res = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    ss_res += r * r;
  }
  f.r_squared = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;
  if (n > 2) f.slope_stderr = std::sqrt(ss_res / (n - 2) / sxx);
  return f;
}

/// Mean and standard error of a MC trace via batch means; absorbs short-range
/// autocorrelation that a naive i.i.d. standard error would miss.
struct TraceStats {
  double mean = 0.0;
  double std_error = 0.0;
};

inline TraceStats batch_stats(std::span<const double> trace, int n_batches = 20) {
  TraceStats s;
  const int n = static_cast<int>(trace.size());
  require(n >= 2, errc::validation, "trace too short");
  double sum = 0.0;
  for (double v : trace) sum += v;
  s.mean = sum / n;

  const int nb = std::min(n_batches, n);
  const int len = n / nb;
  double var = 0.0;
  int used = 0;
  for (int b = 0; b < nb; ++b) {
    double bm = 0.0;
    for (int i = b * len; i < (b + 1) * len; ++i) bm += trace[i];
    bm /= len;
    var += (bm - s.mean) * (bm - s.mean);
    ++used;
  }
  if (used > 1) s.std_error = std::sqrt(var / (used - 1) / used);
  return s;
}

}  // namespace vortexgas::detail
