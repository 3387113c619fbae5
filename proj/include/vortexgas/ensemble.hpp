#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "vortexgas/common.hpp"
#include "vortexgas/detail/format.hpp"

namespace vortexgas {

/// One (energy, moment-of-inertia) state of the vortex system.
struct EnergyLevel {
  double energy = 0.0;
  double moment = 0.0;
};

struct EnsembleSpec {
  std::vector<EnergyLevel> levels;

  void validate() const {
    require(levels.size() >= 2, errc::validation, "need at least two levels");
    for (const auto& l : levels)
      require(std::isfinite(l.energy) && std::isfinite(l.moment), errc::validation,
              "levels must be finite");
  }

  /// False when every energy is identical; beta is then unidentifiable.
  bool beta_identifiable() const {
    for (const auto& l : levels)
      if (l.energy != levels.front().energy) return true;
    return false;
  }

  bool moment_informative() const {
    for (const auto& l : levels)
      if (l.moment != levels.front().moment) return true;
    return false;
  }
};

namespace detail_ens {

/// log Z and the shifted weights, computed with a max-shift so that no
/// intermediate overflows for any sign of beta/gamma.
struct ShiftedWeights {
  double log_z = 0.0;
  double shift = 0.0;          // max of the exponents
  std::vector<double> p;       // normalized probabilities
};

inline ShiftedWeights shifted_weights(std::span<const EnergyLevel> levels, double beta, double gamma) {
  require(std::isfinite(beta) && std::isfinite(gamma), errc::validation, "multipliers must be finite");
  ShiftedWeights w;
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& l : levels) m = std::max(m, -beta * l.energy - gamma * l.moment);
  require(std::isfinite(m), errc::range, "exponents overflow");
  w.shift = m;
  w.p.resize(levels.size());
  double z = 0.0;
  for (std::size_t j = 0; j < levels.size(); ++j) {
    w.p[j] = std::exp(-beta * levels[j].energy - gamma * levels[j].moment - m);
    z += w.p[j];
  }
  require(std::isfinite(z) && z > 0.0, errc::range, "partition sum overflow");
  for (auto& v : w.p) v /= z;
  w.log_z = std::log(z) + m;
  return w;
}

}  // namespace detail_ens

/// Z = sum_j exp(-beta E_j - gamma I_j).
inline double partition_function(std::span<const EnergyLevel> levels, double beta, double gamma = 0.0) {
  require(!levels.empty(), errc::validation, "no levels");
  const auto w = detail_ens::shifted_weights(levels, beta, gamma);
  const double z = std::exp(w.log_z);
  require(std::isfinite(z), errc::range, "partition function overflows double range");
  return z;
}

/// p_j = exp(-beta E_j - gamma I_j) / Z, normalized to 1 within 1e-12.
inline std::vector<double> probabilities(std::span<const EnergyLevel> levels, double beta,
                                         double gamma = 0.0) {
  require(!levels.empty(), errc::validation, "no levels");
  return detail_ens::shifted_weights(levels, beta, gamma).p;
}

/// S = -sum p_j log p_j with 0 log 0 := 0.
inline double entropy(std::span<const double> p) {
  double sum = 0.0;
  double s = 0.0;
  for (double v : p) {
    require(v >= 0.0, errc::validation, "negative probability");
    sum += v;
    if (v > 0.0) s -= v * std::log(v);
  }
  require(std::abs(sum - 1.0) <= 1e-9, errc::validation, "probabilities do not sum to 1");
  return s;
}

/// Solved maximum-entropy ensemble. beta is the primary variable; T = 1/beta
/// is reported alongside and is +/-inf at beta = 0 (flagged).
struct MultiplierSolution {
  double beta = 0.0;
  double gamma = 0.0;
  double log_z = 0.0;
  double z = 0.0;
  double entropy = 0.0;
  double temperature = 0.0;
  bool infinite_temperature = false;
  bool moment_constrained = false;
  std::vector<double> p;
  int iterations = 0;
};

/// Solves for (beta, gamma) such that <E>_p and <I>_p match the targets.
/// Damped Newton on the convex dual G = log Z + beta <E> + gamma <I>,
/// started from the uniform point beta = gamma = 0; converges globally.
inline MultiplierSolution solve_multipliers(const EnsembleSpec& spec, double target_energy,
                                            std::optional<double> target_moment = std::nullopt) {
  spec.validate();
  require(spec.beta_identifiable(), errc::degenerate,
          "all level energies equal: beta is unidentifiable");
  const auto& levels = spec.levels;

  auto span_check = [](double t, double lo, double hi, const char* what) {
    const double margin = 1e-9 * std::max(hi - lo, 1.0);
    if (!(t > lo + margin && t < hi - margin))
      fail(errc::infeasible, std::string(what) + " target " + detail::format_double(t) +
                                 " not strictly inside (" + detail::format_double(lo) + ", " +
                                 detail::format_double(hi) + ")");
  };
  double e_lo = levels[0].energy, e_hi = levels[0].energy;
  double i_lo = levels[0].moment, i_hi = levels[0].moment;
  for (const auto& l : levels) {
    e_lo = std::min(e_lo, l.energy);
    e_hi = std::max(e_hi, l.energy);
    i_lo = std::min(i_lo, l.moment);
    i_hi = std::max(i_hi, l.moment);
  }
  span_check(target_energy, e_lo, e_hi, "energy");

  const bool with_moment = target_moment.has_value() && spec.moment_informative();
  if (target_moment && spec.moment_informative()) span_check(*target_moment, i_lo, i_hi, "moment");

  double beta = 0.0, gamma = 0.0;
  const double tol = 1e-10;
  const int max_iter = 200;

  auto dual = [&](double b, double g) {
    const auto w = detail_ens::shifted_weights(levels, b, g);
    return w.log_z + b * target_energy + (with_moment ? g * *target_moment : 0.0);
  };

  MultiplierSolution sol;
  for (int iter = 1; iter <= max_iter; ++iter) {
    const auto w = detail_ens::shifted_weights(levels, beta, gamma);
    double me = 0.0, mi = 0.0;
    for (std::size_t j = 0; j < levels.size(); ++j) {
      me += w.p[j] * levels[j].energy;
      mi += w.p[j] * levels[j].moment;
    }
    double vee = 0.0, vii = 0.0, vei = 0.0;
    for (std::size_t j = 0; j < levels.size(); ++j) {
      const double de = levels[j].energy - me;
      const double di = levels[j].moment - mi;
      vee += w.p[j] * de * de;
      vii += w.p[j] * di * di;
      vei += w.p[j] * de * di;
    }

    const double re = me - target_energy;
    const double ri = with_moment ? mi - *target_moment : 0.0;
    const double res_norm = std::max(std::abs(re), std::abs(ri));
    if (res_norm < tol) {
      sol.beta = beta;
      sol.gamma = gamma;
      sol.log_z = w.log_z;
      sol.z = std::exp(w.log_z);
      sol.p = w.p;
      sol.entropy = entropy(sol.p);
      sol.infinite_temperature = (beta == 0.0);
      sol.temperature = sol.infinite_temperature ? std::numeric_limits<double>::infinity() : 1.0 / beta;
      sol.moment_constrained = with_moment;
      sol.iterations = iter;
      return sol;
    }

    // Newton step: Hessian of the dual is the covariance of (E, I) under p.
    double db, dg = 0.0;
    if (with_moment) {
      const double det = vee * vii - vei * vei;
      if (!(std::abs(det) > 1e-14 * std::max(1.0, vee * vii)))
        fail(errc::degenerate, "level moments are degenerate (singular covariance)");
      db = (vii * re - vei * ri) / det;
      dg = (vee * ri - vei * re) / det;
    } else {
      if (!(vee > 0.0)) fail(errc::degenerate, "zero energy variance");
      db = re / vee;
    }

    // backtracking line search on the dual
    const double g0 = dual(beta, gamma);
    const double slope = -(re * db + ri * dg);  // grad . step, negative for descent
    double t = 1.0;
    int bt = 0;
    while (bt++ < 60) {
      if (dual(beta + t * db, gamma + t * dg) <= g0 + 1e-4 * t * slope) break;
      t *= 0.5;
    }
    beta += t * db;
    gamma += t * dg;
  }
  fail(errc::infeasible, "multiplier solve did not converge; target too close to the attainable hull");
}

/// beta and the centered finite difference of S with respect to <E>; the two
/// agree to O(h^2) by the temperature identity dS/d<E> = beta.
struct TemperatureIdentity {
  double beta = 0.0;
  double entropy_derivative = 0.0;  // (S(+h) - S(-h)) / 2h
};

inline TemperatureIdentity temperature_identity_check(const EnsembleSpec& spec, double target_energy,
                                                      double h) {
  require(h > 0.0, errc::validation, "step must be positive");
  TemperatureIdentity out;
  out.beta = solve_multipliers(spec, target_energy).beta;
  MultiplierSolution up, down;
  try {
    up = solve_multipliers(spec, target_energy + h);
    down = solve_multipliers(spec, target_energy - h);
  } catch (const Error& e) {
    if (e.code() == errc::infeasible)
      fail(errc::step_too_large, "finite-difference neighbor is infeasible; reduce h");
    throw;
  }
  out.entropy_derivative = (up.entropy - down.entropy) / (2.0 * h);
  return out;
}

enum class HeatFlow {
  system1_loses,
  system2_loses,
  equilibrium,
};

/// Which system's mean energy decreases when two vortex systems at T1, T2 are
/// combined. Hotness increases along positive T, through +/-infinity, then
/// along negative T toward -0; equivalently the system with the smaller
/// beta = 1/T is hotter and loses energy.
inline HeatFlow heat_flow_direction(double t1, double t2) {
  require(std::isfinite(t1) && std::isfinite(t2), errc::validation, "temperatures must be finite");
  require(t1 != 0.0 && t2 != 0.0, errc::validation, "zero temperature is excluded");
  if (t1 == t2) return HeatFlow::equilibrium;
  const double b1 = 1.0 / t1;
  const double b2 = 1.0 / t2;
  if (b1 == b2) return HeatFlow::equilibrium;
  return (b2 < b1) ? HeatFlow::system2_loses : HeatFlow::system1_loses;
}

}  // namespace vortexgas
