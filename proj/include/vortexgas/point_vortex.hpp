#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vortexgas/common.hpp"
#include "vortexgas/detail/format.hpp"

namespace vortexgas {

struct PointVortex {
  double x = 0.0;
  double y = 0.0;
  double gamma = 0.0;  // circulation, m^2/s

  Vec2 pos() const { return {x, y}; }
};

enum class Domain {
  full_plane,
  half_plane,  // wall at y = 0, image vortices are implicit
};

/// State of the 2D point-vortex Hamiltonian system. Images in the half-plane
/// are computed on the fly and never stored, so conserved quantities only see
/// the explicit vortices.
struct VortexSystem {
  std::vector<PointVortex> vortices;
  Domain domain = Domain::full_plane;
  double core_cutoff = 0.0;  // regularization radius delta; 0 = pure point vortices

  void validate() const {
    require(core_cutoff >= 0.0, errc::validation, "core cutoff must be >= 0");
    for (std::size_t i = 0; i < vortices.size(); ++i) {
      const auto& a = vortices[i];
      require(std::isfinite(a.x) && std::isfinite(a.y), errc::validation, "vortex position not finite");
      require(a.gamma != 0.0 && std::isfinite(a.gamma), errc::validation, "vortex circulation must be nonzero");
      if (domain == Domain::half_plane)
        require(a.y > 0.0, errc::domain_violation, "half-plane vortices must have y > 0");
      for (std::size_t j = i + 1; j < vortices.size(); ++j) {
        const double dx = a.x - vortices[j].x;
        const double dy = a.y - vortices[j].y;
        require(dx != 0.0 || dy != 0.0, errc::validation, "coincident vortices");
      }
    }
  }

  std::size_t size() const { return vortices.size(); }
};

struct ConservedQuantities {
  double gamma_total = 0.0;
  Vec2 center{};            // center of vorticity M, or plain centroid (flagged)
  bool center_defined = true;  // false when gamma_total == 0
  double moment = 0.0;         // moment of inertia I about `center`
};

namespace detail_pv {

/// Velocity at p induced by a single vortex of circulation gamma at q.
/// Inside the cutoff the r^-1 profile is replaced by a solid-body one (r/d^2),
/// which is what substituting delta for r in Gamma/(2 pi r^2) produces.
inline Vec2 vortex_term(Vec2 p, Vec2 q, double gamma, double delta) {
  const double rx = q.x - p.x;
  const double ry = q.y - p.y;
  double r2 = rx * rx + ry * ry;
  if (delta > 0.0 && r2 < delta * delta) r2 = delta * delta;
  const double f = gamma / (two_pi * r2);
  return {f * ry, -f * rx};
}

}  // namespace detail_pv

/// Velocity induced at `point` by all vortices (and, in the half-plane, all
/// images) except the vortex at `exclude`. The excluded vortex's own image is
/// still included: a vortex is advected by its image.
inline Vec2 induced_velocity(const VortexSystem& system, Vec2 point,
                             std::optional<std::size_t> exclude = std::nullopt) {
  require(std::isfinite(point.x) && std::isfinite(point.y), errc::validation, "query point not finite");
  Vec2 vel{};
  for (std::size_t j = 0; j < system.vortices.size(); ++j) {
    const auto& w = system.vortices[j];
    if (!exclude || j != *exclude) {
      const double rx = w.x - point.x;
      const double ry = w.y - point.y;
      if (rx == 0.0 && ry == 0.0) {
        if (system.core_cutoff == 0.0)
          fail(errc::singularity, "evaluation point coincides with a vortex and delta = 0");
      }
      vel += detail_pv::vortex_term(point, w.pos(), w.gamma, system.core_cutoff);
    }
    if (system.domain == Domain::half_plane)
      vel += detail_pv::vortex_term(point, {w.x, -w.y}, -w.gamma, system.core_cutoff);
  }
  return vel;
}

/// Interaction Hamiltonian H = -(1/4pi) sum_{i != j} G_i G_j log|x_i - x_j|.
/// In the half-plane the image terms (Kirchhoff-Routh form) are added,
/// including each vortex's own image at distance 2y.
inline double hamiltonian(const VortexSystem& system) {
  const auto& vs = system.vortices;
  double h = 0.0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      const double dx = vs[i].x - vs[j].x;
      const double dy = vs[i].y - vs[j].y;
      const double r2 = dx * dx + dy * dy;
      if (r2 == 0.0) fail(errc::singularity, "coincident vortex pair in hamiltonian");
      h -= vs[i].gamma * vs[j].gamma * 0.5 * std::log(r2) / two_pi;
    }
  }
  if (system.domain == Domain::half_plane) {
    for (std::size_t i = 0; i < vs.size(); ++i) {
      for (std::size_t j = i + 1; j < vs.size(); ++j) {
        const double dx = vs[i].x - vs[j].x;
        const double sy = vs[i].y + vs[j].y;
        h += vs[i].gamma * vs[j].gamma * 0.5 * std::log(dx * dx + sy * sy) / two_pi;
      }
      h += vs[i].gamma * vs[i].gamma * std::log(2.0 * vs[i].y) / (2.0 * two_pi);
    }
  }
  return h;
}

inline ConservedQuantities conserved_quantities(const VortexSystem& system) {
  ConservedQuantities q;
  const auto& vs = system.vortices;
  require(!vs.empty(), errc::validation, "empty vortex system");
  double sx = 0.0, sy = 0.0;
  for (const auto& v : vs) {
    q.gamma_total += v.gamma;
    sx += v.gamma * v.x;
    sy += v.gamma * v.y;
  }
  if (q.gamma_total != 0.0) {
    q.center = {sx / q.gamma_total, sy / q.gamma_total};
    q.center_defined = true;
  } else {
    // degenerate dipole-like case: report the plain centroid instead
    Vec2 c{};
    for (const auto& v : vs) c += v.pos();
    q.center = c * (1.0 / static_cast<double>(vs.size()));
    q.center_defined = false;
  }
  for (const auto& v : vs) {
    const double dx = v.x - q.center.x;
    const double dy = v.y - q.center.y;
    q.moment += v.gamma * (dx * dx + dy * dy);
  }
  return q;
}

/// Sampled trajectory with per-sample conservation diagnostics.
struct Trajectory {
  std::size_t n_vortices = 0;
  std::vector<double> times;
  std::vector<Vec2> positions;  // times.size() * n_vortices, vortex-major per sample
  std::vector<double> hamiltonian;
  std::vector<double> gamma_total;
  std::vector<double> center_x;  // NaN when the center of vorticity is undefined
  std::vector<double> center_y;
  std::vector<double> moment;

  Vec2 position(std::size_t sample, std::size_t vortex) const {
    return positions[sample * n_vortices + vortex];
  }
  std::size_t n_samples() const { return times.size(); }
};

namespace detail_pv {

inline void velocities(std::span<const double> state, std::span<const double> gammas, Domain domain,
                       double delta, std::span<double> out) {
  const std::size_t n = gammas.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p{state[2 * i], state[2 * i + 1]};
    Vec2 vel{};
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) vel += vortex_term(p, {state[2 * j], state[2 * j + 1]}, gammas[j], delta);
      if (domain == Domain::half_plane)
        vel += vortex_term(p, {state[2 * j], -state[2 * j + 1]}, -gammas[j], delta);
    }
    out[2 * i] = vel.x;
    out[2 * i + 1] = vel.y;
  }
}

}  // namespace detail_pv

/// Fixed-step classical RK4 on the coupled vortex ODEs. Half-plane images are
/// recomputed from the current positions inside every stage. Conservation is
/// monitored (recorded in the trajectory), never corrected.
inline Trajectory integrate(const VortexSystem& system, double dt, double t_end, int record_every = 1) {
  system.validate();
  require(dt > 0.0, errc::validation, "dt must be positive");
  require(t_end > 0.0, errc::validation, "t_end must be positive");
  require(record_every >= 1, errc::validation, "record_every must be >= 1");

  const std::size_t n = system.size();
  std::vector<double> gammas(n);
  std::vector<double> state(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    gammas[i] = system.vortices[i].gamma;
    state[2 * i] = system.vortices[i].x;
    state[2 * i + 1] = system.vortices[i].y;
  }

  const long n_steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
  Trajectory traj;
  traj.n_vortices = n;

  VortexSystem snapshot = system;  // reused for diagnostics
  auto record = [&](double t) {
    for (std::size_t i = 0; i < n; ++i) {
      snapshot.vortices[i].x = state[2 * i];
      snapshot.vortices[i].y = state[2 * i + 1];
      traj.positions.push_back({state[2 * i], state[2 * i + 1]});
    }
    traj.times.push_back(t);
    traj.hamiltonian.push_back(hamiltonian(snapshot));
    const auto q = conserved_quantities(snapshot);
    traj.gamma_total.push_back(q.gamma_total);
    traj.center_x.push_back(q.center_defined ? q.center.x : std::nan(""));
    traj.center_y.push_back(q.center_defined ? q.center.y : std::nan(""));
    traj.moment.push_back(q.moment);
  };

  auto check_state = [&](double t) {
    const double collision_r2 = system.core_cutoff * system.core_cutoff / 100.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = state[2 * i], y = state[2 * i + 1];
      if (!std::isfinite(x) || !std::isfinite(y))
        fail(errc::singularity, "non-finite vortex state at t = " + detail::format_double(t));
      if (system.domain == Domain::half_plane && y <= 0.0)
        fail(errc::domain_violation, "vortex crossed the wall y = 0 at t = " + detail::format_double(t));
      for (std::size_t j = i + 1; j < n; ++j) {
        const double ddx = x - state[2 * j];
        const double ddy = y - state[2 * j + 1];
        const double r2 = ddx * ddx + ddy * ddy;
        if (system.core_cutoff > 0.0 && r2 < collision_r2)
          fail(errc::near_collision, "vortex pair closer than delta/10 at t = " + detail::format_double(t));
        if (r2 == 0.0)
          fail(errc::near_collision, "vortex collision at t = " + detail::format_double(t));
      }
    }
  };

  record(0.0);

  std::vector<double> k1(2 * n), k2(2 * n), k3(2 * n), k4(2 * n), tmp(2 * n);
  const Domain dom = system.domain;
  const double delta = system.core_cutoff;
  double t = 0.0;
  for (long step = 1; step <= n_steps; ++step) {
    const double h = (step == n_steps) ? (t_end - t) : dt;
    detail_pv::velocities(state, gammas, dom, delta, k1);
    for (std::size_t i = 0; i < 2 * n; ++i) tmp[i] = state[i] + 0.5 * h * k1[i];
    detail_pv::velocities(tmp, gammas, dom, delta, k2);
    for (std::size_t i = 0; i < 2 * n; ++i) tmp[i] = state[i] + 0.5 * h * k2[i];
    detail_pv::velocities(tmp, gammas, dom, delta, k3);
    for (std::size_t i = 0; i < 2 * n; ++i) tmp[i] = state[i] + h * k3[i];
    detail_pv::velocities(tmp, gammas, dom, delta, k4);
    for (std::size_t i = 0; i < 2 * n; ++i)
      state[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    t += h;

    check_state(t);
    if (step % record_every == 0 || step == n_steps) record(t);
  }
  return traj;
}

/// n equal vortices on a half-line from the origin; the classic sheet that
/// rolls up into a spiral.
inline VortexSystem init_vortex_sheet(int n, double spacing, double gamma_each, double orientation = 0.0) {
  require(n >= 1, errc::validation, "need at least one vortex");
  require(spacing > 0.0, errc::validation, "spacing must be positive");
  require(gamma_each != 0.0, errc::validation, "circulation must be nonzero");
  VortexSystem sys;
  const double cx = std::cos(orientation);
  const double sx = std::sin(orientation);
  sys.vortices.reserve(n);
  for (int i = 0; i < n; ++i)
    sys.vortices.push_back({i * spacing * cx, i * spacing * sx, gamma_each});
  return sys;
}

/// Reduced vorticity response to a train of stretching pulses at t = T, 2T,...
/// Advection and tilting are dropped, so zeta is a staircase with jump i equal
/// to gammas[i].
inline double pulse_train_response(double zeta0, std::span<const double> gammas, double period, double t) {
  require(period > 0.0, errc::validation, "pulse period must be positive");
  require(t >= 0.0, errc::validation, "time must be >= 0");
  double zeta = zeta0;
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    const double pulse_time = static_cast<double>(i + 1) * period;
    if (pulse_time <= t) zeta += gammas[i];
  }
  return zeta;
}

}  // namespace vortexgas
