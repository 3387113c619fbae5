#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "vortexgas/common.hpp"
#include "vortexgas/detail/linfit.hpp"
#include "vortexgas/detail/parallel.hpp"
#include "vortexgas/rng.hpp"

namespace vortexgas {

using IVec3 = std::array<int, 3>;

inline IVec3 operator+(IVec3 a, IVec3 b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline IVec3 operator-(IVec3 a, IVec3 b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline IVec3 operator-(IVec3 a) { return {-a[0], -a[1], -a[2]}; }
inline int dot(IVec3 a, IVec3 b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline IVec3 cross(IVec3 a, IVec3 b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

/// +90 degree rotation of v about a unit lattice axis (right-hand rule);
/// stays on the lattice for any integer v.
inline IVec3 rotate_quarter(IVec3 v, IVec3 axis) {
  const int d = dot(axis, v);
  const IVec3 c = cross(axis, v);
  return {axis[0] * d + c[0], axis[1] * d + c[1], axis[2] * d + c[2]};
}

inline constexpr std::array<IVec3, 6> lattice_directions = {
    IVec3{1, 0, 0}, IVec3{-1, 0, 0}, IVec3{0, 1, 0},
    IVec3{0, -1, 0}, IVec3{0, 0, 1}, IVec3{0, 0, -1}};

/// Oriented self-avoiding walk on Z^3. Each unit step carries unit vorticity
/// along the step direction.
struct LatticeWalk {
  std::vector<IVec3> sites;

  int n_segments() const { return static_cast<int>(sites.size()) - 1; }
  IVec3 step(int i) const { return sites[i + 1] - sites[i]; }

  void validate() const {
    require(sites.size() >= 2, errc::validation, "walk needs at least 2 sites");
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(sites.size() * 2);
    for (std::size_t i = 0; i < sites.size(); ++i) {
      if (i + 1 < sites.size()) {
        const IVec3 s = sites[i + 1] - sites[i];
        require(std::abs(s[0]) + std::abs(s[1]) + std::abs(s[2]) == 1, errc::validation,
                "consecutive sites must differ by one unit step");
      }
      require(seen.insert(pack(sites[i])).second, errc::validation, "walk revisits a site");
    }
  }

  static std::uint64_t pack(IVec3 p) {
    constexpr std::uint64_t off = 1u << 20;
    return ((static_cast<std::uint64_t>(p[0] + off) & 0x1FFFFF) << 42) |
           ((static_cast<std::uint64_t>(p[1] + off) & 0x1FFFFF) << 21) |
           (static_cast<std::uint64_t>(p[2] + off) & 0x1FFFFF);
  }

  double end_to_end() const {
    const IVec3 d = sites.back() - sites.front();
    return std::sqrt(static_cast<double>(dot(d, d)));
  }

  /// Mean omega_i . omega_{i+1} over adjacent segment pairs; 1 for a straight
  /// walk, 0 for a maximally kinked one (backtracks are impossible).
  double straightness() const {
    const int n = n_segments();
    if (n < 2) return 1.0;
    double s = 0.0;
    for (int i = 0; i + 1 < n; ++i) s += dot(step(i), step(i + 1));
    return s / (n - 1);
  }

  static LatticeWalk straight(int n_segments, int axis = 2) {
    require(n_segments >= 1, errc::validation, "need at least one segment");
    LatticeWalk w;
    w.sites.resize(n_segments + 1, IVec3{0, 0, 0});
    for (int i = 0; i <= n_segments; ++i) w.sites[i][axis] = i;
    return w;
  }

  /// Walk of n segments whose endpoints sit exactly `distance` apart along x,
  /// built as a comb of detours; used by pinned-endpoint (stretch-emulating)
  /// chains. Requires n - distance even and distance >= 1.
  static LatticeWalk pinned_comb(int n_segments, int distance) {
    require(distance >= 1 && distance <= n_segments, errc::validation,
            "pin distance must lie in [1, n_segments]");
    require((n_segments - distance) % 2 == 0, errc::validation,
            "n_segments - distance must be even");
    int extra = (n_segments - distance) / 2;  // total comb height to distribute
    LatticeWalk w;
    w.sites.push_back({0, 0, 0});
    IVec3 p{0, 0, 0};
    int sign = 1;  // teeth alternate up/down so adjacent columns never collide
    for (int i = 0; i < distance; ++i) {
      const int columns_left = distance - i;
      int tooth = (extra + columns_left - 1) / columns_left;  // spread evenly
      tooth = std::min(tooth, extra);
      extra -= tooth;
      for (int k = 0; k < tooth; ++k) {
        p[1] += sign;
        w.sites.push_back(p);
      }
      p[0] += 1;
      w.sites.push_back(p);
      for (int k = 0; k < tooth; ++k) {
        p[1] -= sign;
        w.sites.push_back(p);
      }
      if (tooth > 0) sign = -sign;
    }
    w.validate();
    return w;
  }
};

/// Segment of a vortex filament: midpoint (may be half-integer) and unit
/// vorticity vector. Lets tests evaluate the energy of hand-built
/// configurations that are not connected walks.
struct VortexSegment {
  std::array<double, 3> midpoint{};
  IVec3 omega{};
};

/// E = (1/8 pi) sum_{i != j} omega_i . omega_j / |m_i - m_j| over segment
/// midpoints; the constant self-energy terms are dropped.
inline double segment_set_energy(std::span<const VortexSegment> segments) {
  const std::size_t n = segments.size();
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = segments[i].midpoint[0] - segments[j].midpoint[0];
      const double dy = segments[i].midpoint[1] - segments[j].midpoint[1];
      const double dz = segments[i].midpoint[2] - segments[j].midpoint[2];
      const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
      require(dist > 0.0, errc::singularity, "coincident segment midpoints");
      e += dot(segments[i].omega, segments[j].omega) / dist;
    }
  }
  return e / (2.0 * two_pi);  // ordered pairs counted once -> 1/(4 pi)
}

inline double walk_energy(const LatticeWalk& walk) {
  walk.validate();
  const int n = walk.n_segments();
  std::vector<VortexSegment> segs(n);
  for (int i = 0; i < n; ++i) {
    const IVec3 a = walk.sites[i];
    const IVec3 b = walk.sites[i + 1];
    segs[i].midpoint = {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2])};
    segs[i].omega = b - a;
  }
  return segment_set_energy(segs);
}

enum class MoveKind { corner_flip, crankshaft, end_pivot };

/// Geometric move candidate; `valid` is false when the sampled location does
/// not admit the move (wrong local pattern). Self-avoidance is checked by the
/// applier against the current occupancy.
struct MoveSpec {
  MoveKind kind = MoveKind::corner_flip;
  bool valid = false;
  int first_site = 0;                // index of the first displaced site
  int n_moved = 0;                   // 1 or 2 displaced sites
  std::array<IVec3, 2> new_sites{};  // replacement positions
};

namespace detail_lat {

/// Draws one move uniformly over kind and location. Location indices are
/// drawn over fixed ranges (not just admissible ones) so that the proposal
/// distribution is symmetric: every legal A->B has a reverse B->A of equal
/// probability, which Metropolis needs for detailed balance.
inline MoveSpec generate_move(const LatticeWalk& walk, RandomSource& rng, bool allow_end_moves) {
  const int ns = static_cast<int>(walk.sites.size());
  MoveSpec mv;
  const int n_kinds = allow_end_moves ? 3 : 2;
  const int kind = static_cast<int>(rng.uniform_below(n_kinds));

  if (kind == 0) {  // corner flip
    mv.kind = MoveKind::corner_flip;
    if (ns < 3) return mv;
    const int i = 1 + static_cast<int>(rng.uniform_below(ns - 2));
    const IVec3 a = walk.sites[i - 1];
    const IVec3 b = walk.sites[i];
    const IVec3 c = walk.sites[i + 1];
    if (dot(b - a, c - b) != 0) return mv;  // collinear: no corner to flip
    mv.valid = true;
    mv.first_site = i;
    mv.n_moved = 1;
    mv.new_sites[0] = a + (c - b);
    return mv;
  }

  if (kind == 1) {  // crankshaft on a U-shaped 3-segment span
    mv.kind = MoveKind::crankshaft;
    if (ns < 4) return mv;
    const int i = static_cast<int>(rng.uniform_below(ns - 3));
    const IVec3 s0 = walk.sites[i + 1] - walk.sites[i];
    const IVec3 s1 = walk.sites[i + 2] - walk.sites[i + 1];
    const IVec3 s2 = walk.sites[i + 3] - walk.sites[i + 2];
    const int quarters = 1 + static_cast<int>(rng.uniform_below(3));
    if (!(s2 == -s0)) return mv;  // not a U-turn; chord would not be an axis
    IVec3 r = s0;
    for (int q = 0; q < quarters; ++q) r = rotate_quarter(r, s1);
    mv.valid = true;
    mv.first_site = i + 1;
    mv.n_moved = 2;
    mv.new_sites[0] = walk.sites[i] + r;
    mv.new_sites[1] = mv.new_sites[0] + s1;
    return mv;
  }

  // end pivot: rotate a terminal segment to a new lattice direction
  mv.kind = MoveKind::end_pivot;
  const bool head = rng.uniform_below(2) == 0;
  const int moving = head ? 0 : ns - 1;
  const int pivot = head ? 1 : ns - 2;
  const IVec3 current = walk.sites[moving] - walk.sites[pivot];
  int pick = static_cast<int>(rng.uniform_below(5));
  IVec3 dir{};
  for (const IVec3& d : lattice_directions) {
    if (d == current) continue;
    if (pick-- == 0) {
      dir = d;
      break;
    }
  }
  mv.valid = true;
  mv.first_site = moving;
  mv.n_moved = 1;
  mv.new_sites[0] = walk.sites[pivot] + dir;
  return mv;
}

inline double pair_interaction(IVec3 m2a, IVec3 wa, IVec3 m2b, IVec3 wb) {
  // m2 = site_a + site_b holds twice the midpoint, so distances double
  const IVec3 d = m2a - m2b;
  const double dist = 0.5 * std::sqrt(static_cast<double>(dot(d, d)));
  return dot(wa, wb) / dist;
}

/// Mutable chain state with occupancy hashing and an incrementally maintained
/// total energy.
class WalkState {
 public:
  explicit WalkState(LatticeWalk w) : walk_(std::move(w)) {
    walk_.validate();
    rebuild();
  }

  const LatticeWalk& walk() const { return walk_; }
  double energy() const { return energy_; }

  double full_energy() const { return walk_energy(walk_); }

  bool occupied(IVec3 p) const { return occupancy_.count(LatticeWalk::pack(p)) > 0; }

  /// Checks self-avoidance of a geometric candidate.
  bool admissible(const MoveSpec& mv) const {
    if (!mv.valid) return false;
    for (int k = 0; k < mv.n_moved; ++k) {
      const IVec3 p = mv.new_sites[k];
      bool clashes = occupied(p);
      // moving sites vacate their old positions
      for (int m = 0; m < mv.n_moved && clashes; ++m)
        if (p == walk_.sites[mv.first_site + m]) clashes = false;
      if (clashes) return false;
    }
    return true;
  }

  /// Energy change if `mv` were applied; O(n_moved * n).
  double delta_energy(const MoveSpec& mv) const {
    const int n = static_cast<int>(walk_.sites.size()) - 1;
    const int c0 = std::max(0, mv.first_site - 1);
    const int c1 = std::min(n - 1, mv.first_site + mv.n_moved - 1);  // inclusive changed segment range

    // new geometry of the changed segments
    std::array<IVec3, 4> nm2{}, nw{};
    auto new_site = [&](int s) -> IVec3 {
      if (s >= mv.first_site && s < mv.first_site + mv.n_moved)
        return mv.new_sites[s - mv.first_site];
      return walk_.sites[s];
    };
    for (int c = c0; c <= c1; ++c) {
      const IVec3 a = new_site(c);
      const IVec3 b = new_site(c + 1);
      nm2[c - c0] = a + b;
      nw[c - c0] = b - a;
    }

    double de = 0.0;
    for (int c = c0; c <= c1; ++c) {
      for (int j = 0; j < n; ++j) {
        if (j >= c0 && j <= c1) continue;
        de += pair_interaction(nm2[c - c0], nw[c - c0], m2_[j], w_[j]) -
              pair_interaction(m2_[c], w_[c], m2_[j], w_[j]);
      }
      for (int c2 = c + 1; c2 <= c1; ++c2) {
        de += pair_interaction(nm2[c - c0], nw[c - c0], nm2[c2 - c0], nw[c2 - c0]) -
              pair_interaction(m2_[c], w_[c], m2_[c2], w_[c2]);
      }
    }
    return de / (2.0 * two_pi);
  }

  void apply(const MoveSpec& mv, double de) {
    for (int k = 0; k < mv.n_moved; ++k) occupancy_.erase(LatticeWalk::pack(walk_.sites[mv.first_site + k]));
    for (int k = 0; k < mv.n_moved; ++k) {
      walk_.sites[mv.first_site + k] = mv.new_sites[k];
      occupancy_.insert(LatticeWalk::pack(mv.new_sites[k]));
    }
    const int n = static_cast<int>(walk_.sites.size()) - 1;
    const int c0 = std::max(0, mv.first_site - 1);
    const int c1 = std::min(n - 1, mv.first_site + mv.n_moved - 1);
    for (int c = c0; c <= c1; ++c) {
      m2_[c] = walk_.sites[c] + walk_.sites[c + 1];
      w_[c] = walk_.sites[c + 1] - walk_.sites[c];
    }
    energy_ += de;
  }

  void resync_energy() { energy_ = full_energy(); }

 private:
  void rebuild() {
    const int n = static_cast<int>(walk_.sites.size()) - 1;
    occupancy_.clear();
    occupancy_.reserve(walk_.sites.size() * 2);
    for (const auto& s : walk_.sites) occupancy_.insert(LatticeWalk::pack(s));
    m2_.resize(n);
    w_.resize(n);
    for (int i = 0; i < n; ++i) {
      m2_[i] = walk_.sites[i] + walk_.sites[i + 1];
      w_[i] = walk_.sites[i + 1] - walk_.sites[i];
    }
    energy_ = full_energy();
  }

  LatticeWalk walk_;
  std::unordered_set<std::uint64_t> occupancy_;
  std::vector<IVec3> m2_;  // twice the segment midpoints (integer)
  std::vector<IVec3> w_;   // segment vorticities
  double energy_ = 0.0;
};

}  // namespace detail_lat

/// Metropolis acceptance decision for an energy change delta_e at inverse
/// temperature beta (any sign): accept with probability min(1, e^(-beta de)).
inline bool metropolis_accept(double beta, double delta_e, RandomSource& rng) {
  const double expo = -beta * delta_e;
  if (expo >= 0.0) return true;
  return rng.uniform() < std::exp(expo);
}

struct ProposeResult {
  LatticeWalk walk;
  bool rejected = false;
  MoveKind kind = MoveKind::corner_flip;
};

/// One uniformly chosen local move (corner flip / crankshaft / end pivot);
/// returns the unchanged walk with `rejected` set when the move is not
/// applicable or would break self-avoidance.
inline ProposeResult propose_move(const LatticeWalk& walk, RandomSource& rng) {
  detail_lat::WalkState state(walk);
  const MoveSpec mv = detail_lat::generate_move(walk, rng, /*allow_end_moves=*/true);
  ProposeResult out{walk, true, mv.kind};
  if (!state.admissible(mv)) return out;
  state.apply(mv, 0.0);
  out.walk = state.walk();
  out.rejected = false;
  return out;
}

/// One Metropolis step by value; convenience wrapper over the chain machinery.
inline LatticeWalk metropolis_step(const LatticeWalk& walk, double beta, RandomSource& rng) {
  detail_lat::WalkState state(walk);
  const MoveSpec mv = detail_lat::generate_move(walk, rng, true);
  if (!state.admissible(mv)) return walk;
  const double de = state.delta_energy(mv);
  if (!metropolis_accept(beta, de, rng)) return walk;
  state.apply(mv, de);
  return state.walk();
}

struct McConfig {
  double beta = 0.0;
  int n_segments = 0;
  long sweeps = 0;     // one sweep = n_segments Metropolis steps
  long burn_in = 0;    // sweeps discarded before recording
  std::uint64_t seed = 0;
  long record_every = 1;  // sweeps between records
  bool pin_endpoints = false;
  int pin_distance = 0;       // endpoint separation when pinned
  bool store_snapshots = false;
  long energy_check_every = 1000;  // steps between incremental/full energy audits
  long validate_every = 0;         // sweeps between full walk validations (0 = off)

  void validate() const {
    require(n_segments >= 3, errc::validation, "n_segments must be >= 3");
    require(sweeps > burn_in && burn_in >= 0, errc::validation, "need sweeps > burn_in >= 0");
    require(record_every >= 1, errc::validation, "record_every must be >= 1");
    if (pin_endpoints)
      require(pin_distance >= 1, errc::validation, "pinned chains need pin_distance >= 1");
  }
};

struct DimensionEstimate {
  double value = 0.0;
  double ci_halfwidth = 0.0;  // 95% confidence half-width
  int n_samples = 0;
};

struct McStats {
  std::vector<double> energy_trace;
  std::vector<double> r_ee_trace;
  std::vector<double> straightness_trace;
  double acceptance_rate = 0.0;
  double mean_energy = 0.0;
  double mean_r_ee = 0.0;
  double se_r_ee = 0.0;
  double mean_straightness = 0.0;
  double se_straightness = 0.0;
  double energy_check_max_error = 0.0;  // worst |incremental - recomputed|
  std::vector<LatticeWalk> snapshots;
  std::optional<DimensionEstimate> axis_dimension;
  LatticeWalk final_walk;
};

/// Box-counting dimension of a single walk's site set over dyadic box sizes
/// 1, 2, 4, ... up to n_segments/4.
inline double walk_box_dimension(const LatticeWalk& walk) {
  const int n = walk.n_segments();
  std::vector<int> sizes;
  for (int s = 1; s <= n / 4; s *= 2) sizes.push_back(s);
  if (sizes.size() < 3) fail(errc::scale_range, "fewer than 3 usable box scales (walk too short)");

  IVec3 lo = walk.sites[0];
  for (const auto& p : walk.sites)
    for (int k = 0; k < 3; ++k) lo[k] = std::min(lo[k], p[k]);

  std::vector<double> xs, ys;
  std::unordered_set<std::uint64_t> boxes;
  for (int s : sizes) {
    boxes.clear();
    for (const auto& p : walk.sites) {
      const IVec3 q{(p[0] - lo[0]) / s, (p[1] - lo[1]) / s, (p[2] - lo[2]) / s};
      boxes.insert(LatticeWalk::pack(q));
    }
    xs.push_back(-std::log(static_cast<double>(s)));
    ys.push_back(std::log(static_cast<double>(boxes.size())));
  }
  return detail::linear_fit(xs, ys).slope;
}

/// Ensemble mean and 95% CI of the axis (center-line) dimension over
/// decorrelated walk samples.
inline DimensionEstimate estimate_axis_dimension(std::span<const LatticeWalk> walks) {
  require(walks.size() >= 100, errc::validation,
          "need at least 100 decorrelated walk samples");
  std::vector<double> dims;
  dims.reserve(walks.size());
  for (const auto& w : walks) dims.push_back(walk_box_dimension(w));
  double mean = 0.0;
  for (double d : dims) mean += d;
  mean /= static_cast<double>(dims.size());
  double var = 0.0;
  for (double d : dims) var += (d - mean) * (d - mean);
  var /= static_cast<double>(dims.size() - 1);
  DimensionEstimate est;
  est.value = mean;
  est.ci_halfwidth = 1.96 * std::sqrt(var / static_cast<double>(dims.size()));
  est.n_samples = static_cast<int>(dims.size());
  return est;
}

/// Runs a single Metropolis chain from a straight (or pinned-comb) start.
/// Deterministic for a fixed seed. The incremental energy is audited against
/// a full recomputation every energy_check_every steps.
inline McStats run_chain(const McConfig& cfg) {
  cfg.validate();
  RandomSource rng(cfg.seed);
  detail_lat::WalkState state(cfg.pin_endpoints
                                  ? LatticeWalk::pinned_comb(cfg.n_segments, cfg.pin_distance)
                                  : LatticeWalk::straight(cfg.n_segments));
  McStats stats;
  long attempted = 0;
  long accepted = 0;
  long steps = 0;

  for (long sweep = 1; sweep <= cfg.sweeps; ++sweep) {
    for (int s = 0; s < cfg.n_segments; ++s) {
      ++attempted;
      ++steps;
      const MoveSpec mv = detail_lat::generate_move(state.walk(), rng, !cfg.pin_endpoints);
      if (state.admissible(mv)) {
        const double de = state.delta_energy(mv);
        if (metropolis_accept(cfg.beta, de, rng)) {
          state.apply(mv, de);
          ++accepted;
        }
      }
      if (cfg.energy_check_every > 0 && steps % cfg.energy_check_every == 0) {
        const double err = std::abs(state.energy() - state.full_energy());
        stats.energy_check_max_error = std::max(stats.energy_check_max_error, err);
      }
    }
    if (cfg.validate_every > 0 && sweep % cfg.validate_every == 0) state.walk().validate();
    if (sweep > cfg.burn_in && (sweep - cfg.burn_in) % cfg.record_every == 0) {
      stats.energy_trace.push_back(state.energy());
      stats.r_ee_trace.push_back(state.walk().end_to_end());
      stats.straightness_trace.push_back(state.walk().straightness());
      if (cfg.store_snapshots) stats.snapshots.push_back(state.walk());
    }
  }

  stats.acceptance_rate = attempted > 0 ? static_cast<double>(accepted) / attempted : 0.0;
  const auto e = detail::batch_stats(stats.energy_trace);
  stats.mean_energy = e.mean;
  const auto r = detail::batch_stats(stats.r_ee_trace);
  stats.mean_r_ee = r.mean;
  stats.se_r_ee = r.std_error;
  const auto st = detail::batch_stats(stats.straightness_trace);
  stats.mean_straightness = st.mean;
  stats.se_straightness = st.std_error;
  if (cfg.store_snapshots && stats.snapshots.size() >= 100)
    stats.axis_dimension = estimate_axis_dimension(stats.snapshots);
  stats.final_walk = state.walk();
  return stats;
}

/// Independent chains with derived seed streams; results are identical
/// whatever the thread count.
inline std::vector<McStats> run_chains(const McConfig& base, int n_chains, int threads = 1) {
  require(n_chains >= 1, errc::validation, "need at least one chain");
  std::vector<McStats> out(n_chains);
  detail::run_indexed(n_chains, threads, [&](int i) {
    McConfig cfg = base;
    cfg.seed = RandomSource::stream(base.seed, static_cast<std::uint64_t>(i)).next_u64();
    out[i] = run_chain(cfg);
  });
  return out;
}

}  // namespace vortexgas
