#pragma once

#include <array>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vortexgas/common.hpp"
#include "vortexgas/ensemble.hpp"
#include "vortexgas/fields.hpp"
#include "vortexgas/fractal.hpp"
#include "vortexgas/io.hpp"
#include "vortexgas/lattice.hpp"
#include "vortexgas/point_vortex.hpp"
#include "vortexgas/scale_analysis.hpp"
#include "vortexgas/spectra.hpp"
#include "vortexgas/svg.hpp"
#include "vortexgas/version.hpp"

namespace vortexgas {

inline constexpr std::array<const char*, 7> scenario_kinds = {
    "simulate-2d", "lattice", "entropy", "analyze-scales",
    "spectrum",    "fractal-dim", "pulse-train"};

inline std::string scenario_kinds_joined() {
  std::string s;
  for (std::size_t i = 0; i < scenario_kinds.size(); ++i) {
    if (i) s += ", ";
    s += scenario_kinds[i];
  }
  return s;
}

struct Scenario {
  std::string kind;
  KvDoc params;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  int threads = 1;
};

struct RunReport {
  std::filesystem::path out_dir;
  std::vector<std::string> outputs;  // file names relative to out_dir
  double wall_seconds = 0.0;
};

/// Output root: --out flag if given, else $VORTEXGAS_OUT_ROOT, else CWD.
inline std::filesystem::path resolve_out_dir(const std::string& cli_out, const std::string& kind) {
  if (!cli_out.empty()) return cli_out;
  if (const char* env = std::getenv("VORTEXGAS_OUT_ROOT"))
    return std::filesystem::path(env) / kind;
  return std::filesystem::path("vortexgas-out") / kind;
}

namespace detail_scn {

/// Named parameter bundles for the paper-anchored experiments. Explicit
/// config keys always win over preset values.
inline KvDoc preset_params(const std::string& kind, const std::string& name) {
  KvDoc p;
  auto unknown = [&]() {
    fail(errc::validation, "unknown preset '" + name + "' for kind '" + kind + "'");
  };
  if (kind == "simulate-2d") {
    if (name == "co-rotating-pair") {
      p.set("vortex", "-1 0 6.283185307179586");
      p.set("vortex", "1 0 6.283185307179586");
      p.set("dt", "0.001");
      p.set("t_end", "12.566370614359172");  // one co-rotation period
      p.set("record_every", "10");
    } else if (name == "translating-pair") {
      p.set("vortex", "0 0.5 6.283185307179586");
      p.set("vortex", "0 -0.5 -6.283185307179586");
      p.set("dt", "0.001");
      p.set("t_end", "5");
      p.set("record_every", "10");
    } else if (name == "sheet-rollup-40") {
      p.set("sheet_n", "40");
      p.set("sheet_spacing", "1");
      p.set("sheet_gamma", "1");
      p.set("delta", "0.05");
      p.set("dt", "0.002");
      p.set("t_end", "40");
      p.set("record_every", "100");
    } else if (name == "halfplane-pair") {
      p.set("domain", "half-plane");
      p.set("vortex", "0 1 6.283185307179586");
      p.set("vortex", "1.5 1 6.283185307179586");
      p.set("dt", "0.001");
      p.set("t_end", "30");
      p.set("record_every", "20");
    } else {
      unknown();
    }
  } else if (kind == "lattice") {
    if (name == "beta-sweep") {
      p.set("betas", "-0.5, 0, 0.5");
      p.set("n_segments", "50");
      p.set("sweeps", "20000");
      p.set("burn_in", "5000");
      p.set("record_every", "5");
    } else {
      unknown();
    }
  } else if (kind == "entropy") {
    if (name == "two-level") {
      p.set("E", "0, 1");
      p.set("target_E", "0.6666666666666666");
    } else if (name == "two-level-sweep") {
      p.set("E", "0, 1");
      p.set("target_E_list", "0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9");
    } else {
      unknown();
    }
  } else if (kind == "analyze-scales") {
    if (name == "power-law-field") {
      p.set("generator", "ideal-power-law");
      p.set("exponent", "-1.6");
      p.set("nx", "512");
      p.set("dx", "75");
    } else if (name == "morph-sequence") {
      p.set("generator", "ideal-power-law");
      p.set("exponent_start", "-1.0");
      p.set("exponent_end", "-1.8");
      p.set("frames", "9");
      p.set("nx", "256");
      p.set("dx", "75");
      p.set("epsilons", "300, 600, 1200, 2400, 4800");
      p.set("fit_lo", "300");
      p.set("fit_hi", "4800");
    } else {
      unknown();
    }
  } else if (kind == "spectrum") {
    if (name == "k3-synthetic") {
      p.set("generator", "power-law-spectrum");
      p.set("exponent", "-3");
      p.set("nx", "256");
      p.set("dx", "100");
    } else {
      unknown();
    }
  } else if (kind == "fractal-dim") {
    if (name == "segment") {
      p.set("fixture", "segment");
      p.set("n_points", "10000");
    } else if (name == "square") {
      p.set("fixture", "square");
      p.set("n_points", "100000");
    } else if (name == "koch") {
      p.set("fixture", "koch");
      p.set("level", "7");
      p.set("n_scales", "11");
    } else if (name == "twindragon") {
      p.set("fixture", "twindragon");
      p.set("n_points", "2000000");
      p.set("raster", "512");
    } else {
      unknown();
    }
  } else if (kind == "pulse-train") {
    if (name == "cm1-like") {
      p.set("zeta0", "0.1");
      p.set("jump", "0.1");
      p.set("n_pulses", "6");
      p.set("period", "300");
      p.set("t_end", "1800");
      p.set("sample_dt", "10");
    } else {
      unknown();
    }
  } else {
    fail(errc::validation, "unknown kind '" + kind + "'; valid kinds: " + scenario_kinds_joined());
  }
  return p;
}

/// Preset defaults overlaid by the explicit config.
inline KvDoc effective_params(const Scenario& sc) {
  if (!sc.params.has("preset")) return sc.params;
  KvDoc merged = preset_params(sc.kind, sc.params.get("preset"));
  KvDoc out;
  // explicit keys win; list-valued keys (vortex) come from whichever source
  // defines them
  for (const auto& [k, v] : sc.params.entries())
    if (k != "preset") out.set(k, v);
  for (const auto& [k, v] : merged.entries())
    if (!sc.params.has(k)) out.set(k, v);
  return out;
}

inline Grid2D geometry_from(const KvDoc& p) {
  const int nx = static_cast<int>(p.get_int("nx"));
  const int ny = static_cast<int>(p.get_int_or("ny", nx));
  const double dx = p.get_double("dx");
  const double dy = p.get_double_or("dy", dx);
  return Grid2D(nx, ny, dx, dy, p.get_double_or("x0", 0.0), p.get_double_or("y0", 0.0));
}

inline void run_simulate_2d(const Scenario& sc, const KvDoc& p, RunReport& report) {
  VortexSystem sys;
  if (p.has("sheet_n")) {
    sys = init_vortex_sheet(static_cast<int>(p.get_int("sheet_n")), p.get_double("sheet_spacing"),
                            p.get_double("sheet_gamma"),
                            p.get_double_or("sheet_orientation", 0.0));
  } else {
    for (const std::string& line : p.get_all("vortex")) {
      std::istringstream in(line);
      PointVortex v;
      if (!(in >> v.x >> v.y >> v.gamma))
        fail(errc::validation, "bad 'vortex' entry '" + line + "' (want: x y gamma)");
      sys.vortices.push_back(v);
    }
    require(!sys.vortices.empty(), errc::validation,
            "simulate-2d needs 'vortex' entries or sheet parameters");
  }
  const std::string domain = p.get_or("domain", "full-plane");
  if (domain == "half-plane")
    sys.domain = Domain::half_plane;
  else if (domain != "full-plane")
    fail(errc::validation, "bad 'domain' value '" + domain + "'");
  sys.core_cutoff = p.get_double_or("delta", 0.0);

  const Trajectory traj = integrate(sys, p.get_double("dt"), p.get_double("t_end"),
                                    static_cast<int>(p.get_int_or("record_every", 1)));
  write_tracks_csv(traj, sc.out_dir / "tracks.csv");
  write_diagnostics_csv(traj, sc.out_dir / "diagnostics.csv");
  write_tracks_svg(traj, sc.out_dir / "tracks.svg");
  report.outputs = {"tracks.csv", "diagnostics.csv", "tracks.svg"};
}

inline void run_lattice(const Scenario& sc, const KvDoc& p, RunReport& report) {
  std::vector<double> betas =
      p.has("betas") ? p.get_double_list("betas") : std::vector<double>{p.get_double("beta")};
  McConfig base;
  base.n_segments = static_cast<int>(p.get_int("n_segments"));
  base.sweeps = p.get_int("sweeps");
  base.burn_in = p.get_int_or("burn_in", base.sweeps / 5);
  base.record_every = p.get_int_or("record_every", 1);
  base.seed = sc.seed;
  base.pin_endpoints = p.get_int_or("pin_endpoints", 0) != 0;
  base.pin_distance = static_cast<int>(p.get_int_or("pin_distance", 0));
  base.store_snapshots = p.get_int_or("store_snapshots", 1) != 0;

  KvDoc summary;
  summary.set("n_segments", static_cast<long long>(base.n_segments));
  summary.set("sweeps", static_cast<long long>(base.sweeps));
  for (std::size_t bi = 0; bi < betas.size(); ++bi) {
    McConfig cfg = base;
    cfg.beta = betas[bi];
    cfg.seed = RandomSource::stream(sc.seed, bi).next_u64();
    const McStats stats = run_chain(cfg);

    const std::string tag = "beta" + detail::format_int(static_cast<long long>(bi));
    const std::string trace_name = "trace_" + tag + ".csv";
    {
      std::ofstream out(sc.out_dir / trace_name, std::ios::binary);
      if (!out) fail(errc::io, "cannot write trace csv");
      out << "record,E,r_ee,straightness\n";
      for (std::size_t i = 0; i < stats.energy_trace.size(); ++i)
        out << i << ',' << detail::format_double(stats.energy_trace[i]) << ','
            << detail::format_double(stats.r_ee_trace[i]) << ','
            << detail::format_double(stats.straightness_trace[i]) << '\n';
    }
    const std::string walk_name = "walk_" + tag + ".csv";
    {
      std::ofstream out(sc.out_dir / walk_name, std::ios::binary);
      if (!out) fail(errc::io, "cannot write walk csv");
      out << "step,x,y,z\n";
      for (std::size_t i = 0; i < stats.final_walk.sites.size(); ++i)
        out << i << ',' << stats.final_walk.sites[i][0] << ',' << stats.final_walk.sites[i][1]
            << ',' << stats.final_walk.sites[i][2] << '\n';
    }
    report.outputs.push_back(trace_name);
    report.outputs.push_back(walk_name);

    const std::string prefix = tag + ".";
    summary.set(prefix + "beta", cfg.beta);
    summary.set(prefix + "acceptance_rate", stats.acceptance_rate);
    summary.set(prefix + "mean_energy", stats.mean_energy);
    summary.set(prefix + "mean_r_ee", stats.mean_r_ee);
    summary.set(prefix + "se_r_ee", stats.se_r_ee);
    summary.set(prefix + "mean_straightness", stats.mean_straightness);
    summary.set(prefix + "se_straightness", stats.se_straightness);
    if (stats.axis_dimension) {
      summary.set(prefix + "axis_dimension", stats.axis_dimension->value);
      summary.set(prefix + "axis_dimension_ci", stats.axis_dimension->ci_halfwidth);
    }
  }
  summary.save(sc.out_dir / "summary.txt");
  report.outputs.push_back("summary.txt");
}

inline void run_entropy(const Scenario& sc, const KvDoc& p, RunReport& report) {
  EnsembleSpec spec;
  if (p.has("levels_csv")) {
    spec.levels = read_levels_csv(p.get("levels_csv"));
  } else {
    const auto energies = p.get_double_list("E");
    std::vector<double> moments(energies.size(), 0.0);
    if (p.has("I")) {
      moments = p.get_double_list("I");
      require(moments.size() == energies.size(), errc::validation, "E and I lengths differ");
    }
    for (std::size_t i = 0; i < energies.size(); ++i)
      spec.levels.push_back({energies[i], moments[i]});
  }

  if (p.has("target_E_list")) {
    std::ofstream out(sc.out_dir / "sweep.csv", std::ios::binary);
    if (!out) fail(errc::io, "cannot write sweep csv");
    out << "target_E,beta,S,T\n";
    for (double t : p.get_double_list("target_E_list")) {
      const auto sol = solve_multipliers(spec, t);
      out << detail::format_double(t) << ',' << detail::format_double(sol.beta) << ','
          << detail::format_double(sol.entropy) << ',' << detail::format_double(sol.temperature)
          << '\n';
    }
    report.outputs.push_back("sweep.csv");
    return;
  }

  std::optional<double> target_i;
  if (p.has("target_I")) target_i = p.get_double("target_I");
  const auto sol = solve_multipliers(spec, p.get_double("target_E"), target_i);

  KvDoc doc;
  doc.set("beta", sol.beta);
  doc.set("gamma", sol.gamma);
  doc.set("Z", sol.z);
  doc.set("log_Z", sol.log_z);
  doc.set("S", sol.entropy);
  doc.set("T", sol.temperature);
  doc.set("infinite_temperature", static_cast<long long>(sol.infinite_temperature ? 1 : 0));
  doc.set("iterations", static_cast<long long>(sol.iterations));
  doc.save(sc.out_dir / "solution.txt");

  std::ofstream out(sc.out_dir / "probabilities.csv", std::ios::binary);
  if (!out) fail(errc::io, "cannot write probabilities csv");
  out << "j,E,I,p\n";
  for (std::size_t j = 0; j < sol.p.size(); ++j)
    out << j << ',' << detail::format_double(spec.levels[j].energy) << ','
        << detail::format_double(spec.levels[j].moment) << ',' << detail::format_double(sol.p[j])
        << '\n';
  report.outputs = {"solution.txt", "probabilities.csv"};
}

inline ScalarField2D scales_input_field(const KvDoc& p, double exponent) {
  const std::string gen = p.get_or("generator", "");
  if (!gen.empty()) {
    const Grid2D geom = geometry_from(p);
    if (gen == "ideal-power-law")
      return make_ideal_power_law_vorticity(p.get_double_or("amplitude", 1.0), exponent, geom);
    if (gen == "power-law")
      return make_power_law_vorticity(p.get_double_or("zeta_core", 1.0),
                                      p.get_double("core_radius"), exponent, geom);
    fail(errc::validation, "unknown generator '" + gen + "'");
  }
  return read_scalar_field(p.get("field"));
}

inline void run_analyze_scales(const Scenario& sc, const KvDoc& p, RunReport& report) {
  std::vector<double> eps = p.has("epsilons") ? p.get_double_list("epsilons") : default_epsilons();
  const std::pair<double, double> fit_range{p.get_double_or("fit_lo", default_fit_range.first),
                                            p.get_double_or("fit_hi", default_fit_range.second)};

  if (p.has("frames")) {  // morphing sequence
    const int frames = static_cast<int>(p.get_int("frames"));
    require(frames >= 2, errc::validation, "need at least 2 frames");
    const double b0 = p.get_double("exponent_start");
    const double b1 = p.get_double("exponent_end");
    std::vector<ScalarField2D> fields;
    for (int f = 0; f < frames; ++f)
      fields.push_back(scales_input_field(p, b0 + (b1 - b0) * f / (frames - 1)));
    const auto ts = slope_time_series(fields, eps, fit_range, std::nullopt, {}, sc.threads);

    std::ofstream out(sc.out_dir / "timeseries.csv", std::ios::binary);
    if (!out) fail(errc::io, "cannot write timeseries csv");
    out << "t,slope,classification\n";
    for (const auto& s : ts.samples)
      out << detail::format_double(s.time) << ',' << detail::format_double(s.slope) << ','
          << slope_class_name(s.classification) << '\n';
    KvDoc doc;
    doc.set("frames", static_cast<long long>(frames));
    doc.set("first_tornadic_frame",
            ts.first_tornadic_frame ? detail::format_int(static_cast<long long>(*ts.first_tornadic_frame))
                                    : "none");
    doc.save(sc.out_dir / "line_report.txt");
    report.outputs = {"timeseries.csv", "line_report.txt"};
    return;
  }

  const ScalarField2D field = scales_input_field(p, p.get_double_or("exponent", -1.6));
  const auto series = max_filtered_vorticity(field, eps, std::nullopt, sc.threads);
  const auto line = vorticity_line(series, fit_range);

  std::ofstream out(sc.out_dir / "scale_series.csv", std::ios::binary);
  if (!out) fail(errc::io, "cannot write scale series csv");
  out << "epsilon,zeta_max\n";
  for (std::size_t i = 0; i < series.epsilons.size(); ++i)
    out << detail::format_double(series.epsilons[i]) << ','
        << detail::format_double(series.zeta_max[i]) << '\n';

  KvDoc doc;
  doc.set("slope", line.slope);
  doc.set("intercept", line.intercept);
  doc.set("r_squared", line.r_squared);
  doc.set("fit_lo", line.fit_range.first);
  doc.set("fit_hi", line.fit_range.second);
  doc.set("points_used", static_cast<long long>(line.points_used));
  doc.set("points_excluded", static_cast<long long>(line.points_excluded));
  doc.set("classification", slope_class_name(classify_slope(line)));
  doc.save(sc.out_dir / "line_report.txt");
  report.outputs = {"scale_series.csv", "line_report.txt"};
}

inline void run_spectrum(const Scenario& sc, const KvDoc& p, RunReport& report) {
  VectorField2D field;
  if (p.get_or("generator", "") == "power-law-spectrum") {
    field = make_powerlaw_spectrum_field(static_cast<int>(p.get_int("nx")), p.get_double("dx"),
                                         p.get_double("exponent"), sc.seed);
  } else {
    field = VectorField2D(read_scalar_field(p.get("field_u")).grid,
                          read_scalar_field(p.get("field_v")).grid);
  }
  const auto spectrum = radial_energy_spectrum(field);
  write_spectrum_csv(spectrum, sc.out_dir / "spectrum.csv");

  const double klo = p.get_double_or("fit_k_lo", spectrum.wavenumbers[2]);
  const double khi =
      p.get_double_or("fit_k_hi", spectrum.wavenumbers[spectrum.wavenumbers.size() / 2]);
  const auto fit = fit_power_law(spectrum, {klo, khi});
  const double physical = [&] {
    const double n = static_cast<double>(field.u.values.size());
    double um = 0.0, vm = 0.0;
    for (double v : field.u.values) um += v;
    for (double v : field.v.values) vm += v;
    um /= n;
    vm /= n;
    double s = 0.0;
    for (std::size_t j = 0; j < field.u.values.size(); ++j)
      s += (field.u.values[j] - um) * (field.u.values[j] - um) +
           (field.v.values[j] - vm) * (field.v.values[j] - vm);
    return 0.5 * s / n;
  }();

  KvDoc doc;
  doc.set("exponent", fit.exponent);
  doc.set("prefactor", fit.prefactor);
  doc.set("r_squared", fit.r_squared);
  doc.set("fit_k_lo", klo);
  doc.set("fit_k_hi", khi);
  doc.set("spectral_energy", spectrum.total_energy());
  doc.set("physical_energy", physical);
  const std::array<double, 2> candidates{-5.0 / 3.0, -2.0};
  for (const auto& c : compare_candidate_exponents(spectrum, {klo, khi}, candidates))
    doc.set("residual_k" + detail::format_double(c.exponent), c.rms_log_residual);
  doc.save(sc.out_dir / "fit_report.txt");
  report.outputs = {"spectrum.csv", "fit_report.txt"};
}

inline void run_fractal_dim(const Scenario& sc, const KvDoc& p, RunReport& report) {
  PointSet2D points;
  const std::string fixture = p.get_or("fixture", "");
  if (fixture == "segment") {
    points = make_segment_points(static_cast<int>(p.get_int_or("n_points", 10000)));
  } else if (fixture == "square") {
    points = make_square_points(static_cast<int>(p.get_int_or("n_points", 100000)), sc.seed);
  } else if (fixture == "koch") {
    points = make_koch_points(static_cast<int>(p.get_int_or("level", 7)));
  } else if (fixture == "twindragon") {
    points = make_twindragon_boundary_points(static_cast<int>(p.get_int_or("n_points", 400000)),
                                             static_cast<int>(p.get_int_or("raster", 1024)), sc.seed);
  } else if (fixture.empty()) {
    points = read_points_csv(p.get("points"));
  } else {
    fail(errc::validation, "unknown fixture '" + fixture + "'");
  }

  const int n_scales = static_cast<int>(p.get_int_or("n_scales", 8));
  const auto scales = dyadic_scales(points.diameter(), n_scales);
  const auto res = box_counting_dimension(points, scales);

  std::ofstream out(sc.out_dir / "counts.csv", std::ios::binary);
  if (!out) fail(errc::io, "cannot write counts csv");
  out << "scale,count\n";
  for (std::size_t i = 0; i < res.scales.size(); ++i)
    out << detail::format_double(res.scales[i]) << ',' << res.counts[i] << '\n';

  KvDoc doc;
  doc.set("dimension", res.dimension);
  doc.set("ci_halfwidth", res.ci_halfwidth);
  doc.set("r_squared", res.r_squared);
  doc.set("n_points", static_cast<long long>(points.points.size()));
  doc.save(sc.out_dir / "dim_report.txt");
  report.outputs = {"counts.csv", "dim_report.txt"};
}

inline void run_pulse_train(const Scenario& sc, const KvDoc& p, RunReport& report) {
  const double zeta0 = p.get_double("zeta0");
  const double period = p.get_double("period");
  const double t_end = p.get_double("t_end");
  const double sample_dt = p.get_double_or("sample_dt", period / 10.0);
  std::vector<double> gammas;
  if (p.has("gammas")) {
    gammas = p.get_double_list("gammas");
  } else {
    gammas.assign(static_cast<std::size_t>(p.get_int("n_pulses")), p.get_double("jump"));
  }

  std::ofstream out(sc.out_dir / "zeta_t.csv", std::ios::binary);
  if (!out) fail(errc::io, "cannot write zeta csv");
  out << "t,zeta\n";
  double final_zeta = zeta0;
  for (double t = 0.0; t <= t_end + 1e-9; t += sample_dt) {
    final_zeta = pulse_train_response(zeta0, gammas, period, t);
    out << detail::format_double(t) << ',' << detail::format_double(final_zeta) << '\n';
  }

  KvDoc doc;
  doc.set("zeta0", zeta0);
  doc.set("final_zeta", final_zeta);
  doc.set("n_pulses", static_cast<long long>(gammas.size()));
  doc.set("period", period);
  doc.save(sc.out_dir / "report.txt");
  report.outputs = {"zeta_t.csv", "report.txt"};
}

}  // namespace detail_scn

/// Validates and executes one scenario, writing all declared artifacts plus a
/// manifest into the output directory. Identical (kind, params, seed) produce
/// byte-identical numeric outputs; the manifest additionally records wall
/// time.
inline RunReport run_scenario(const Scenario& sc) {
  bool known = false;
  for (const char* k : scenario_kinds) known = known || sc.kind == k;
  if (!known)
    fail(errc::validation, "unknown kind '" + sc.kind + "'; valid kinds: " + scenario_kinds_joined());

  std::filesystem::create_directories(sc.out_dir);
  const KvDoc p = detail_scn::effective_params(sc);

  RunReport report;
  report.out_dir = sc.out_dir;
  const auto t0 = std::chrono::steady_clock::now();

  if (sc.kind == "simulate-2d")
    detail_scn::run_simulate_2d(sc, p, report);
  else if (sc.kind == "lattice")
    detail_scn::run_lattice(sc, p, report);
  else if (sc.kind == "entropy")
    detail_scn::run_entropy(sc, p, report);
  else if (sc.kind == "analyze-scales")
    detail_scn::run_analyze_scales(sc, p, report);
  else if (sc.kind == "spectrum")
    detail_scn::run_spectrum(sc, p, report);
  else if (sc.kind == "fractal-dim")
    detail_scn::run_fractal_dim(sc, p, report);
  else
    detail_scn::run_pulse_train(sc, p, report);

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  KvDoc manifest;
  manifest.set("toolkit_version", version_string);
  manifest.set("kind", sc.kind);
  manifest.set("seed", static_cast<long long>(sc.seed));
  manifest.set("threads", static_cast<long long>(sc.threads));
  manifest.set("out_dir", sc.out_dir.string());
  for (const auto& [k, v] : p.entries()) manifest.set("cfg." + k, v);
  for (const auto& o : report.outputs) manifest.set("output", o);
  manifest.set("wall_time_s", report.wall_seconds);
  manifest.save(sc.out_dir / "manifest.txt");
  return report;
}

}  // namespace vortexgas
