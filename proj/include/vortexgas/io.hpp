#pragma once

#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vortexgas/common.hpp"
#include "vortexgas/detail/format.hpp"
#include "vortexgas/ensemble.hpp"
#include "vortexgas/fields.hpp"
#include "vortexgas/fractal.hpp"
#include "vortexgas/point_vortex.hpp"
#include "vortexgas/spectra.hpp"

namespace vortexgas {

/// Ordered key:value document ('#' comments, blank lines allowed). Used for
/// scenario configs, manifests and plain-text reports.
class KvDoc {
 public:
  KvDoc() = default;

  void set(const std::string& key, const std::string& value) { entries_.emplace_back(key, value); }
  void set(const std::string& key, double value) { set(key, detail::format_double(value)); }
  void set(const std::string& key, long long value) { set(key, detail::format_int(value)); }

  bool has(const std::string& key) const {
    for (const auto& [k, v] : entries_)
      if (k == key) return true;
    return false;
  }

  const std::string& get(const std::string& key) const {
    for (const auto& [k, v] : entries_)
      if (k == key) return v;
    fail(errc::validation, "missing required key '" + key + "'");
  }

  std::string get_or(const std::string& key, const std::string& fallback) const {
    for (const auto& [k, v] : entries_)
      if (k == key) return v;
    return fallback;
  }

  double get_double(const std::string& key) const { return detail::parse_double(get(key), key); }
  double get_double_or(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
  }
  long long get_int(const std::string& key) const { return detail::parse_int(get(key), key); }
  long long get_int_or(const std::string& key, long long fallback) const {
    return has(key) ? get_int(key) : fallback;
  }

  std::vector<std::string> get_all(const std::string& key) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries_)
      if (k == key) out.push_back(v);
    return out;
  }

  /// Comma/space separated list of doubles.
  std::vector<double> get_double_list(const std::string& key) const {
    std::vector<double> out;
    std::string item;
    std::istringstream in(get(key));
    while (std::getline(in, item, ',')) {
      std::istringstream parts(item);
      std::string tok;
      while (parts >> tok) out.push_back(detail::parse_double(tok, key));
    }
    require(!out.empty(), errc::validation, "empty list for key '" + key + "'");
    return out;
  }

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::string to_string() const {
    std::string out;
    for (const auto& [k, v] : entries_) {
      out += k;
      out += ": ";
      out += v;
      out += '\n';
    }
    return out;
  }

  static KvDoc parse(std::istream& in) {
    KvDoc doc;
    std::string line;
    while (std::getline(in, line)) {
      const std::string t = detail::trim(line);
      if (t.empty() || t[0] == '#') continue;
      const std::size_t pos = t.find(':');
      require(pos != std::string::npos, errc::validation, "expected 'key: value', got '" + t + "'");
      doc.set(detail::trim(t.substr(0, pos)), detail::trim(t.substr(pos + 1)));
    }
    return doc;
  }

  static KvDoc parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
  }

  static KvDoc load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(errc::io, "cannot open " + path.string());
    return parse(in);
  }

  void save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io, "cannot write " + path.string());
    out << to_string();
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

namespace detail_io {

inline void put_f64_le(std::ostream& out, double v) {
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  char b[8];
  for (int k = 0; k < 8; ++k) b[k] = static_cast<char>((bits >> (8 * k)) & 0xFF);
  out.write(b, 8);
}

inline double get_f64_le(std::istream& in) {
  char b[8];
  in.read(b, 8);
  if (!in) fail(errc::io, "truncated raw field file");
  std::uint64_t bits = 0;
  for (int k = 0; k < 8; ++k)
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[k])) << (8 * k);
  return std::bit_cast<double>(bits);
}

inline std::filesystem::path raw_path_for(const std::filesystem::path& manifest) {
  std::filesystem::path p = manifest;
  p.replace_extension(".f64");
  return p;
}

}  // namespace detail_io

/// Writes the two-file field pair: a key:value manifest and a row-major
/// little-endian float64 raw file alongside it.
inline void write_scalar_field(const ScalarField2D& field, const std::filesystem::path& manifest_path) {
  field.validate();
  const auto raw = detail_io::raw_path_for(manifest_path);
  KvDoc doc;
  doc.set("nx", static_cast<long long>(field.grid.nx));
  doc.set("ny", static_cast<long long>(field.grid.ny));
  doc.set("dx", field.grid.dx);
  doc.set("dy", field.grid.dy);
  doc.set("x0", field.grid.x0);
  doc.set("y0", field.grid.y0);
  doc.set("quantity", quantity_name(field.quantity));
  doc.set("units", quantity_units(field.quantity));
  doc.set("data", raw.filename().string());
  doc.save(manifest_path);

  std::ofstream out(raw, std::ios::binary);
  if (!out) fail(errc::io, "cannot write " + raw.string());
  for (double v : field.grid.values) detail_io::put_f64_le(out, v);
}

inline ScalarField2D read_scalar_field(const std::filesystem::path& manifest_path) {
  const KvDoc doc = KvDoc::load(manifest_path);
  Grid2D g(static_cast<int>(doc.get_int("nx")), static_cast<int>(doc.get_int("ny")),
           doc.get_double("dx"), doc.get_double("dy"), doc.get_double_or("x0", 0.0),
           doc.get_double_or("y0", 0.0));
  std::filesystem::path raw = manifest_path.parent_path() / doc.get_or("data", "");
  if (doc.get_or("data", "").empty()) raw = detail_io::raw_path_for(manifest_path);
  std::ifstream in(raw, std::ios::binary);
  if (!in) fail(errc::io, "cannot open " + raw.string());
  for (auto& v : g.values) v = detail_io::get_f64_le(in);
  const Quantity q =
      doc.get_or("quantity", "generic") == "vorticity" ? Quantity::vorticity : Quantity::generic;
  return ScalarField2D(std::move(g), q);
}

/// CSV export (x, y, value) for external plotting.
inline void write_field_csv(const ScalarField2D& field, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io, "cannot write " + path.string());
  out << "x,y,value\n";
  const Grid2D& g = field.grid;
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix)
      out << detail::format_double(g.x_of(ix)) << ',' << detail::format_double(g.y_of(iy)) << ','
          << detail::format_double(g.at(ix, iy)) << '\n';
}

inline void write_tracks_csv(const Trajectory& traj, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io, "cannot write " + path.string());
  out << "t,vortex_id,x,y\n";
  for (std::size_t s = 0; s < traj.n_samples(); ++s)
    for (std::size_t v = 0; v < traj.n_vortices; ++v) {
      const Vec2 p = traj.position(s, v);
      out << detail::format_double(traj.times[s]) << ',' << v << ','
          << detail::format_double(p.x) << ',' << detail::format_double(p.y) << '\n';
    }
}

inline void write_diagnostics_csv(const Trajectory& traj, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io, "cannot write " + path.string());
  out << "t,H,Gamma,Mx,My,I\n";
  for (std::size_t s = 0; s < traj.n_samples(); ++s)
    out << detail::format_double(traj.times[s]) << ',' << detail::format_double(traj.hamiltonian[s])
        << ',' << detail::format_double(traj.gamma_total[s]) << ','
        << detail::format_double(traj.center_x[s]) << ',' << detail::format_double(traj.center_y[s])
        << ',' << detail::format_double(traj.moment[s]) << '\n';
}

inline void write_levels_csv(std::span<const EnergyLevel> levels, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io, "cannot write " + path.string());
  out << "E,I\n";
  for (const auto& l : levels)
    out << detail::format_double(l.energy) << ',' << detail::format_double(l.moment) << '\n';
}

inline std::vector<EnergyLevel> read_levels_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io, "cannot open " + path.string());
  std::vector<EnergyLevel> levels;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    if (first && (t.find("E") == 0 || t.find("e") == 0)) {
      first = false;
      continue;  // header
    }
    first = false;
    const std::size_t comma = t.find(',');
    EnergyLevel l;
    l.energy = detail::parse_double(t.substr(0, comma), "E");
    l.moment = comma == std::string::npos ? 0.0 : detail::parse_double(t.substr(comma + 1), "I");
    levels.push_back(l);
  }
  require(levels.size() >= 2, errc::validation, "levels file needs at least 2 rows");
  return levels;
}

inline void write_points_csv(const PointSet2D& ps, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io, "cannot write " + path.string());
  out << "x,y\n";
  for (const auto& p : ps.points)
    out << detail::format_double(p.x) << ',' << detail::format_double(p.y) << '\n';
}

inline PointSet2D read_points_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io, "cannot open " + path.string());
  PointSet2D ps;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    if (first && t.find("x") == 0) {
      first = false;
      continue;
    }
    first = false;
    const std::size_t comma = t.find(',');
    require(comma != std::string::npos, errc::validation, "points CSV needs two columns");
    ps.points.push_back({detail::parse_double(t.substr(0, comma), "x"),
                         detail::parse_double(t.substr(comma + 1), "y")});
  }
  ps.validate();
  return ps;
}

inline void write_spectrum_csv(const SpectrumSeries& s, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io, "cannot write " + path.string());
  out << "k,E\n";
  for (std::size_t i = 0; i < s.wavenumbers.size(); ++i)
    out << detail::format_double(s.wavenumbers[i]) << ',' << detail::format_double(s.energies[i])
        << '\n';
}

}  // namespace vortexgas
