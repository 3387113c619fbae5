#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace vortexgas {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

/// Error codes carried by every toolkit exception. The CLI prints the code
/// name verbatim so callers can match on it.
enum class errc {
  validation,
  geometry,
  resolution,
  singularity,
  near_collision,
  domain_violation,
  range,
  log_domain,
  domain,
  infeasible,
  degenerate,
  step_too_large,
  scale_range,
  io,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::validation: return "validation";
    case errc::geometry: return "geometry";
    case errc::resolution: return "resolution";
    case errc::singularity: return "singularity";
    case errc::near_collision: return "near_collision";
    case errc::domain_violation: return "domain_violation";
    case errc::range: return "range";
    case errc::log_domain: return "log_domain";
    case errc::domain: return "domain";
    case errc::infeasible: return "infeasible";
    case errc::degenerate: return "degenerate";
    case errc::step_too_large: return "step_too_large";
    case errc::scale_range: return "scale_range";
    case errc::io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool ok, errc code, const std::string& message) {
  if (!ok) fail(code, message);
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm2() const { return x * x + y * y; }
  double norm() const { return std::sqrt(norm2()); }
};

inline bool finite(double v) { return std::isfinite(v); }
inline bool finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

}  // namespace vortexgas
