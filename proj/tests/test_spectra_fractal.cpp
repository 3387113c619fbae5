#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "vortexgas/fractal.hpp"
#include "vortexgas/rng.hpp"
#include "vortexgas/spectra.hpp"

using namespace vortexgas;
using Catch::Approx;

namespace {

std::vector<double> koch_scales(double diameter) {
  std::vector<double> s;
  for (int k = 2; k <= 11; ++k) s.push_back(diameter / (1 << k));
  return s;
}

VectorField2D random_velocity(int n, double dx, std::uint64_t seed) {
  Grid2D u(n, n, dx, dx), v(n, n, dx, dx);
  RandomSource rng(seed);
  for (auto& w : u.values) w = rng.uniform(-2.0, 2.0);
  for (auto& w : v.values) w = rng.uniform(-1.0, 3.0);
  return VectorField2D(std::move(u), std::move(v));
}

}  // namespace

TEST_CASE("box counting recovers the dimensions of standard fixtures") {
  const auto segment = make_segment_points(10000);
  const auto seg = box_counting_dimension(segment, dyadic_scales(segment.diameter(), 8));
  CHECK(seg.dimension == Approx(1.0).margin(0.05));

  const auto square = make_square_points(100000, 2026);
  const auto sq = box_counting_dimension(square, dyadic_scales(square.diameter(), 8));
  CHECK(sq.dimension == Approx(2.0).margin(0.05));

  const auto curve = make_koch_points(7);
  const auto koch = box_counting_dimension(curve, koch_scales(curve.diameter()));
  CHECK(koch.dimension == Approx(std::log(4.0) / std::log(3.0)).margin(0.05));
  CHECK(koch.r_squared > 0.99);
  CHECK(koch.counts.front() < koch.counts.back());
}

TEST_CASE("box counting is invariant under translation and uniform scaling") {
  const auto curve = make_koch_points(6);
  const auto base = box_counting_dimension(curve, koch_scales(curve.diameter()));

  PointSet2D moved = curve;
  for (auto& p : moved.points) {
    p.x = p.x * 37.5 + 1200.0;
    p.y = p.y * 37.5 - 88.0;
  }
  const auto other = box_counting_dimension(moved, koch_scales(moved.diameter()));
  CHECK(other.dimension == Approx(base.dimension).margin(0.02));
}

TEST_CASE("box counting validates its scale list") {
  const auto segment = make_segment_points(1000);
  CHECK_THROWS_AS(box_counting_dimension(segment, std::vector<double>{0.5, 0.25, 0.125}), Error);
  CHECK_THROWS_AS(
      box_counting_dimension(segment, std::vector<double>{0.5, 0.25, 0.125, 0.0625}), Error);
  PointSet2D tiny;
  tiny.points = {{0.0, 0.0}};
  CHECK_THROWS_AS(tiny.validate(), Error);
}

TEST_CASE("twindragon boundary dimension sits in the dragon range") {
  // optional stretch fixture; the mandatory ones are segment/square/Koch
  const auto boundary = make_twindragon_boundary_points(2000000, 512, 7);
  const auto r = box_counting_dimension(boundary, dyadic_scales(boundary.diameter(), 8));
  CHECK(r.dimension == Approx(1.52).margin(0.1));
}

TEST_CASE("power-law fit is exact on exact data") {
  for (double p : {-3.0, -5.0 / 3.0, -1.0, 0.5, 2.0, 3.0}) {
    std::vector<double> x, y;
    for (int i = 1; i <= 40; ++i) {
      x.push_back(0.37 * i);
      y.push_back(2.2 * std::pow(0.37 * i, p));
    }
    const auto fit = fit_power_law(x, y, {0.0, 1e9});
    CHECK(fit.exponent == Approx(p).margin(1e-12));
    CHECK(fit.prefactor == Approx(2.2).epsilon(1e-10));
    CHECK(fit.r_squared == Approx(1.0).margin(1e-12));
  }

  // y = 3 x^2 pins the prefactor
  std::vector<double> x{1.0, 2.0, 3.0, 4.0}, y{3.0, 12.0, 27.0, 48.0};
  const auto fit = fit_power_law(x, y, {0.5, 5.0});
  CHECK(fit.exponent == Approx(2.0).margin(1e-12));
  CHECK(fit.prefactor == Approx(3.0).epsilon(1e-12));
}

TEST_CASE("power-law fit under multiplicative noise") {
  RandomSource rng(99);
  std::vector<double> x, y;
  for (int i = 1; i <= 50; ++i) {
    const double xv = 0.5 * i;
    x.push_back(xv);
    y.push_back(1.7 * std::pow(xv, -5.0 / 3.0) * (1.0 + 0.01 * (2.0 * rng.uniform() - 1.0)));
  }
  const auto fit = fit_power_law(x, y, {0.0, 1e9});
  CHECK(fit.exponent == Approx(-5.0 / 3.0).margin(0.02));
}

TEST_CASE("power-law fit rejects bad input") {
  std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  std::vector<double> y{1.0, -2.0, 3.0, 4.0};
  CHECK_THROWS_AS(fit_power_law(x, y, {0.5, 5.0}), Error);  // log domain
  std::vector<double> ok{1.0, 2.0, 3.0, 4.0};
  CHECK_THROWS_AS(fit_power_law(x, ok, {3.5, 4.5}), Error);  // too few in range
}

TEST_CASE("single Fourier mode lands in its annulus") {
  const int n = 64;
  const double dx = 10.0;
  Grid2D u(n, n, dx, dx), v(n, n, dx, dx);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix)
      u.at(ix, iy) = std::sin(two_pi * 4.0 * ix / n);
  const auto s = radial_energy_spectrum(VectorField2D(std::move(u), std::move(v)));
  const double total = s.total_energy();
  REQUIRE(total > 0.0);
  CHECK(s.energies[3] / total >= 0.99);  // bin m = 4 is index 3
}

TEST_CASE("Parseval: spectral energy equals physical energy") {
  for (std::uint64_t seed : {1u, 2u}) {
    const auto field = random_velocity(48, 25.0, seed);  // non power of two too
    const auto s = radial_energy_spectrum(field);

    double um = 0.0, vm = 0.0;
    for (double w : field.u.values) um += w;
    for (double w : field.v.values) vm += w;
    um /= field.u.values.size();
    vm /= field.v.values.size();
    double phys = 0.0;
    for (std::size_t i = 0; i < field.u.values.size(); ++i)
      phys += (field.u.values[i] - um) * (field.u.values[i] - um) +
              (field.v.values[i] - vm) * (field.v.values[i] - vm);
    phys *= 0.5 / field.u.values.size();

    CHECK(s.total_energy() == Approx(phys).epsilon(0.01));
  }

  Grid2D u(16, 8, 1.0, 1.0), v(16, 8, 1.0, 1.0);
  CHECK_THROWS_AS(radial_energy_spectrum(VectorField2D(std::move(u), std::move(v))), Error);
}

TEST_CASE("synthesized power-law spectrum round-trips through the estimator") {
  const int n = 128;
  const double dx = 50.0;
  const auto field = make_powerlaw_spectrum_field(n, dx, -3.0, 77);
  const auto s = radial_energy_spectrum(field);

  const double dk = two_pi / (n * dx);
  const auto fit = fit_power_law(s, {1.5 * dk, (n / 2 - 4) * dk});
  CHECK(fit.exponent == Approx(-3.0).margin(0.1));
  CHECK(fit.r_squared > 0.999);

  // determinism per seed
  const auto again = make_powerlaw_spectrum_field(n, dx, -3.0, 77);
  CHECK(again.u.values == field.u.values);
  const auto other = make_powerlaw_spectrum_field(n, dx, -3.0, 78);
  CHECK(other.u.values != field.u.values);
}

TEST_CASE("candidate dissipation exponents are ranked by residual") {
  const auto field = make_powerlaw_spectrum_field(128, 50.0, -2.0, 5);
  const auto s = radial_energy_spectrum(field);
  const double dk = two_pi / (128 * 50.0);
  const std::vector<double> candidates{-5.0 / 3.0, -2.0};
  const auto fits = compare_candidate_exponents(s, {1.5 * dk, 40.0 * dk}, candidates);
  REQUIRE(fits.size() == 2);
  CHECK(fits[1].rms_log_residual < fits[0].rms_log_residual);
}

TEST_CASE("spectrum exponent relation maps (1,2] onto (2,3]") {
  CHECK(spectrum_exponent_relation(1.0).gamma == Approx(2.0));
  CHECK_FALSE(spectrum_exponent_relation(1.0).in_tornado_band);  // band is open at 2
  CHECK(spectrum_exponent_relation(2.0).gamma == Approx(3.0));
  CHECK(spectrum_exponent_relation(2.0).in_tornado_band);

  double prev = 0.0;
  for (double d = 1.0 + 1e-9; d <= 2.0; d += 0.05) {
    const auto rel = spectrum_exponent_relation(d);
    CHECK(rel.gamma > 2.0);
    CHECK(rel.gamma <= 3.0);
    CHECK(rel.gamma > prev);
    CHECK(rel.in_tornado_band);
    prev = rel.gamma;
  }

  // the Kolmogorov candidate maps back to a sub-unit cross-section dimension
  CHECK(cross_section_dimension_from_exponent(5.0 / 3.0) == Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(spectrum_exponent_relation(0.0), Error);
  CHECK_THROWS_AS(spectrum_exponent_relation(2.5), Error);

  const auto total = total_vorticity_support_dimension(1.0, 1.6);
  CHECK(total.value == Approx(2.6));
  CHECK(total.additivity_assumed);
}

TEST_CASE("sheet thickness scaling") {
  const auto unit = sheet_thickness_scaling(1.0, 0.7);
  CHECK(unit.area == Approx(1.0));
  CHECK(unit.zeta == Approx(0.7));

  // halving h multiplies zeta by 2^1.55
  const auto a = sheet_thickness_scaling(0.5, 0.7);
  CHECK(a.zeta / unit.zeta == Approx(std::pow(2.0, 1.55)).epsilon(1e-12));

  // log-log fit over h in [1e-3, 1] recovers the exponent exactly
  std::vector<double> h, z;
  for (int i = 0; i <= 30; ++i) {
    const double hv = std::pow(10.0, -3.0 + 3.0 * i / 30.0);
    h.push_back(hv);
    z.push_back(sheet_thickness_scaling(hv, 1.0).zeta);
  }
  const auto fit = fit_power_law(h, z, {0.0, 10.0});
  CHECK(fit.exponent == Approx(-1.55).margin(1e-12));

  CHECK_THROWS_AS(sheet_thickness_scaling(0.0, 1.0), Error);
  CHECK_THROWS_AS(sheet_thickness_scaling(1.0, -2.0), Error);
}
