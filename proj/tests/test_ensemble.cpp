#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "vortexgas/ensemble.hpp"
#include "vortexgas/rng.hpp"

using namespace vortexgas;
using Catch::Approx;

namespace {

EnsembleSpec two_level() {
  EnsembleSpec s;
  s.levels = {{0.0, 0.0}, {1.0, 0.0}};
  return s;
}

/// Random feasible distribution matching the (sum, <E>, <I>) constraints:
/// a random start is projected onto the affine constraint set; draws with
/// negative entries are rejected and retried.
std::vector<double> random_feasible(const EnsembleSpec& spec, double te, double ti, bool with_i,
                                    RandomSource& rng) {
  const std::size_t k = spec.levels.size();
  const std::size_t rows = with_i ? 3 : 2;
  for (int attempt = 0; attempt < 4000; ++attempt) {
    std::vector<double> q(k);
    for (auto& v : q) v = rng.uniform(0.01, 1.0);

    // Gram matrix of the constraint rows a_0 = 1, a_1 = E, a_2 = I
    auto row = [&](std::size_t r, std::size_t j) {
      if (r == 0) return 1.0;
      if (r == 1) return spec.levels[j].energy;
      return spec.levels[j].moment;
    };
    std::vector<double> g(rows * rows, 0.0), rhs(rows, 0.0);
    const double targets[3] = {1.0, te, ti};
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < rows; ++c)
        for (std::size_t j = 0; j < k; ++j) g[r * rows + c] += row(r, j) * row(c, j);
      rhs[r] = targets[r];
      for (std::size_t j = 0; j < k; ++j) rhs[r] -= row(r, j) * q[j];
    }
    // solve g * lambda = rhs by Gaussian elimination
    std::vector<double> lam = rhs;
    for (std::size_t col = 0; col < rows; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < rows; ++r)
        if (std::abs(g[r * rows + col]) > std::abs(g[piv * rows + col])) piv = r;
      for (std::size_t c = 0; c < rows; ++c) std::swap(g[col * rows + c], g[piv * rows + c]);
      std::swap(lam[col], lam[piv]);
      for (std::size_t r = 0; r < rows; ++r) {
        if (r == col) continue;
        const double f = g[r * rows + col] / g[col * rows + col];
        for (std::size_t c = 0; c < rows; ++c) g[r * rows + c] -= f * g[col * rows + c];
        lam[r] -= f * lam[col];
      }
    }
    for (std::size_t r = 0; r < rows; ++r) lam[r] /= g[r * rows + r];

    bool ok = true;
    for (std::size_t j = 0; j < k && ok; ++j) {
      for (std::size_t r = 0; r < rows; ++r) q[j] += lam[r] * row(r, j);
      ok = q[j] > 0.0;
    }
    if (!ok) continue;

    // verify the projection landed on the constraints
    double s = 0.0, me = 0.0, mi = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      s += q[j];
      me += q[j] * spec.levels[j].energy;
      mi += q[j] * spec.levels[j].moment;
    }
    if (std::abs(s - 1.0) < 1e-9 && std::abs(me - te) < 1e-6 && (!with_i || std::abs(mi - ti) < 1e-6))
      return q;
  }
  FAIL("could not draw a feasible distribution");
  return {};
}

}  // namespace

TEST_CASE("partition function for simple level sets") {
  const auto s = two_level();
  CHECK(partition_function(s.levels, 0.0) == Approx(2.0).epsilon(1e-14));
  CHECK(partition_function(s.levels, std::log(2.0)) == Approx(1.5).epsilon(1e-14));

  EnsembleSpec five;
  five.levels = {{-1.0, 0.3}, {0.2, 0.1}, {0.5, 2.0}, {1.4, 0.0}, {2.0, 1.0}};
  CHECK(partition_function(five.levels, 0.0, 0.0) == Approx(5.0).epsilon(1e-14));

  // max-shift keeps extreme multipliers finite internally; converting back to
  // Z itself can still overflow the double range
  CHECK(std::isfinite(partition_function(s.levels, 500.0)));
  CHECK_THROWS_AS(partition_function(s.levels, -1e4), Error);
}

TEST_CASE("probabilities normalize and respect the exponent sign") {
  const auto s = two_level();
  const auto uniform = probabilities(s.levels, 0.0);
  CHECK(uniform[0] == Approx(0.5).epsilon(1e-14));
  CHECK(uniform[1] == Approx(0.5).epsilon(1e-14));

  const auto p = probabilities(s.levels, std::log(2.0));
  CHECK(p[0] == Approx(2.0 / 3.0).epsilon(1e-13));
  CHECK(p[1] == Approx(1.0 / 3.0).epsilon(1e-13));

  // negative temperature favors the high-energy level
  const auto hot = probabilities(s.levels, -0.7);
  CHECK(hot[1] > hot[0]);

  double sum = 0.0;
  for (double v : probabilities(s.levels, 1.3, -0.4)) sum += v;
  CHECK(sum == Approx(1.0).margin(1e-12));
}

TEST_CASE("entropy of elementary distributions") {
  const std::vector<double> uniform4(4, 0.25);
  CHECK(entropy(uniform4) == Approx(std::log(4.0)).epsilon(1e-14));

  const std::vector<double> degenerate{1.0, 0.0, 0.0};
  CHECK(entropy(degenerate) == 0.0);

  const std::vector<double> skew{0.7, 0.2, 0.1};
  CHECK(entropy(skew) < std::log(3.0));

  CHECK_THROWS_AS(entropy(std::vector<double>{0.5, 0.6}), Error);
  CHECK_THROWS_AS(entropy(std::vector<double>{1.2, -0.2}), Error);
}

TEST_CASE("two-level analytic inversion") {
  const auto s = two_level();

  const auto mid = solve_multipliers(s, 0.5);
  CHECK(mid.beta == Approx(0.0).margin(1e-10));
  CHECK(mid.infinite_temperature);
  CHECK(std::isinf(mid.temperature));

  const auto cold = solve_multipliers(s, 1.0 / 3.0);
  CHECK(cold.beta == Approx(std::log(2.0)).margin(1e-9));
  CHECK(cold.p[0] == Approx(2.0 / 3.0).margin(1e-10));
  CHECK(cold.p[1] == Approx(1.0 / 3.0).margin(1e-10));
  CHECK(cold.temperature == Approx(1.0 / std::log(2.0)).epsilon(1e-9));

  // above the midpoint the temperature is negative
  const auto hot = solve_multipliers(s, 2.0 / 3.0);
  CHECK(hot.beta == Approx(-std::log(2.0)).margin(1e-9));
  CHECK(hot.temperature < 0.0);
}

TEST_CASE("solver honors the joint moment constraint") {
  EnsembleSpec s;
  s.levels = {{0.0, 0.0}, {1.0, 2.0}, {2.0, 1.0}, {3.0, 3.0}};
  const auto sol = solve_multipliers(s, 1.4, 1.7);
  REQUIRE(sol.moment_constrained);
  double me = 0.0, mi = 0.0;
  for (std::size_t j = 0; j < sol.p.size(); ++j) {
    me += sol.p[j] * s.levels[j].energy;
    mi += sol.p[j] * s.levels[j].moment;
  }
  CHECK(me == Approx(1.4).margin(1e-9));
  CHECK(mi == Approx(1.7).margin(1e-9));

  // p comes back normalized
  double sum = 0.0;
  for (double v : sol.p) sum += v;
  CHECK(sum == Approx(1.0).margin(1e-12));
}

TEST_CASE("solver rejects infeasible and degenerate targets") {
  const auto s = two_level();
  CHECK_THROWS_AS(solve_multipliers(s, 1.5), Error);
  CHECK_THROWS_AS(solve_multipliers(s, 0.0), Error);          // on the hull boundary
  CHECK_THROWS_AS(solve_multipliers(s, 1.0 - 1e-12), Error);  // within the margin

  EnsembleSpec flat;
  flat.levels = {{1.0, 0.0}, {1.0, 1.0}};
  CHECK_THROWS_AS(solve_multipliers(flat, 1.0), Error);  // beta unidentifiable
}

TEST_CASE("temperature identity: dS/d<E> equals beta") {
  const auto s = two_level();

  const auto a = temperature_identity_check(s, 1.0 / 3.0, 1e-4);
  CHECK(std::abs(a.beta - a.entropy_derivative) < 1e-6);
  CHECK(a.beta == Approx(std::log(2.0)).margin(1e-9));

  const auto b = temperature_identity_check(s, 0.5, 1e-4);
  CHECK(b.beta == Approx(0.0).margin(1e-9));
  CHECK(b.entropy_derivative == Approx(0.0).margin(1e-6));

  const auto c = temperature_identity_check(s, 2.0 / 3.0, 1e-4);
  CHECK(c.beta == Approx(-std::log(2.0)).margin(1e-9));
  CHECK(std::abs(c.beta - c.entropy_derivative) < 1e-6);

  // stepping over the hull edge is a distinct error
  CHECK_THROWS_MATCHES(temperature_identity_check(s, 1.0 - 1e-5, 1e-4), Error,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("step_too_large")));
}

TEST_CASE("maximum-entropy dominance over random feasible distributions") {
  EnsembleSpec s;
  s.levels = {{0.0, 0.5}, {0.7, 1.1}, {1.3, 0.2}, {2.0, 0.9}, {2.6, 1.8}};
  const double te = 1.2, ti = 0.9;
  const auto sol = solve_multipliers(s, te, ti);

  RandomSource rng(20260810);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto q = random_feasible(s, te, ti, true, rng);
    CHECK(sol.entropy >= entropy(q) - 1e-9);
  }
}

TEST_CASE("beta is strictly decreasing in the target energy") {
  const auto s = two_level();
  double prev = std::numeric_limits<double>::infinity();
  for (double te = 0.05; te < 0.99; te += 0.05) {
    const double beta = solve_multipliers(s, te).beta;
    CHECK(beta < prev);
    prev = beta;
    CHECK((te > 0.5) == (beta < 0.0));
  }
}

TEST_CASE("energy shift covariance: p and beta are unchanged") {
  EnsembleSpec s;
  s.levels = {{0.1, 0.0}, {0.9, 0.4}, {1.7, 1.2}};
  const auto base = solve_multipliers(s, 0.8, 0.5);

  EnsembleSpec shifted = s;
  const double c = 11.25;
  for (auto& l : shifted.levels) l.energy += c;
  const auto moved = solve_multipliers(shifted, 0.8 + c, 0.5);

  CHECK(moved.beta == Approx(base.beta).margin(1e-8));
  CHECK(moved.gamma == Approx(base.gamma).margin(1e-8));
  for (std::size_t j = 0; j < base.p.size(); ++j)
    CHECK(moved.p[j] == Approx(base.p[j]).margin(1e-10));
}

TEST_CASE("heat flows from hot to cold through the signed-temperature order") {
  // the system with the smaller beta = 1/T is hotter and loses energy
  CHECK(heat_flow_direction(1.0, 2.0) == HeatFlow::system2_loses);
  CHECK(heat_flow_direction(1.0, -1.0) == HeatFlow::system2_loses);
  CHECK(heat_flow_direction(-3.0, -2.0) == HeatFlow::system2_loses);

  // antisymmetry: swapping the arguments swaps the loser
  const std::pair<double, double> pairs[] = {{1.0, 2.0}, {1.0, -1.0}, {-3.0, -2.0},
                                             {0.5, 3.0}, {2.0, -0.5}, {-1.0, -4.0}};
  for (const auto& [t1, t2] : pairs) {
    const auto fwd = heat_flow_direction(t1, t2);
    const auto rev = heat_flow_direction(t2, t1);
    CHECK(fwd != rev);
    CHECK((fwd == HeatFlow::system1_loses) == (rev == HeatFlow::system2_loses));
  }

  CHECK(heat_flow_direction(1.5, 1.5) == HeatFlow::equilibrium);
  CHECK_THROWS_AS(heat_flow_direction(0.0, 1.0), Error);
  CHECK_THROWS_AS(heat_flow_direction(1.0, 0.0), Error);
}
