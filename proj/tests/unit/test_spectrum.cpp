#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support.hpp"
#include "weakkam/errors.hpp"
#include "weakkam/random.hpp"
#include "weakkam/spectrum.hpp"

using namespace weakkam;
using test_support::constant;

namespace {

// Stationary solution of p^2/2 + cos(2 pi x) = 1: |phi'| = 2 |sin(pi x)|,
// smooth at x = 0 and with a concave kink at x = 1/2. Simpson quadrature.
double pendulum_phi(double x) {
  const double y = std::min(x, 1.0 - x);
  const int n = 200;
  const double h = y / n;
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    sum += w * 2.0 * std::sin(std::numbers::pi * k * h);
  }
  return sum * h / 3.0;
}

}  // namespace

TEST_SUITE("spectrum") {
  TEST_CASE("constant potential gives lambda exactly") {
    const auto spec = HamiltonianSpec::mechanical(0.0).with_lambda_shift(-1.0);
    const Grids g = make_grids(64, 16, default_v_max(spec), 21);
    const EvolutionTrace trace = evolve(constant(g.space, 0.0), spec, g, 10, 1);
    CHECK(trace.snapshots[1].min() - trace.snapshots[0].min() == doctest::Approx(-1.0).epsilon(1e-15));
    const LambdaEstimate lambda = estimate_lambda(trace);
    CHECK(std::abs(lambda.value - 1.0) <= 1e-13);
    CHECK(lambda.methods_agree());
  }

  TEST_CASE("mechanical critical value") {
    const auto spec = HamiltonianSpec::mechanical(1.0, 0.0);
    const Grids g = make_grids(200, 50, default_v_max(spec), 121);
    const LambdaEstimate lambda = estimate_lambda(evolve(constant(g.space, 0.0), spec, g, 40, 1));
    CHECK(std::abs(lambda.value - 1.0) <= 2e-2);
    CHECK(lambda.methods_agree());
  }

  TEST_CASE("tilted critical value equals minus the grid minimum of L") {
    const auto spec = HamiltonianSpec::tilted_quadratic(0.5);
    const Grids g = make_grids(400, 50, 2.0, 201);
    double min_l = 1e300;
    for (int j = 0; j < g.velocity.size(); ++j) {
      const double v = g.velocity.velocity(j);
      min_l = std::min(min_l, 0.5 * v * v - 0.5 * v);
    }
    const LambdaEstimate lambda = estimate_lambda(evolve(constant(g.space, 0.0), spec, g, 12, 1));
    CHECK(std::abs(lambda.value + min_l) <= 1e-12);
    CHECK(std::abs(lambda.value - 0.125) <= 1e-3);
  }

  TEST_CASE("lambda does not depend on the initial field") {
    const auto spec = HamiltonianSpec::mechanical(1.0, 0.5);
    const Grids g = make_grids(100, 25, default_v_max(spec), 61);
    Lcg64 rng(41);
    double lo = 1e300, hi = -1e300, dispersion = 0.0;
    for (int k = 0; k < 5; ++k) {
      const LambdaEstimate l = estimate_lambda(evolve(random_lipschitz_field(g.space, rng, 2.0), spec, g, 40, 1));
      lo = std::min(lo, l.value);
      hi = std::max(hi, l.value);
      dispersion = std::max(dispersion, l.dispersion);
    }
    CHECK(hi - lo <= std::max(2.0 * dispersion, 1e-12));
  }

  TEST_CASE("estimate_lambda input checks") {
    const auto spec = HamiltonianSpec::mechanical(1.0);
    const Grids g = make_grids(32, 8, default_v_max(spec), 21);
    const EvolutionTrace short_trace = evolve(constant(g.space, 0.0), spec, g, 9, 1);
    CHECK_THROWS_AS(estimate_lambda(short_trace), InsufficientData);
    const EvolutionTrace trace = evolve(constant(g.space, 0.0), spec, g, 10, 1);
    CHECK_THROWS_AS(estimate_lambda(trace, 0.95), ConfigError);
  }

  TEST_CASE("periodic solution, free particle") {
    const auto spec = HamiltonianSpec::mechanical(0.0);
    const Grids g = make_grids(64, 16, default_v_max(spec), 21);
    const PeriodicSolution phi = periodic_solution(spec, g, constant(g.space, 3.0), 1e-12, 10);
    CHECK(phi.residual <= 1e-12);
    CHECK(phi.snapshots.size() == 17);
    for (const auto& s : phi.snapshots) CHECK(sup_dist(s, constant(g.space, 0.0)) == 0.0);
  }

  TEST_CASE("periodic solution, pendulum") {
    const auto spec = HamiltonianSpec::mechanical(1.0, 0.0).with_lambda_shift(1.0);
    const Grids g = make_grids(200, 50, default_v_max(spec), 121);
    const PeriodicSolution phi = periodic_solution(spec, g, constant(g.space, 0.0), 1e-10, 2000);
    CHECK(phi.lambda() == 1.0);
    CHECK(phi.snapshots.front().min() == 0.0);
    CHECK(sup_dist(phi.snapshots.front(), sample(g.space, pendulum_phi)) <= 3e-2);
    CHECK(std::abs(fixed_point_residual(phi) - phi.residual) <= 1e-15);
    CHECK(&phi.phase(53) == &phi.phase(3));
    CHECK(&phi.phase(-1) == &phi.phase(49));
  }

  TEST_CASE("periodic solution reports non-convergence") {
    const auto spec = HamiltonianSpec::mechanical(1.0, 0.5).with_lambda_shift(1.0);
    const Grids g = make_grids(64, 16, default_v_max(spec), 31);
    Lcg64 rng(43);
    try {
      periodic_solution(spec, g, random_lipschitz_field(g.space, rng, 3.0), 1e-14, 1);
      FAIL("expected NoConvergence");
    } catch (const NoConvergence& e) {
      CHECK(e.last_residual() > 1e-14);
    }
  }

  TEST_CASE("liminf solution agrees with power iteration") {
    const auto spec = HamiltonianSpec::mechanical(1.0, 0.0).with_lambda_shift(1.0);
    const Grids g = make_grids(100, 25, default_v_max(spec), 61);
    Lcg64 rng(47);
    const EvolutionTrace trace = evolve(random_lipschitz_field(g.space, rng, 1.0), spec, g, 40, 40);
    const PeriodicSolution from_trace = liminf_solution(trace, 0.0);
    const PeriodicSolution iterated = periodic_solution(spec, g, constant(g.space, 0.0), 1e-12, 2000);
    CHECK(from_trace.snapshots.size() == 26);
    CHECK(from_trace.residual <= 1e-8);
    CHECK(sup_dist(from_trace.snapshots.front(), iterated.snapshots.front()) <= 5e-2);
    CHECK_THROWS_AS(liminf_solution(evolve(constant(g.space, 0.0), spec, g, 19, 4), 0.0), InsufficientData);
  }
}
