#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "weakkam/characteristics.hpp"
#include "weakkam/errors.hpp"
#include "weakkam/random.hpp"

using namespace weakkam;
using test_support::constant;

namespace {

Characteristic line(double start, double slope, int samples) {
  Characteristic c;
  c.start_step = 0;
  c.end_step = samples - 1;
  for (int k = 0; k < samples; ++k) c.lifted_positions.push_back(start + slope * k);
  return c;
}

}  // namespace

TEST_SUITE("characteristics") {
  TEST_CASE("free particle curves stand still") {
    const auto spec = HamiltonianSpec::mechanical(0.0);
    const Grids g = make_grids(64, 16, 1.0, 21);
    const EvolutionTrace trace = evolve(constant(g.space, 0.0), spec, g, 3, 3);
    const Characteristic c = backtrack(trace, 0.25, 3);
    CHECK(c.start_step == 0);
    CHECK(c.end_step == 48);
    CHECK(c.lifted_positions.size() == 49);
    for (double x : c.lifted_positions) CHECK(x == 0.25);
    CHECK(c.action == 0.0);
    CHECK_THROWS_AS(backtrack(trace, 0.25, 4), WindowExceeded);
    CHECK_THROWS_AS(backtrack(trace, 0.25, 1, 49), WindowExceeded);
  }

  TEST_CASE("end points snap to the nearest node") {
    const auto spec = HamiltonianSpec::mechanical(0.0);
    const Grids g = make_grids(64, 16, 1.0, 21);
    const EvolutionTrace trace = evolve(constant(g.space, 0.0), spec, g, 1, 1);
    CHECK(backtrack(trace, 0.2541, 1).lifted_positions.back() == 0.25);
    CHECK(backtrack(trace, 0.999, 1).lifted_positions.back() == 0.0);
  }

  TEST_CASE("tilted curves move at the tilt") {
    const auto spec = HamiltonianSpec::tilted_quadratic(0.5);
    const Grids g = make_grids(200, 50, 2.0, 201);
    Lcg64 rng(53);
    const EvolutionTrace trace = evolve(random_lipschitz_field(g.space, rng, 1.0), spec, g, 60, 8);
    for (double x : {0.0, 0.3, 0.71}) {
      const Characteristic c = backtrack(trace, x, 8);
      CHECK(std::abs(c.lifted_positions.back() - c.lifted_positions.front() - 0.5 * 8) <= 8 * g.velocity.spacing());
    }
  }

  TEST_CASE("actions add up to the value increment on node-aligned grids") {
    // Every velocity moves a whole number of nodes per step, so curves stay
    // on nodes and the dynamic programming identity is exact.
    const auto spec = HamiltonianSpec::mechanical(1.0, 0.5);
    const Grids g = make_grids(64, 16, 2.0, 17);
    Lcg64 rng(59);
    const EvolutionTrace trace = evolve(random_lipschitz_field(g.space, rng, 2.0), spec, g, 4, 4);
    for (int k = 0; k < 64; k += 5) {
      const Characteristic c = backtrack(trace, g.space.node(k), 4);
      const double increment = trace.snapshots.back()[k] - interp(trace.snapshots.front(), wrap(c.lifted_positions.front()));
      CHECK(std::abs(increment - c.action) <= 1e-10);
    }
  }

  TEST_CASE("rotation numbers") {
    {
      const auto spec = HamiltonianSpec::mechanical(1.0, 0.0);
      const Grids g = make_grids(100, 25, default_v_max(spec), 61);
      const EvolutionTrace trace = evolve(constant(g.space, 0.0), spec, g, 40, 32);
      CHECK(std::abs(rotation_number(trace, 16, 32).rho) <= 1e-2);
    }
    {
      const auto spec = HamiltonianSpec::tilted_quadratic(0.5);
      const Grids g = make_grids(100, 25, 2.0, 101);
      const EvolutionTrace trace = evolve(constant(g.space, 0.0), spec, g, 16, 16);
      const RotationEstimate r = rotation_number(trace, 16, 16);
      CHECK(std::abs(r.rho - 0.5) <= g.velocity.spacing());
      CHECK(r.per_probe.size() == 16);
      CHECK_THROWS_AS(rotation_number(trace, 16, 4), ConfigError);
    }
    {
      const auto spec = rescale(HamiltonianSpec::tilted_quadratic(0.5), 1, 2);
      const Grids g = make_grids(100, 25, default_v_max(spec), 61);
      const EvolutionTrace trace = evolve(constant(g.space, 0.0), spec, g, 16, 16);
      CHECK(std::abs(rotation_number(trace, 16, 16).rho) <= 1e-2);
    }
  }

  TEST_CASE("calibration defect") {
    {
      const auto spec = HamiltonianSpec::mechanical(0.0);
      const Grids g = make_grids(64, 16, 1.0, 21);
      const PeriodicSolution phi = periodic_solution(spec, g, constant(g.space, 0.0), 1e-12, 10);
      const EvolutionTrace trace = evolve(phi.snapshots.front(), spec, g, 2, 2);
      CHECK(calibration_defect(backtrack(trace, 0.4, 2), phi) <= 1e-12);
    }
    const auto spec = HamiltonianSpec::mechanical(1.0, 0.0).with_lambda_shift(1.0);
    const Grids g = make_grids(200, 50, default_v_max(spec), 121);
    const PeriodicSolution phi = periodic_solution(spec, g, constant(g.space, 0.0), 1e-10, 2000);
    const EvolutionTrace trace = evolve(phi.snapshots.front(), spec, g, 4, 4);
    const double bound = 5.0 * (g.space.spacing() + g.time.dt()) * 4;
    for (double x : {0.0, 0.25, 0.5, 0.8}) {
      Characteristic c = backtrack(trace, x, 4);
      const double defect = calibration_defect(c, phi);
      CHECK(defect <= bound);
      // A detour costs action the solution does not pay for.
      for (std::size_t k = 60; k < 140; ++k) c.lifted_positions[k] += 0.2;
      CHECK(calibration_defect(c, phi) > defect + 1e-3);
    }
  }

  TEST_CASE("gradient identity") {
    {
      const auto spec = HamiltonianSpec::tilted_quadratic(0.5);
      const Grids g = make_grids(100, 25, 2.0, 201);
      const PeriodicSolution phi =
          periodic_solution(spec.with_lambda_shift(0.125), g, constant(g.space, 0.0), 1e-12, 100);
      const EvolutionTrace trace = evolve(phi.snapshots.front(), phi.spec, g, 2, 2);
      CHECK(gradient_identity_check(backtrack(trace, 0.3, 2), phi) <= 1e-10);
    }
    const auto spec = HamiltonianSpec::mechanical(1.0, 0.0).with_lambda_shift(1.0);
    const Grids g = make_grids(200, 50, default_v_max(spec), 121);
    const PeriodicSolution phi = periodic_solution(spec, g, constant(g.space, 0.0), 1e-10, 2000);
    const EvolutionTrace trace = evolve(phi.snapshots.front(), spec, g, 2, 2);
    CHECK(gradient_identity_check(backtrack(trace, 0.0, 2), phi) <= 5e-2);
  }

  TEST_CASE("monotone difference") {
    const auto spec = HamiltonianSpec::mechanical(1.0, 0.5).with_lambda_shift(1.0);
    const Grids g = make_grids(100, 25, default_v_max(spec), 61);
    Lcg64 rng(61);
    const ValueField u = random_lipschitz_field(g.space, rng, 1.0);
    const EvolutionTrace t1 = evolve(u, spec, g, 4, 4);
    const EvolutionTrace t2 = evolve(u.shifted(0.75), spec, g, 4, 4);
    const EvolutionTrace t3 = evolve(random_lipschitz_field(g.space, rng, 1.0), spec, g, 4, 4);
    for (double x : {0.1, 0.5, 0.9}) {
      CHECK(monotone_difference(t1, t1, backtrack(t1, x, 4)) == 0.0);
      CHECK(monotone_difference(t2, t1, backtrack(t1, x, 4)) <= 1e-14);
      CHECK(monotone_difference(t3, t1, backtrack(t1, x, 4)) <= 5.0 * (g.space.spacing() + g.time.dt()));
    }
    const Grids other = make_grids(50, 25, default_v_max(spec), 61);
    const EvolutionTrace t4 = evolve(constant(other.space, 0.0), spec, other, 4, 4);
    CHECK_THROWS_AS(monotone_difference(t4, t1, backtrack(t1, 0.1, 4)), GridMismatch);
    const EvolutionTrace t5 = evolve(u, spec.with_lambda_shift(0.0), g, 4, 4);
    CHECK_THROWS_AS(monotone_difference(t5, t1, backtrack(t1, 0.1, 4)), GridMismatch);
  }

  TEST_CASE("difference oscillation vanishes on the periodic solution") {
    const auto spec = HamiltonianSpec::mechanical(1.0, 0.0).with_lambda_shift(1.0);
    const Grids g = make_grids(100, 25, default_v_max(spec), 61);
    const PeriodicSolution phi = periodic_solution(spec, g, constant(g.space, 0.0), 1e-12, 2000);
    const EvolutionTrace trace = evolve(phi.snapshots.front().shifted(2.0), spec, g, 2, 2);
    CHECK(difference_oscillation(trace, 0.0, phi, backtrack(trace, 0.3, 2)) <= 1e-10);
  }

  TEST_CASE("non-crossing") {
    const std::vector<Characteristic> parallel = {line(0.0, 0.01, 10), line(0.3, 0.01, 10), line(0.6, 0.01, 10)};
    CHECK(check_non_crossing(parallel, 1e-12).violations == 0);
    // The middle curve starts above the top one and ends below it.
    const std::vector<Characteristic> crossing = {line(0.0, 0.0, 10), line(0.5, 0.0, 10), line(0.7, -0.05, 10)};
    const CrossingReport r = check_non_crossing(crossing, 1e-12);
    CHECK(r.violations > 0);
    CHECK(r.max_overlap == doctest::Approx(0.2));
    CHECK(check_non_crossing(crossing, 0.25).violations == 0);
    // Cyclic order: the top curve must stay below the bottom one plus 1.
    const std::vector<Characteristic> wrapped = {line(0.0, 0.0, 5), line(0.9, 0.05, 5)};
    CHECK(check_non_crossing(wrapped, 1e-12).violations > 0);
    CHECK_THROWS_AS(check_non_crossing({line(0.0, 0.0, 5), line(0.5, 0.0, 6)}, 1e-3), ConfigError);
  }

  TEST_CASE("Aubry samples") {
    {
      const auto spec = HamiltonianSpec::mechanical(1.0, 0.0).with_lambda_shift(1.0);
      const Grids g = make_grids(100, 25, default_v_max(spec), 61);
      const PeriodicSolution phi = periodic_solution(spec, g, constant(g.space, 0.0), 1e-12, 2000);
      const EvolutionTrace trace = evolve(phi.snapshots.front(), spec, g, 16, 16);
      const AubrySample a = aubry_sample(trace, 16, 16, 3.0 * g.space.spacing());
      REQUIRE(a.points.size() == 1);
      CHECK(circle_dist(a.points[0], 0.0) <= 2.0 * g.space.spacing());
      CHECK(a.crossing.violations == 0);
      CHECK(a.raw_points.size() == 16);
    }
    {
      const auto spec = HamiltonianSpec::mechanical(0.0);
      const Grids g = make_grids(64, 16, 1.0, 21);
      const EvolutionTrace trace = evolve(constant(g.space, 0.0), spec, g, 4, 4);
      const AubrySample a = aubry_sample(trace, 8, 4, 3.0 * g.space.spacing());
      CHECK(a.points.size() == 8);
      CHECK(a.crossing.violations == 0);
      CHECK_THROWS_AS(aubry_sample(trace, 8, 4, 0.0), ConfigError);
      CHECK_THROWS_AS(aubry_sample(trace, 8, 5, 0.1), WindowExceeded);
    }
  }
}
