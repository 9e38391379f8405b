#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "support.hpp"
#include "weakkam/errors.hpp"
#include "weakkam/invariants.hpp"
#include "weakkam/operator.hpp"
#include "weakkam/random.hpp"

using namespace weakkam;
using test_support::constant;

namespace {

// One step computed straight from the definition, with the library's L and
// interpolation but none of the stepper's tables.
ValueField reference_step(const ValueField& u, const HamiltonianSpec& spec, const Grids& g) {
  const double dt = g.time.dt();
  const double t_mid = g.time.midpoint(u.step_index());
  return sample(
      g.space,
      [&](double x) {
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < g.velocity.size(); ++j) {
          const double v = g.velocity.velocity(j);
          const double foot = wrap(x - v * dt);
          best = std::min(best, interp(u, foot) + dt * legendre(spec, t_mid, foot, v).value);
        }
        return best;
      },
      u.step_index() + 1);
}

}  // namespace

TEST_SUITE("operator") {
  TEST_CASE("velocity grid") {
    const VelocityGrid v(2.0, 9);
    CHECK(v.velocity(4) == 0.0);
    CHECK(v.velocity(0) == -2.0);
    CHECK(v.velocity(8) == 2.0);
    CHECK(v.spacing() == 0.5);
    CHECK_THROWS_AS(VelocityGrid(2.0, 10), ConfigError);
    CHECK_THROWS_AS(VelocityGrid(2.0, 7), ConfigError);
    CHECK_THROWS_AS(VelocityGrid(0.0, 9), ConfigError);
  }

  TEST_CASE("make_grids enforces the step bound") {
    CHECK_THROWS_AS(make_grids(100, 4, 2.0, 21), ConfigError);
    CHECK_NOTHROW(make_grids(100, 5, 2.0, 21));
    CHECK(default_v_max(HamiltonianSpec::mechanical(0.0)) >= 1.0);
  }

  TEST_CASE("step examples") {
    const Grids g = make_grids(64, 16, 2.0, 33);
    FootTable feet;
    const ValueField free = step(constant(g.space, 0.0), HamiltonianSpec::mechanical(0.0), g, &feet);
    CHECK(free.max() == 0.0);
    CHECK(free.min() == 0.0);
    CHECK(free.step_index() == 1);
    CHECK(feet.step_index == 1);
    for (double v : feet.argmin_velocity) CHECK(v == 0.0);

    // H = p^2/2 + 1: every step lowers a constant by dt.
    const auto raised = HamiltonianSpec::mechanical(0.0).with_lambda_shift(-1.0);
    const ValueField lowered = step(constant(g.space, 0.0), raised, g);
    CHECK(lowered.max() == doctest::Approx(-1.0 / 16).epsilon(1e-15));
    CHECK(lowered.min() == doctest::Approx(-1.0 / 16).epsilon(1e-15));

    // Tilted c = 0.5: the cheapest velocity is 0.5, a grid node here.
    const ValueField tilted = step(constant(g.space, 0.0), HamiltonianSpec::tilted_quadratic(0.5), g, &feet);
    CHECK(tilted.min() == doctest::Approx(-0.125 / 16));
    for (double v : feet.argmin_velocity) CHECK(v == 0.5);
  }

  TEST_CASE("step matches the direct minimization") {
    Lcg64 rng(31);
    const HamiltonianSpec specs[] = {HamiltonianSpec::mechanical(1.0, 0.5), HamiltonianSpec::quartic(0.5, 0.3),
                                     HamiltonianSpec::tilted_quadratic(0.3),
                                     rescale(HamiltonianSpec::mechanical(1.0, 0.5), 1, 2).with_lambda_shift(0.4)};
    for (const auto& spec : specs) {
      const Grids g = make_grids(48, 40, default_v_max(spec), 41);
      const LaxOleinikStepper stepper(spec, g);
      ValueField u = random_fourier_field(g.space, rng, 1.0).with_step_index(7);
      CHECK(sup_dist(stepper.step(u), reference_step(u, spec, g)) <= 1e-12);
      for (int k = 0; k < 200; ++k) {
        const auto s = static_cast<std::int64_t>(uniform01(rng) * 100);
        const int i = static_cast<int>(uniform01(rng) * 48);
        const int j = static_cast<int>(uniform01(rng) * 41);
        const double v = g.velocity.velocity(j);
        const double foot = wrap(g.space.node(i) - v * g.time.dt());
        const double direct = g.time.dt() * legendre(spec, g.time.midpoint(s), foot, v).value;
        CHECK(std::abs(stepper.step_cost(s, i, j) - direct) <= 1e-12);
      }
    }
  }

  TEST_CASE("period map equals m_t steps and is deterministic") {
    const auto spec = HamiltonianSpec::mechanical(1.0, 0.5);
    const Grids g = make_grids(64, 16, default_v_max(spec), 31);
    Lcg64 rng(37);
    const ValueField u = random_lipschitz_field(g.space, rng, 2.0);
    ValueField stepped = u;
    for (int k = 0; k < 16; ++k) stepped = step(stepped, spec, g);
    const auto [mapped, tables] = period_map(u, spec, g);
    CHECK(tables.size() == 16);
    CHECK(mapped.step_index() == 16);
    CHECK(sup_dist(mapped, stepped) == 0.0);
    CHECK(sup_dist(period_map(u, spec, g).first, mapped) == 0.0);
    CHECK_THROWS_AS(period_map(u.with_step_index(3), spec, g), ConfigError);
  }

  TEST_CASE("free evolution follows the Hopf-Lax formula") {
    const auto spec = HamiltonianSpec::mechanical(0.0);
    const Grids g = make_grids(100, 25, default_v_max(spec), 41);
    const auto u0 = [](double y) { return std::cos(2.0 * std::numbers::pi * y); };
    const EvolutionTrace trace = evolve(sample(g.space, u0), spec, g, 2, 2);
    CHECK(trace.snapshots.size() == 3);
    CHECK(trace.n_periods_run == 2);
    // u(T, x) = min_y u0(y) + (x - y)^2 / (2 T), T = 2.
    const ValueField exact = sample(g.space, [&](double x) {
      double best = 1e300;
      for (int k = -20000; k <= 20000; ++k) {
        const double y = x + k / 20000.0;
        best = std::min(best, u0(y) + (x - y) * (x - y) / 4.0);
      }
      return best;
    });
    CHECK(sup_dist(trace.snapshots.back(), exact) <= 5e-3);
    CHECK(trace.snapshots.back().max() - trace.snapshots.back().min() < 0.2);
  }

  TEST_CASE("evolve retains the last window") {
    const auto spec = HamiltonianSpec::mechanical(1.0, 0.5);
    const Grids g = make_grids(32, 8, default_v_max(spec), 21);
    const EvolutionTrace trace = evolve(constant(g.space, 0.0), spec, g, 6, 2);
    CHECK(trace.final_step() == 48);
    CHECK(trace.first_retained_step() == 33);
    CHECK(trace.foot_table(33).step_index == 33);
    CHECK(trace.field_at(40).step_index() == 40);
    CHECK(trace.field_at(8).step_index() == 8);
    CHECK_THROWS_AS(trace.foot_table(32), WindowExceeded);
    CHECK_THROWS_AS(trace.field_at(20), WindowExceeded);
    CHECK_THROWS_AS(evolve(constant(g.space, 0.0), spec, g, 0), ConfigError);
  }

  TEST_CASE("invariant suite") {
    InvariantSuiteConfig config;
    config.n_x = 64;
    config.m_t = 16;
    config.n_v = 31;
    config.n_pairs = 12;
    config.n_compactness = 8;
    for (const auto& result : run_invariant_suite(config)) {
      CAPTURE(result.name);
      CAPTURE(result.worst);
      CHECK(result.checks > 0);
      CHECK(result.passed());
    }
  }
}
