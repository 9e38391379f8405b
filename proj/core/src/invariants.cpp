#include "weakkam/invariants.hpp"

#include <algorithm>
#include <cmath>

#include "weakkam/operator.hpp"
#include "weakkam/random.hpp"

namespace weakkam {

double ulp_of(double x) {
  int exponent = 0;
  std::frexp(std::abs(x), &exponent);
  return std::ldexp(1.0, exponent - 53);
}

double lipschitz_bound(const HamiltonianSpec& spec, double v_max, int n_v) {
  const VelocityGrid velocities(v_max, n_v);
  double slope = 0.0;
  double force = 0.0;
  for (int s = 0; s < 16; ++s) {
    const double t = s / 16.0;
    for (int k = 0; k < 64; ++k) {
      const double x = k / 64.0;
      force = std::max(force, std::abs(partials(spec, t, x, 0.0).h_x));
      for (int j : {0, n_v - 1}) slope = std::max(slope, std::abs(legendre(spec, t, x, velocities.velocity(j)).argmax_p));
    }
  }
  return slope + force;
}

namespace {

double field_scale(const ValueField& a, const ValueField& b) {
  double scale = 0.0;
  for (double v : a.values()) scale = std::max(scale, std::abs(v));
  for (double v : b.values()) scale = std::max(scale, std::abs(v));
  return scale;
}

bool bitwise_equal(const ValueField& a, const ValueField& b) {
  return a.step_index() == b.step_index() && std::equal(a.values().begin(), a.values().end(), b.values().begin());
}

}  // namespace

std::vector<InvariantResult> run_invariant_suite(const InvariantSuiteConfig& config) {
  const Grids grids = make_grids(config.n_x, config.m_t, default_v_max(config.spec), config.n_v);
  const LaxOleinikStepper stepper(config.spec, grids);
  Lcg64 rng(config.seed);
  const double allowed_ulps = config.equivariance_ulps.value_or(static_cast<double>(config.m_t));

  InvariantResult monotone{"monotonicity"};
  InvariantResult equivariance{"constant_equivariance"};
  InvariantResult nonexpansive{"nonexpansiveness"};
  InvariantResult markov{"period_map_equals_steps"};
  InvariantResult deterministic{"determinism"};
  InvariantResult compact{"lipschitz_after_one_period"};

  for (int k = 0; k < config.n_pairs; ++k) {
    const ValueField u = k % 2 == 0 ? random_fourier_field(grids.space, rng, 1.0)
                                    : random_lipschitz_field(grids.space, rng, 4.0);
    const ValueField other = random_fourier_field(grids.space, rng, 1.0);
    std::vector<double> raised(u.values().begin(), u.values().end());
    for (double& x : raised) x += uniform01(rng);
    const ValueField above(std::move(raised), 0);
    const double c = 10.0 * (2.0 * uniform01(rng) - 1.0);

    const ValueField pu = stepper.period_map_values(u);

    const ValueField p_above = stepper.period_map_values(above);
    for (int i = 0; i < grids.space.size(); ++i) {
      ++monotone.checks;
      if (p_above[i] < pu[i]) {
        ++monotone.violations;
        monotone.worst = std::max(monotone.worst, pu[i] - p_above[i]);
      }
    }

    const ValueField p_shifted = stepper.period_map_values(u.shifted(c));
    const double drift_ulps = sup_dist(p_shifted, pu.shifted(c)) / ulp_of(field_scale(p_shifted, pu));
    ++equivariance.checks;
    equivariance.worst = std::max(equivariance.worst, drift_ulps);
    equivariance.bound = allowed_ulps;
    if (drift_ulps > allowed_ulps) ++equivariance.violations;

    const ValueField p_other = stepper.period_map_values(other);
    const double excess = sup_dist(pu, p_other) - sup_dist(u, other);
    ++nonexpansive.checks;
    nonexpansive.worst = std::max(nonexpansive.worst, excess);
    if (excess > 2.0 * ulp_of(field_scale(pu, p_other))) ++nonexpansive.violations;

    if (k < 5) {
      ValueField stepped = u;
      for (int s = 0; s < grids.time.steps_per_period(); ++s) stepped = stepper.step(stepped);
      ++markov.checks;
      if (!bitwise_equal(stepped, pu)) ++markov.violations;
      ++deterministic.checks;
      if (!bitwise_equal(stepper.period_map_values(u), pu)) ++deterministic.violations;
    }
  }

  compact.bound = lipschitz_bound(config.spec, grids.velocity.v_max(), grids.velocity.size());
  for (int k = 0; k < config.n_compactness; ++k) {
    const double target = k == 0 ? 0.0 : std::pow(10.0, 3.0 * (k - 1) / std::max(1, config.n_compactness - 2));
    const ValueField u = random_lipschitz_field(grids.space, rng, target);
    const double slope = stepper.period_map_values(u).lipschitz();
    ++compact.checks;
    compact.worst = std::max(compact.worst, slope);
    if (slope > compact.bound) ++compact.violations;
  }

  return {monotone, equivariance, nonexpansive, markov, deterministic, compact};
}

}  // namespace weakkam
