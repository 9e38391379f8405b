#include "weakkam/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "weakkam/errors.hpp"

namespace weakkam {

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

ValueField normalized(const ValueField& u, double lambda, double elapsed) {
  return u.shifted(lambda * elapsed);
}

}  // namespace

bool LambdaEstimate::methods_agree() const {
  return std::abs(value - long_time_average) <= std::max(1e-3, 2.0 * dispersion);
}

LambdaEstimate estimate_lambda(const EvolutionTrace& trace, double burn_in_fraction) {
  if (!(burn_in_fraction >= 0.0 && burn_in_fraction <= 0.9)) {
    throw ConfigError("burn_in_fraction must lie in [0, 0.9]");
  }
  const int n_periods = trace.n_periods_run;
  if (n_periods < 10) {
    throw InsufficientData("estimate_lambda needs at least 10 periods, trace has " + std::to_string(n_periods));
  }
  const int start = static_cast<int>(std::floor(burn_in_fraction * n_periods));
  const int used = n_periods - start;
  if (used < 5) throw InsufficientData("fewer than 5 periods remain after burn-in");

  std::vector<double> increments;
  increments.reserve(static_cast<std::size_t>(used));
  for (int k = start; k < n_periods; ++k) {
    increments.push_back(trace.snapshots[static_cast<std::size_t>(k + 1)].min() -
                         trace.snapshots[static_cast<std::size_t>(k)].min());
  }
  const auto [lo, hi] = std::minmax_element(increments.begin(), increments.end());

  LambdaEstimate estimate;
  estimate.method = LambdaMethod::PerPeriodDrift;
  estimate.n_periods_used = used;
  estimate.dispersion = *hi - *lo;
  estimate.value = -median(increments);
  estimate.long_time_average = -(trace.snapshots.back().min() - trace.snapshots[static_cast<std::size_t>(start)].min()) /
                               static_cast<double>(used);
  return estimate;
}

const ValueField& PeriodicSolution::phase(std::int64_t step) const {
  const int m_t = grids.time.steps_per_period();
  std::int64_t k = step % m_t;
  if (k < 0) k += m_t;
  return snapshots[static_cast<std::size_t>(k)];
}

double fixed_point_residual(const PeriodicSolution& solution) {
  const LaxOleinikStepper stepper(solution.spec, solution.grids);
  const ValueField first = solution.snapshots.front().with_step_index(0);
  return sup_dist(stepper.period_map_values(first), first);
}

PeriodicSolution periodic_solution(const HamiltonianSpec& spec, const Grids& grids, const ValueField& u0,
                                   double tol, int max_periods) {
  if (!(tol > 0.0)) throw ConfigError("periodic_solution needs tol > 0");
  if (max_periods < 1) throw ConfigError("periodic_solution needs max_periods >= 1");
  const LaxOleinikStepper stepper(spec, grids);

  ValueField current = u0.with_step_index(0).shifted(-u0.min());
  double change = 0.0;
  int iterations = 0;
  bool converged = false;
  while (iterations < max_periods) {
    ValueField next = stepper.period_map_values(current).with_step_index(0);
    next = next.shifted(-next.min());
    change = sup_dist(next, current);
    current = std::move(next);
    ++iterations;
    if (change <= tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw NoConvergence("min-plus power iteration did not settle within " + std::to_string(max_periods) +
                            " periods",
                        change);
  }

  PeriodicSolution solution{spec, grids, {}, 0.0, iterations};
  const int m_t = grids.time.steps_per_period();
  solution.snapshots.reserve(static_cast<std::size_t>(m_t) + 1);
  solution.snapshots.push_back(current);
  for (int k = 0; k < m_t; ++k) solution.snapshots.push_back(stepper.step(solution.snapshots.back()));
  solution.residual = sup_dist(solution.snapshots.back(), solution.snapshots.front());
  return solution;
}

PeriodicSolution liminf_solution(const EvolutionTrace& trace, double lambda) {
  const int n_periods = trace.n_periods_run;
  if (n_periods < 20) {
    throw InsufficientData("liminf_solution needs at least 20 periods, trace has " + std::to_string(n_periods));
  }
  const int m_t = trace.grids.time.steps_per_period();
  const std::int64_t origin = trace.snapshots.front().step_index();
  const int first_period = n_periods - n_periods / 2;
  const std::int64_t first_retained = trace.first_retained_step();

  PeriodicSolution solution{trace.spec.with_lambda_shift(trace.spec.lambda_shift + lambda), trace.grids, {}, 0.0, 0};
  for (int k = 0; k <= m_t; ++k) {
    std::vector<double> lowest;
    for (int n = first_period; n <= n_periods; ++n) {
      const std::int64_t step = origin + static_cast<std::int64_t>(n) * m_t + k;
      if (step > trace.final_step()) break;
      const bool boundary = (k == 0 || k == m_t);
      if (!boundary && step < first_retained) continue;
      const double elapsed = static_cast<double>(n) + static_cast<double>(k) / m_t;
      const ValueField u = normalized(trace.field_at(step), lambda, elapsed);
      if (lowest.empty()) {
        lowest.assign(u.values().begin(), u.values().end());
      } else {
        for (int i = 0; i < u.size(); ++i) {
          lowest[static_cast<std::size_t>(i)] = std::min(lowest[static_cast<std::size_t>(i)], u[i]);
        }
      }
    }
    if (lowest.empty()) {
      throw InsufficientData("no retained fields for phase " + std::to_string(k) + "; enlarge the window");
    }
    solution.snapshots.emplace_back(std::move(lowest), k);
  }
  const double gauge = solution.snapshots.front().min();
  for (ValueField& s : solution.snapshots) s = s.shifted(-gauge);
  solution.residual = fixed_point_residual(solution);
  return solution;
}

}  // namespace weakkam
