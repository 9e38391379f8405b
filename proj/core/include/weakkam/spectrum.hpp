#pragma once

#include <vector>

#include "weakkam/operator.hpp"

namespace weakkam {

enum class LambdaMethod { PerPeriodDrift, LongTimeAverage };

/// Critical value: the constant lambda with u(t, x) + lambda t bounded.
struct LambdaEstimate {
  double value = 0.0;  // per-period drift estimate
  LambdaMethod method = LambdaMethod::PerPeriodDrift;
  int n_periods_used = 0;
  double dispersion = 0.0;         // max - min of the per-period increments used
  double long_time_average = 0.0;  // the second estimate, for cross-checking

  bool methods_agree() const;
};

// PerPeriodDrift: -median_k [min u(k+1) - min u(k)] over periods past the
// burn-in. LongTimeAverage: -(min u(final) - min u(burn-in end)) / periods.
// Throws InsufficientData below 10 periods or 5 post-burn-in periods.
LambdaEstimate estimate_lambda(const EvolutionTrace& trace, double burn_in_fraction = 0.5);

/// One period of a time-periodic solution of the working equation (lambda
/// folded into spec.lambda_shift), gauged so that min phi(0, .) = 0.
struct PeriodicSolution {
  HamiltonianSpec spec;
  Grids grids;
  std::vector<ValueField> snapshots;  // m_t + 1 phases, steps 0..m_t
  double residual = 0.0;              // sup_dist(period_map(phi_0), phi_0)
  int iterations = 0;

  double lambda() const { return spec.lambda_shift; }
  // phi at an absolute step, using 1-periodicity.
  const ValueField& phase(std::int64_t step) const;
};

// Normalized min-plus power iteration v <- T v - min(T v), stopped once
// successive iterates are within tol. Throws NoConvergence after max_periods.
PeriodicSolution periodic_solution(const HamiltonianSpec& spec, const Grids& grids, const ValueField& u0,
                                   double tol, int max_periods);

// Discrete liminf: at each phase, the pointwise minimum of the
// lambda-normalized fields u(t + n) + lambda (t + n) over the last half of the
// trace. Intra-period phases use the retained window. `lambda` is the residual
// drift of the trace's own spec; it is folded into the returned spec.
PeriodicSolution liminf_solution(const EvolutionTrace& trace, double lambda);

// Recomputes sup_dist(period_map(phi_0), phi_0).
double fixed_point_residual(const PeriodicSolution& solution);

}  // namespace weakkam
