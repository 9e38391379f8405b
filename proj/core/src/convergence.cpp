#include "weakkam/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "weakkam/characteristics.hpp"
#include "weakkam/errors.hpp"
#include "weakkam/random.hpp"

namespace weakkam {

std::optional<RationalApprox> rational_reduce(double rho, int denominator_cap, double spread) {
  if (denominator_cap < 1) throw ConfigError("denominator_cap must be >= 1");
  if (!std::isfinite(rho)) return std::nullopt;
  const double threshold = spread + 1.0 / (2.0 * denominator_cap * denominator_cap);

  long h_prev = 1, h_prev2 = 0;
  long k_prev = 0, k_prev2 = 1;
  double x = rho;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(x);
    const long ai = static_cast<long>(a);
    const long h = ai * h_prev + h_prev2;
    const long k = ai * k_prev + k_prev2;
    if (k > denominator_cap) break;
    const double error = std::abs(rho - static_cast<double>(h) / static_cast<double>(k));
    if (error <= threshold) return RationalApprox{h, k, error};
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
    const double frac = x - a;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  return std::nullopt;
}

PeriodDetection detect_period(const EvolutionTrace& trace, double lambda, int q_max, double tol) {
  if (q_max < 1) throw ConfigError("q_max must be >= 1");
  const int n_periods = trace.n_periods_run;
  if (n_periods < 4 * q_max) {
    throw InsufficientData("detect_period needs at least " + std::to_string(4 * q_max) + " periods, trace has " +
                           std::to_string(n_periods));
  }
  PeriodDetection detection;
  detection.tail_start = n_periods - n_periods / 4;
  for (int T = 1; T <= q_max; ++T) {
    std::vector<double> history;
    double tail = 0.0;
    for (int n = 0; n + T <= n_periods; ++n) {
      const ValueField later = trace.snapshots[static_cast<std::size_t>(n + T)].shifted(lambda * T);
      const double r = sup_dist(later, trace.snapshots[static_cast<std::size_t>(n)]);
      history.push_back(r);
      if (n >= detection.tail_start) tail = std::max(tail, r);
    }
    detection.residual_history.push_back(std::move(history));
    detection.tail_max.push_back(tail);
    if (!detection.period && tail <= tol) detection.period = T;
  }
  return detection;
}

Grids VerifyConfig::grids(const HamiltonianSpec& spec) const {
  return make_grids(n_x, m_t, v_max.value_or(default_v_max(spec)), n_v);
}

namespace {

// max over the tail of sup_dist(w(n), w(N - ((N - n) mod T))), w = u + lambda n.
double tail_gap(const EvolutionTrace& trace, double lambda, int period, int tail_start) {
  const int n_periods = trace.n_periods_run;
  auto normalized = [&](int n) { return trace.snapshots[static_cast<std::size_t>(n)].shifted(lambda * n); };
  double gap = 0.0;
  for (int n = tail_start; n <= n_periods; ++n) {
    const int m = n_periods - (n_periods - n) % period;
    gap = std::max(gap, sup_dist(normalized(n), normalized(m)));
  }
  return gap;
}

ValueField gauged_limit(const EvolutionTrace& trace) {
  const ValueField& last = trace.snapshots.back();
  return last.shifted(-last.min());
}

}  // namespace

ConvergenceReport verify_theorem(const HamiltonianSpec& spec, const ValueField& u0, const VerifyConfig& config) {
  validate(spec);
  const Grids grids = config.grids(spec);
  if (config.rotation_span > config.window) throw ConfigError("rotation_span must not exceed the foot-table window");
  if (config.rotation_span > config.n_periods) throw ConfigError("rotation_span must not exceed n_periods");

  ConvergenceReport report;
  report.spec = spec;
  report.config = config;

  const EvolutionTrace first = evolve(u0, spec, grids, config.n_periods, config.window);
  report.lambda = estimate_lambda(first);

  const HamiltonianSpec working = spec.with_lambda_shift(spec.lambda_shift + report.lambda.value);
  const EvolutionTrace trace = evolve(u0, working, grids, config.n_periods, config.window);
  report.residual_drift = estimate_lambda(trace).value;
  report.lambda_ok = std::abs(report.residual_drift) <= config.tolerances.lambda_tol;

  const RotationEstimate rotation = rotation_number(trace, config.rotation_probes, config.rotation_span);
  report.rho = rotation.rho;
  report.rho_spread = rotation.spread;
  report.rational = rational_reduce(rotation.rho, config.q_max, rotation.spread);

  report.detection = detect_period(trace, report.residual_drift, config.q_max, config.tolerances.period_tol);
  report.detected_period = report.detection.period;

  int gap_period = 1;
  if (report.detected_period) {
    gap_period = *report.detected_period;
  } else {
    const auto best = std::min_element(report.detection.tail_max.begin(), report.detection.tail_max.end());
    gap_period = static_cast<int>(best - report.detection.tail_max.begin()) + 1;
  }
  report.final_gap = tail_gap(trace, report.residual_drift, gap_period, report.detection.tail_start);

  report.theorem_ok = report.detected_period.has_value() && report.final_gap <= config.tolerances.period_tol;
  if (report.detected_period) {
    report.addendum_ok = report.rational ? *report.detected_period <= report.rational->q : *report.detected_period == 1;
  }

  if (!report.rational) {
    UniquenessCheck check;
    std::vector<ValueField> limits{gauged_limit(trace)};
    for (std::uint64_t offset = 1; offset <= 2; ++offset) {
      Lcg64 rng(config.seed + offset);
      const ValueField other = random_lipschitz_field(grids.space, rng, 1.0);
      limits.push_back(gauged_limit(evolve(other, working, grids, config.n_periods, 1)));
    }
    for (std::size_t i = 0; i < limits.size(); ++i) {
      for (std::size_t j = i + 1; j < limits.size(); ++j) check.max_gap = std::max(check.max_gap, sup_dist(limits[i], limits[j]));
    }
    check.n_solutions = static_cast<int>(limits.size());
    check.ok = check.max_gap <= 5.0 * config.tolerances.period_tol;
    report.uniqueness = check;
  }
  return report;
}

}  // namespace weakkam
