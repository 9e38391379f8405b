#include "weakkam/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "weakkam/errors.hpp"

namespace weakkam {

namespace {

constexpr double kNodeSnap = 1e-12;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Foot velocity at a lifted index-space position s.
double blended_velocity(const FootTable& table, double s) {
  const auto n = static_cast<std::int64_t>(table.argmin_velocity.size());
  double base = std::floor(s);
  double frac = s - base;
  if (frac < kNodeSnap) {
    frac = 0.0;
  } else if (frac > 1.0 - kNodeSnap) {
    frac = 0.0;
    base += 1.0;
  }
  std::int64_t i = static_cast<std::int64_t>(base) % n;
  if (i < 0) i += n;
  const double lower = table.argmin_velocity[static_cast<std::size_t>(i)];
  if (frac == 0.0) return lower;
  const double upper = table.argmin_velocity[static_cast<std::size_t>((i + 1) % n)];
  return (1.0 - frac) * lower + frac * upper;
}

}  // namespace

Characteristic backtrack(const EvolutionTrace& trace, double end_x, int span_periods,
                         std::optional<std::int64_t> end_step) {
  if (span_periods < 1) throw ConfigError("backtrack needs span_periods >= 1");
  const int m_t = trace.grids.time.steps_per_period();
  const int n_x = trace.grids.space.size();
  const double dt = trace.grids.time.dt();
  const std::int64_t end = end_step.value_or(trace.final_step());
  const std::int64_t start = end - static_cast<std::int64_t>(span_periods) * m_t;
  if (end > trace.final_step() || start + 1 < trace.first_retained_step()) {
    throw WindowExceeded("backtracking " + std::to_string(span_periods) + " periods from step " +
                         std::to_string(end) + " leaves the retained foot tables");
  }

  const auto samples = static_cast<std::size_t>(end - start) + 1;
  Characteristic curve;
  curve.start_step = start;
  curve.end_step = end;
  curve.span_periods = span_periods;
  curve.lambda_shift = trace.spec.lambda_shift;
  curve.lifted_positions.resize(samples);
  curve.velocities.resize(samples - 1);
  curve.momenta.resize(samples - 1);
  curve.segment_actions.resize(samples - 1);

  double s = std::fmod(std::nearbyint(wrap(end_x) * n_x), static_cast<double>(n_x));
  curve.lifted_positions.back() = s / n_x;
  for (std::int64_t step = end; step > start; --step) {
    const double v = blended_velocity(trace.foot_table(step), s);
    s -= v * n_x / m_t;
    const double foot = wrap(s / n_x);
    const auto k = static_cast<std::size_t>(step - 1 - start);
    const LegendreResult at_mid = legendre(trace.spec, trace.grids.time.midpoint(step - 1), foot, v);
    const LegendreResult at_start = legendre(trace.spec, trace.grids.time.time(step - 1), foot, v);
    curve.velocities[k] = v;
    curve.momenta[k] = at_start.argmax_p;
    curve.segment_actions[k] = dt * at_mid.value;
    curve.lifted_positions[k] = s / n_x;
  }
  curve.action = 0.0;
  for (double a : curve.segment_actions) curve.action += a;
  return curve;
}

RotationEstimate rotation_number(const EvolutionTrace& trace, int n_probes, int span_periods) {
  if (span_periods < 8) throw ConfigError("rotation_number needs span_periods >= 8");
  if (n_probes < 1) throw ConfigError("rotation_number needs n_probes >= 1");
  RotationEstimate estimate;
  for (int k = 0; k < n_probes; ++k) {
    const Characteristic curve = backtrack(trace, static_cast<double>(k) / n_probes, span_periods);
    estimate.per_probe.push_back((curve.lifted_positions.back() - curve.lifted_positions.front()) / span_periods);
  }
  const auto [lo, hi] = std::minmax_element(estimate.per_probe.begin(), estimate.per_probe.end());
  estimate.spread = *hi - *lo;
  estimate.rho = median(estimate.per_probe);
  return estimate;
}

double calibration_defect(const Characteristic& curve, const PeriodicSolution& solution) {
  const double dt = solution.grids.time.dt();
  const double shift_delta = solution.spec.lambda_shift - curve.lambda_shift;
  const double end_value = interp(solution.phase(curve.end_step), wrap(curve.lifted_positions.back()));
  double suffix = 0.0;
  double worst = 0.0;
  for (std::size_t k = curve.segment_actions.size(); k-- > 0;) {
    suffix += curve.segment_actions[k] + dt * shift_delta;
    const std::int64_t step = curve.start_step + static_cast<std::int64_t>(k);
    const double start_value = interp(solution.phase(step), wrap(curve.lifted_positions[k]));
    worst = std::max(worst, std::abs(end_value - start_value - suffix));
  }
  return worst;
}

double gradient_identity_check(const Characteristic& curve, const PeriodicSolution& solution) {
  const double dx = solution.grids.space.spacing();
  double worst = 0.0;
  for (std::size_t k = 0; k < curve.momenta.size(); ++k) {
    const ValueField& phi = solution.phase(curve.start_step + static_cast<std::int64_t>(k));
    const double x = wrap(curve.lifted_positions[k]);
    const double slope = (interp(phi, x + dx) - interp(phi, x - dx)) / (2.0 * dx);
    worst = std::max(worst, std::abs(slope - curve.momenta[k]));
  }
  return worst;
}

double monotone_difference(const EvolutionTrace& trace1, const EvolutionTrace& trace2,
                           const Characteristic& curve_of_2) {
  if (!(trace1.grids == trace2.grids)) throw GridMismatch("monotone_difference: traces use different grids");
  if (!(trace1.spec == trace2.spec)) throw GridMismatch("monotone_difference: traces use different Hamiltonians");
  double previous = 0.0;
  double worst = 0.0;
  for (std::int64_t step = curve_of_2.start_step; step <= curve_of_2.end_step; ++step) {
    const double x = wrap(curve_of_2.position(step));
    const double d = interp(trace1.field_at(step), x) - interp(trace2.field_at(step), x);
    if (step > curve_of_2.start_step) worst = std::max(worst, d - previous);
    previous = d;
  }
  return worst;
}

double difference_oscillation(const EvolutionTrace& trace, double lambda, const PeriodicSolution& solution,
                              const Characteristic& curve) {
  const double m_t = trace.grids.time.steps_per_period();
  double lo = 0.0;
  double hi = 0.0;
  for (std::int64_t step = curve.start_step; step <= curve.end_step; ++step) {
    const double x = wrap(curve.position(step));
    const double u = interp(trace.field_at(step), x) + lambda * (static_cast<double>(step) / m_t);
    const double d = u - interp(solution.phase(step), x);
    if (step == curve.start_step) {
      lo = hi = d;
    } else {
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
  }
  return hi - lo;
}

CrossingReport check_non_crossing(const std::vector<Characteristic>& curves, double tolerance) {
  CrossingReport report;
  if (curves.size() < 2) return report;
  std::vector<const Characteristic*> sorted;
  for (const Characteristic& c : curves) {
    if (c.start_step != curves.front().start_step || c.end_step != curves.front().end_step) {
      throw ConfigError("non-crossing check needs curves over a common time span");
    }
    sorted.push_back(&c);
  }
  std::sort(sorted.begin(), sorted.end(), [](const Characteristic* a, const Characteristic* b) {
    return a->lifted_positions.back() < b->lifted_positions.back();
  });
  const std::size_t samples = sorted.front()->lifted_positions.size();
  for (std::size_t k = 0; k < samples; ++k) {
    for (std::size_t c = 0; c < sorted.size(); ++c) {
      const double lower = sorted[c]->lifted_positions[k];
      const double upper = c + 1 < sorted.size() ? sorted[c + 1]->lifted_positions[k]
                                                 : sorted.front()->lifted_positions[k] + 1.0;
      const double overlap = lower - upper;
      report.max_overlap = std::max(report.max_overlap, overlap);
      if (overlap > tolerance) ++report.violations;
    }
  }
  return report;
}

AubrySample aubry_sample(const EvolutionTrace& trace, int n_probes, int span_periods, double cluster_tolerance) {
  if (n_probes < 1) throw ConfigError("aubry_sample needs n_probes >= 1");
  if (!(cluster_tolerance > 0.0)) throw ConfigError("cluster tolerance must be positive");
  AubrySample sample;
  sample.cluster_tolerance = cluster_tolerance;
  for (int k = 0; k < n_probes; ++k) {
    sample.curves.push_back(backtrack(trace, static_cast<double>(k) / n_probes, span_periods));
    sample.raw_points.push_back(wrap(sample.curves.back().lifted_positions.front()));
  }
  const double step_tolerance = trace.grids.velocity.spacing() * trace.grids.time.dt();
  sample.crossing = check_non_crossing(sample.curves, step_tolerance);

  std::vector<double> pts = sample.raw_points;
  std::sort(pts.begin(), pts.end());
  const std::size_t n = pts.size();
  // Cut the circle at the widest gap, then cluster by single linkage.
  std::size_t cut = 0;
  double widest = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double gap = i + 1 < n ? pts[i + 1] - pts[i] : pts[0] + 1.0 - pts[i];
    if (gap > widest) {
      widest = gap;
      cut = (i + 1) % n;
    }
  }
  std::vector<double> cluster;
  auto flush = [&] {
    if (!cluster.empty()) sample.points.push_back(wrap(cluster[cluster.size() / 2]));
    cluster.clear();
  };
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t i = (cut + step) % n;
    // Lift past the cut so positions stay increasing along the walk.
    const double p = i < cut ? pts[i] + 1.0 : pts[i];
    if (!cluster.empty() && p - cluster.back() > cluster_tolerance) flush();
    cluster.push_back(p);
  }
  flush();
  std::sort(sample.points.begin(), sample.points.end());
  return sample;
}

}  // namespace weakkam
