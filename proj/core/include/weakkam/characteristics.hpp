#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "weakkam/operator.hpp"
#include "weakkam/spectrum.hpp"

namespace weakkam {

/// A minimizing curve reconstructed backwards from the foot tables.
///
/// Sample k sits at step start_step + k. Segment k joins samples k and k+1
/// and moves with velocities[k]; momenta[k] = L_v at the start of that
/// segment, segment_actions[k] = dt L at its midpoint time and foot.
struct Characteristic {
  std::int64_t start_step = 0;
  std::int64_t end_step = 0;
  int span_periods = 0;
  double lambda_shift = 0.0;             // shift of the spec the actions were computed with
  std::vector<double> lifted_positions;  // on the real line, not wrapped
  std::vector<double> velocities;
  std::vector<double> momenta;
  std::vector<double> segment_actions;
  double action = 0.0;

  double position(std::int64_t step) const {
    return lifted_positions[static_cast<std::size_t>(step - start_step)];
  }
};

// Snaps end_x to the nearest node at end_step (default: the final step) and
// follows the recorded minimizing velocities backwards for span_periods;
// off-node positions blend the two neighbouring nodes' velocities linearly.
// Throws WindowExceeded if the span leaves the retained foot tables.
Characteristic backtrack(const EvolutionTrace& trace, double end_x, int span_periods,
                         std::optional<std::int64_t> end_step = std::nullopt);

struct RotationEstimate {
  double rho = 0.0;     // median over probes
  double spread = 0.0;  // max - min over probes
  std::vector<double> per_probe;
};

// n_probes end points at k / n_probes; slope (end - start) / span_periods.
RotationEstimate rotation_number(const EvolutionTrace& trace, int n_probes, int span_periods);

// max_k |phi(end, gamma_end) - phi(t_k, gamma_k) - sum_{j >= k} dt L_j|, with
// the actions re-expressed under the solution's lambda_shift.
double calibration_defect(const Characteristic& curve, const PeriodicSolution& solution);

// max_k |centred difference of phi_x at (t_k, gamma_k) - p_k| over all samples
// but the final one.
double gradient_identity_check(const Characteristic& curve, const PeriodicSolution& solution);

// d_k = u1(t_k, gamma_k) - u2(t_k, gamma_k) along a curve backtracked in
// trace2; returns max(0, max_k (d_{k+1} - d_k)). Throws GridMismatch.
double monotone_difference(const EvolutionTrace& trace1, const EvolutionTrace& trace2,
                           const Characteristic& curve_of_2);

// max - min of u - phi along the curve, u taken from the trace at every
// sampled step and phi from the periodic solution (lambda-normalized).
double difference_oscillation(const EvolutionTrace& trace, double lambda, const PeriodicSolution& solution,
                              const Characteristic& curve);

struct CrossingReport {
  int violations = 0;
  double max_overlap = 0.0;  // largest amount by which the order was broken
};

// Curves sorted by their final lifted position must stay sorted at every
// earlier sample, cyclically (the last one stays below the first plus one),
// up to `tolerance`.
CrossingReport check_non_crossing(const std::vector<Characteristic>& curves, double tolerance);

struct AubrySample {
  std::vector<double> points;  // cluster representatives on the circle, sorted
  double phase = 0.0;
  double cluster_tolerance = 0.0;
  std::vector<double> raw_points;  // wrapped starting points of every probe
  std::vector<Characteristic> curves;
  CrossingReport crossing;
};

// Backtracks n_probes curves over span_periods, clusters the wrapped starting
// points (single linkage, cyclic), and checks non-crossing within one
// velocity spacing per step.
AubrySample aubry_sample(const EvolutionTrace& trace, int n_probes, int span_periods, double cluster_tolerance);

}  // namespace weakkam
