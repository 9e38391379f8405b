#pragma once

#include <cstdint>
#include <deque>
#include <utility>
#include <vector>

#include "weakkam/grid.hpp"
#include "weakkam/hamiltonian.hpp"

namespace weakkam {

/// Velocities v_j = (j - (n_v-1)/2) * 2 v_max / (n_v - 1); n_v odd so that
/// v = 0 is a node.
class VelocityGrid {
 public:
  VelocityGrid(double v_max, int n_v);

  double v_max() const { return v_max_; }
  int size() const { return n_; }
  double spacing() const { return 2.0 * v_max_ / (n_ - 1); }
  double velocity(int j) const {
    return (static_cast<double>(j - (n_ - 1) / 2) * 2.0 * v_max_) / (n_ - 1);
  }

  friend bool operator==(const VelocityGrid&, const VelocityGrid&) = default;

 private:
  double v_max_;
  int n_;
};

struct Grids {
  CircleGrid space;
  TimeGrid time;
  VelocityGrid velocity;

  friend bool operator==(const Grids&, const Grids&) = default;
};

// Default velocity truncation: max |H_p| over a sample with |p| <= momentum
// bound + 1, and at least 1 so every point of the circle is reachable within
// one period.
double default_v_max(const HamiltonianSpec& spec);

// Builds grids and checks that one step moves less than half a period.
Grids make_grids(int n_x, int m_t, double v_max, int n_v);

/// Minimizing velocity at every node for the step ending at step_index.
struct FootTable {
  std::int64_t step_index = 0;
  std::vector<double> argmin_velocity;
};

/// Discrete Lax-Oleinik step for a fixed (spec, grids) pair:
///
///   u'(x_i) = min_j [ interp(u, x_i - v_j dt) + dt L(t_mid, x_i - v_j dt, v_j) ]
///
/// with ties resolved toward smaller |v|, then negative v. Foot offsets,
/// interpolation weights, and the space factors of the potential at every
/// foot point are tabulated once; a step then costs n_x * n_v
/// multiply-adds.
class LaxOleinikStepper {
 public:
  LaxOleinikStepper(const HamiltonianSpec& spec, const Grids& grids);

  const HamiltonianSpec& spec() const { return spec_; }
  const Grids& grids() const { return grids_; }

  // Optionally records the argmin velocities into *feet.
  ValueField step(const ValueField& u, FootTable* feet = nullptr) const;

  // m_t steps from a period boundary.
  std::pair<ValueField, std::vector<FootTable>> period_map(const ValueField& u) const;
  ValueField period_map_values(const ValueField& u) const;

  // Tabulated dt * L for node i, velocity j at a step starting at `step`.
  double step_cost(std::int64_t step, int i, int j) const;

 private:
  HamiltonianSpec spec_;
  Grids grids_;
  int n_x_;
  int n_v_;
  std::vector<int> order_;            // velocity indices by tie-break preference
  std::vector<int> lower_offset_;     // per velocity: node offset of the lower interpolation node
  std::vector<double> upper_weight_;  // per velocity: weight of the upper node
  std::vector<double> kinetic_;       // per velocity: K(v_j) including lambda_shift
  std::vector<PotentialTerm> terms_;
  std::vector<std::vector<double>> space_tables_;  // per term: h_k(foot), indexed i * n_v + j
};

ValueField step(const ValueField& u, const HamiltonianSpec& spec, const Grids& grids, FootTable* feet = nullptr);

std::pair<ValueField, std::vector<FootTable>> period_map(const ValueField& u, const HamiltonianSpec& spec,
                                                         const Grids& grids);

/// Record of an evolution: snapshots at every period boundary, plus the
/// per-step fields and foot tables for the most recent `window` periods.
struct EvolutionTrace {
  HamiltonianSpec spec;
  Grids grids;
  int window = 64;
  int n_periods_run = 0;
  std::vector<ValueField> snapshots;  // snapshots[n] at step n * m_t
  std::deque<FootTable> foot_tables;  // contiguous, ending at the final step
  std::deque<ValueField> recent_fields;  // fields at the steps of foot_tables

  std::int64_t final_step() const;
  // First step whose foot table is retained (the table for the step ending there).
  std::int64_t first_retained_step() const;
  const FootTable& foot_table(std::int64_t step_index) const;  // throws WindowExceeded
  // Field at any period boundary, or any retained intra-period step.
  const ValueField& field_at(std::int64_t step_index) const;   // throws WindowExceeded
};

// Runs n_periods period maps from u0 (which must sit at a period boundary).
EvolutionTrace evolve(const ValueField& u0, const HamiltonianSpec& spec, const Grids& grids, int n_periods,
                      int window = 64);

}  // namespace weakkam
