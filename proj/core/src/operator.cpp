#include "weakkam/operator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "weakkam/errors.hpp"

namespace weakkam {

namespace {

constexpr double kWeightSnap = 1e-12;

double radical_inverse(unsigned index, unsigned base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * (index % base);
    index /= base;
    f /= base;
  }
  return result;
}

}  // namespace

VelocityGrid::VelocityGrid(double v_max, int n_v) : v_max_(v_max), n_(n_v) {
  if (!(v_max > 0.0) || !std::isfinite(v_max)) throw ConfigError("v_max must be positive");
  if (n_v < 9 || n_v % 2 == 0) throw ConfigError("n_v must be odd and >= 9, got " + std::to_string(n_v));
}

double default_v_max(const HamiltonianSpec& spec) {
  const double p_bound = momentum_bound(spec) + 1.0;
  double v_max = 1.0;
  for (unsigned k = 0; k < 512; ++k) {
    const double p = -p_bound + 2.0 * p_bound * radical_inverse(k, 2);
    const double t = radical_inverse(k, 3);
    const double x = radical_inverse(k, 5);
    v_max = std::max(v_max, std::abs(partials(spec, t, x, p).h_p));
  }
  // The two endpoints of the momentum range.
  v_max = std::max(v_max, std::abs(partials(spec, 0.0, 0.0, p_bound).h_p));
  v_max = std::max(v_max, std::abs(partials(spec, 0.0, 0.0, -p_bound).h_p));
  return v_max;
}

Grids make_grids(int n_x, int m_t, double v_max, int n_v) {
  Grids grids{CircleGrid(n_x), TimeGrid(m_t), VelocityGrid(v_max, n_v)};
  if (v_max * grids.time.dt() >= 0.5) {
    throw ConfigError("v_max * dt must stay below 1/2; raise m_t or lower v_max");
  }
  return grids;
}

LaxOleinikStepper::LaxOleinikStepper(const HamiltonianSpec& spec, const Grids& grids)
    : spec_(spec), grids_(grids), n_x_(grids.space.size()), n_v_(grids.velocity.size()) {
  validate(spec_);
  const int mid = (n_v_ - 1) / 2;
  order_.push_back(mid);
  for (int d = 1; d <= mid; ++d) {
    order_.push_back(mid - d);
    order_.push_back(mid + d);
  }

  lower_offset_.resize(static_cast<std::size_t>(n_v_));
  upper_weight_.resize(static_cast<std::size_t>(n_v_));
  kinetic_.resize(static_cast<std::size_t>(n_v_));
  terms_ = potential_terms(spec_);
  space_tables_.assign(terms_.size(), std::vector<double>(static_cast<std::size_t>(n_x_ * n_v_)));

  const double origin_potential = potential(spec_, 0.0, 0.0);
  for (int j = 0; j < n_v_; ++j) {
    const double v = grids_.velocity.velocity(j);
    // Foot of node i is i - shift in index units.
    const double shift = v * n_x_ / grids_.time.steps_per_period();
    double offset = std::floor(-shift);
    double weight = -shift - offset;
    if (weight < kWeightSnap) {
      weight = 0.0;
    } else if (weight > 1.0 - kWeightSnap) {
      weight = 0.0;
      offset += 1.0;
    }
    const auto ju = static_cast<std::size_t>(j);
    lower_offset_[ju] = static_cast<int>(offset);
    upper_weight_[ju] = weight;
    kinetic_[ju] = legendre(spec_, 0.0, 0.0, v).value + origin_potential;

    for (int i = 0; i < n_x_; ++i) {
      const double foot = wrap((static_cast<double>(i) + offset + weight) / n_x_);
      for (std::size_t k = 0; k < terms_.size(); ++k) {
        space_tables_[k][static_cast<std::size_t>(i * n_v_ + j)] = terms_[k].space_factor(foot);
      }
    }
  }
}

double LaxOleinikStepper::step_cost(std::int64_t step, int i, int j) const {
  const double t_mid = grids_.time.midpoint(step);
  double pot = 0.0;
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    pot += terms_[k].time_factor(t_mid) * space_tables_[k][static_cast<std::size_t>(i * n_v_ + j)];
  }
  return grids_.time.dt() * (kinetic_[static_cast<std::size_t>(j)] - pot);
}

ValueField LaxOleinikStepper::step(const ValueField& u, FootTable* feet) const {
  if (u.size() != n_x_) {
    throw SizeMismatch("field has " + std::to_string(u.size()) + " nodes, grid has " + std::to_string(n_x_));
  }
  const double dt = grids_.time.dt();
  const double t_mid = grids_.time.midpoint(u.step_index());
  std::vector<double> time_factors(terms_.size());
  for (std::size_t k = 0; k < terms_.size(); ++k) time_factors[k] = terms_[k].time_factor(t_mid);

  const std::span<const double> values = u.values();
  std::vector<double> out(static_cast<std::size_t>(n_x_));
  if (feet) {
    feet->step_index = u.step_index() + 1;
    feet->argmin_velocity.assign(static_cast<std::size_t>(n_x_), 0.0);
  }

  for (int i = 0; i < n_x_; ++i) {
    double best = 0.0;
    int best_j = -1;
    for (const int j : order_) {
      const auto ju = static_cast<std::size_t>(j);
      int lo = (i + lower_offset_[ju]) % n_x_;
      if (lo < 0) lo += n_x_;
      const int hi = lo + 1 == n_x_ ? 0 : lo + 1;
      const double w = upper_weight_[ju];
      double pot = 0.0;
      for (std::size_t k = 0; k < terms_.size(); ++k) {
        pot += time_factors[k] * space_tables_[k][static_cast<std::size_t>(i * n_v_ + j)];
      }
      const double candidate = (1.0 - w) * values[static_cast<std::size_t>(lo)] +
                               w * values[static_cast<std::size_t>(hi)] + dt * (kinetic_[ju] - pot);
      if (best_j < 0 || candidate < best) {
        best = candidate;
        best_j = j;
      }
    }
    out[static_cast<std::size_t>(i)] = best;
    if (feet) feet->argmin_velocity[static_cast<std::size_t>(i)] = grids_.velocity.velocity(best_j);
  }
  return ValueField(std::move(out), u.step_index() + 1);
}

std::pair<ValueField, std::vector<FootTable>> LaxOleinikStepper::period_map(const ValueField& u) const {
  const int m_t = grids_.time.steps_per_period();
  std::vector<FootTable> tables(static_cast<std::size_t>(m_t));
  ValueField current = u;
  for (int k = 0; k < m_t; ++k) current = step(current, &tables[static_cast<std::size_t>(k)]);
  return {std::move(current), std::move(tables)};
}

ValueField LaxOleinikStepper::period_map_values(const ValueField& u) const {
  ValueField current = u;
  for (int k = 0; k < grids_.time.steps_per_period(); ++k) current = step(current);
  return current;
}

ValueField step(const ValueField& u, const HamiltonianSpec& spec, const Grids& grids, FootTable* feet) {
  return LaxOleinikStepper(spec, grids).step(u, feet);
}

std::pair<ValueField, std::vector<FootTable>> period_map(const ValueField& u, const HamiltonianSpec& spec,
                                                         const Grids& grids) {
  if (u.step_index() % grids.time.steps_per_period() != 0) {
    throw ConfigError("period_map needs a field at a period boundary");
  }
  return LaxOleinikStepper(spec, grids).period_map(u);
}

std::int64_t EvolutionTrace::final_step() const { return snapshots.back().step_index(); }

std::int64_t EvolutionTrace::first_retained_step() const {
  return foot_tables.empty() ? final_step() + 1 : foot_tables.front().step_index;
}

const FootTable& EvolutionTrace::foot_table(std::int64_t step_index) const {
  const std::int64_t first = first_retained_step();
  if (step_index < first || step_index > final_step()) {
    throw WindowExceeded("foot table for step " + std::to_string(step_index) + " is outside the retained window");
  }
  return foot_tables[static_cast<std::size_t>(step_index - first)];
}

const ValueField& EvolutionTrace::field_at(std::int64_t step_index) const {
  const std::int64_t start = snapshots.front().step_index();
  const int m_t = grids.time.steps_per_period();
  if (step_index >= start && step_index <= final_step() && (step_index - start) % m_t == 0) {
    return snapshots[static_cast<std::size_t>((step_index - start) / m_t)];
  }
  const std::int64_t first = first_retained_step();
  if (step_index < first || step_index > final_step()) {
    throw WindowExceeded("field at step " + std::to_string(step_index) + " is outside the retained window");
  }
  return recent_fields[static_cast<std::size_t>(step_index - first)];
}

EvolutionTrace evolve(const ValueField& u0, const HamiltonianSpec& spec, const Grids& grids, int n_periods,
                      int window) {
  if (n_periods < 1) throw ConfigError("evolve needs n_periods >= 1");
  if (window < 1) throw ConfigError("foot-table window must be >= 1");
  if (u0.step_index() % grids.time.steps_per_period() != 0) {
    throw ConfigError("initial field must sit at a period boundary");
  }
  const LaxOleinikStepper stepper(spec, grids);
  const int m_t = grids.time.steps_per_period();
  const std::size_t capacity = static_cast<std::size_t>(window) * static_cast<std::size_t>(m_t);

  EvolutionTrace trace{spec, grids, window, 0, {}, {}, {}};
  trace.snapshots.reserve(static_cast<std::size_t>(n_periods) + 1);
  trace.snapshots.push_back(u0);
  ValueField current = u0;
  for (int n = 0; n < n_periods; ++n) {
    for (int k = 0; k < m_t; ++k) {
      FootTable table;
      current = stepper.step(current, &table);
      trace.foot_tables.push_back(std::move(table));
      trace.recent_fields.push_back(current);
      if (trace.foot_tables.size() > capacity) {
        trace.foot_tables.pop_front();
        trace.recent_fields.pop_front();
      }
    }
    trace.snapshots.push_back(current);
    ++trace.n_periods_run;
  }
  return trace;
}

}  // namespace weakkam
