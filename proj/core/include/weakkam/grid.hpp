#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace weakkam {

/// Uniform periodic grid on the unit circle: nodes i/n, i = 0..n-1.
class CircleGrid {
 public:
  explicit CircleGrid(int n_x);

  int size() const { return n_; }
  double spacing() const { return 1.0 / n_; }
  double node(int i) const { return static_cast<double>(i) / n_; }

  friend bool operator==(const CircleGrid&, const CircleGrid&) = default;

 private:
  int n_;
};

/// Time discretisation of one unit period. Times are integer step counts;
/// step k sits at k / m_t.
class TimeGrid {
 public:
  explicit TimeGrid(int m_t);

  int steps_per_period() const { return m_; }
  double dt() const { return 1.0 / m_; }
  double time(std::int64_t step) const { return static_cast<double>(step) / m_; }
  // Midpoint of the step that starts at `step`.
  double midpoint(std::int64_t step) const {
    return (static_cast<double>(step) + 0.5) / m_;
  }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  int m_;
};

/// One spatial snapshot u(t, .) on the circle grid.
class ValueField {
 public:
  ValueField() = default;
  // Throws ConfigError on non-finite entries or fewer than 8 nodes.
  ValueField(std::vector<double> values, std::int64_t step_index);

  std::span<const double> values() const { return values_; }
  std::int64_t step_index() const { return step_index_; }
  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }

  double min() const;
  double max() const;
  ValueField shifted(double c) const;
  ValueField with_step_index(std::int64_t step_index) const;
  // max_i |u_{i+1} - u_i| / dx, cyclically.
  double lipschitz() const;

 private:
  std::vector<double> values_;
  std::int64_t step_index_ = 0;
};

// x mod 1, in [0, 1).
double wrap(double x);

// Distance on the circle, in [0, 0.5].
double circle_dist(double x, double y);

// Periodic piecewise-linear interpolation. Weights are nonnegative and sum to
// one, so the result is monotone in the node values.
double interp(std::span<const double> values, double x);
inline double interp(const ValueField& field, double x) {
  return interp(field.values(), x);
}

// Max-norm distance. Throws SizeMismatch.
double sup_dist(std::span<const double> f, std::span<const double> g);
inline double sup_dist(const ValueField& f, const ValueField& g) {
  return sup_dist(f.values(), g.values());
}

// Node values of a function sampled on the grid.
template <typename F>
ValueField sample(const CircleGrid& grid, F&& f, std::int64_t step_index = 0) {
  std::vector<double> v(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) v[static_cast<std::size_t>(i)] = f(grid.node(i));
  return ValueField(std::move(v), step_index);
}

}  // namespace weakkam
