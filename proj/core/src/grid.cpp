#include "weakkam/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "weakkam/errors.hpp"

namespace weakkam {

CircleGrid::CircleGrid(int n_x) : n_(n_x) {
  if (n_x < 8) throw ConfigError("circle grid needs at least 8 nodes, got " + std::to_string(n_x));
}

TimeGrid::TimeGrid(int m_t) : m_(m_t) {
  if (m_t < 4) throw ConfigError("time grid needs at least 4 steps per period, got " + std::to_string(m_t));
}

ValueField::ValueField(std::vector<double> values, std::int64_t step_index)
    : values_(std::move(values)), step_index_(step_index) {
  if (values_.size() < 8) throw ConfigError("value field needs at least 8 nodes");
  for (double v : values_) {
    if (!std::isfinite(v)) throw ConfigError("value field contains a non-finite entry");
  }
}

double ValueField::min() const { return *std::min_element(values_.begin(), values_.end()); }

double ValueField::max() const { return *std::max_element(values_.begin(), values_.end()); }

ValueField ValueField::shifted(double c) const {
  std::vector<double> v(values_);
  for (double& x : v) x += c;
  return ValueField(std::move(v), step_index_);
}

ValueField ValueField::with_step_index(std::int64_t step_index) const {
  ValueField copy(*this);
  copy.step_index_ = step_index;
  return copy;
}

double ValueField::lipschitz() const {
  const std::size_t n = values_.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(values_[(i + 1) % n] - values_[i]));
  }
  return worst * static_cast<double>(n);
}

double wrap(double x) {
  double r = x - std::floor(x);
  // x slightly below an integer can round up to exactly 1.
  if (r >= 1.0) r = 0.0;
  return r;
}

double circle_dist(double x, double y) {
  const double d = wrap(x - y);
  return std::min(d, 1.0 - d);
}

double interp(std::span<const double> values, double x) {
  const std::size_t n = values.size();
  const double s = wrap(x) * static_cast<double>(n);
  double base = std::floor(s);
  double frac = s - base;
  // Node positions i/n do not always scale back to exactly i.
  const double nearest = std::nearbyint(s);
  if (std::abs(s - nearest) <= 1e-9) {
    base = nearest;
    frac = 0.0;
  }
  const std::size_t i = static_cast<std::size_t>(base) % n;
  if (frac == 0.0) return values[i];
  return (1.0 - frac) * values[i] + frac * values[(i + 1) % n];
}

double sup_dist(std::span<const double> f, std::span<const double> g) {
  if (f.size() != g.size()) {
    throw SizeMismatch("sup_dist on fields of size " + std::to_string(f.size()) + " and " +
                       std::to_string(g.size()));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) worst = std::max(worst, std::abs(f[i] - g[i]));
  return worst;
}

}  // namespace weakkam
