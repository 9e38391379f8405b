#pragma once

#include <cmath>

#include "weakkam/grid.hpp"

namespace test_support {

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(1.0, std::abs(b));
}

inline weakkam::ValueField constant(const weakkam::CircleGrid& grid, double c) {
  return weakkam::sample(grid, [c](double) { return c; });
}

}  // namespace test_support
