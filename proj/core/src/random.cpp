#include "weakkam/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace weakkam {

double uniform01(Lcg64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

ValueField random_fourier_field(const CircleGrid& grid, Lcg64& rng, double amplitude) {
  constexpr int kModes = 4;
  double a[kModes];
  double b[kModes];
  for (int k = 0; k < kModes; ++k) {
    a[k] = amplitude * (2.0 * uniform01(rng) - 1.0);
    b[k] = amplitude * (2.0 * uniform01(rng) - 1.0);
  }
  return sample(grid, [&](double x) {
    double v = 0.0;
    for (int k = 0; k < kModes; ++k) {
      const double angle = 2.0 * std::numbers::pi * (k + 1) * x;
      v += (a[k] * std::cos(angle) + b[k] * std::sin(angle)) / (k + 1);
    }
    return v;
  });
}

ValueField random_lipschitz_field(const CircleGrid& grid, Lcg64& rng, double lipschitz) {
  const auto n = static_cast<std::size_t>(grid.size());
  std::vector<double> increments(n);
  double mean = 0.0;
  for (double& d : increments) {
    d = 2.0 * uniform01(rng) - 1.0;
    mean += d;
  }
  mean /= static_cast<double>(n);
  double largest = 0.0;
  for (double& d : increments) {
    d -= mean;
    largest = std::max(largest, std::abs(d));
  }
  const double scale = largest > 0.0 ? lipschitz * grid.spacing() / largest : 0.0;
  std::vector<double> values(n);
  double running = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = running;
    running += increments[i] * scale;
  }
  return ValueField(std::move(values), 0);
}

}  // namespace weakkam
