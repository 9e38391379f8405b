#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "weakkam/hamiltonian.hpp"

namespace weakkam {

struct InvariantSuiteConfig {
  HamiltonianSpec spec = HamiltonianSpec::mechanical(1.0, 0.5);
  int n_x = 128;
  int m_t = 32;
  int n_v = 61;
  int n_pairs = 50;
  int n_compactness = 20;
  std::uint64_t seed = 1;
  // Allowed drift of P(u + c) - P(u) - c, in ulps of the field scale per
  // period. Absent: one ulp per step, i.e. m_t.
  std::optional<double> equivariance_ulps;
};

struct InvariantResult {
  std::string name;
  int checks = 0;
  int violations = 0;
  double worst = 0.0;  // largest observed value of the checked quantity
  double bound = 0.0;  // what it was compared against (0 for exact checks)

  bool passed() const { return violations == 0; }
};

// Unit in the last place of |x|.
double ulp_of(double x);

// Structural properties of the one-period map on seeded random fields:
// monotonicity (exact), constant equivariance (within equivariance_ulps),
// nonexpansiveness (2 ulp of the field scale), period map equal to
// m_t steps bitwise, determinism, and a Lipschitz bound after one period
// that does not depend on the initial field.
std::vector<InvariantResult> run_invariant_suite(const InvariantSuiteConfig& config);

// max |L_v| over the velocity grid plus sup |H_x|: bounds the discrete slope
// of any iterate after one period.
double lipschitz_bound(const HamiltonianSpec& spec, double v_max, int n_v);

}  // namespace weakkam
