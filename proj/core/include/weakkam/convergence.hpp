#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "weakkam/operator.hpp"
#include "weakkam/spectrum.hpp"

namespace weakkam {

struct RationalApprox {
  long p = 0;
  long q = 1;
  double error = 0.0;  // |rho - p/q|

  friend bool operator==(const RationalApprox&, const RationalApprox&) = default;
};

// Smallest-denominator continued-fraction convergent p/q with q <= cap and
// |rho - p/q| <= spread + 1 / (2 cap^2). Absent means irrational at this
// resolution.
std::optional<RationalApprox> rational_reduce(double rho, int denominator_cap, double spread = 0.0);

struct PeriodDetection {
  std::optional<int> period;
  // residual_history[T-1][n] = sup_dist(u(n+T) + lambda T, u(n)), n = 0..N-T.
  std::vector<std::vector<double>> residual_history;
  int tail_start = 0;            // first n in the decision window (final quarter)
  std::vector<double> tail_max;  // per T, max residual over the decision window
};

// Smallest T <= q_max whose residuals over the final quarter stay within tol.
// Throws InsufficientData below 4 q_max periods.
PeriodDetection detect_period(const EvolutionTrace& trace, double lambda, int q_max, double tol);

struct Tolerances {
  double lambda_tol = 1e-3;      // residual drift after folding lambda in
  double fixedpoint_tol = 1e-8;  // power iteration stopping rule
  double period_tol = 1e-3;      // period detection and final gap
};

struct VerifyConfig {
  int n_x = 200;
  int m_t = 50;
  int n_v = 121;
  std::optional<double> v_max;  // default_v_max(spec) when absent
  int n_periods = 200;
  int q_max = 8;
  int window = 64;
  int rotation_probes = 16;
  int rotation_span = 32;
  Tolerances tolerances;
  std::uint64_t seed = 1;

  Grids grids(const HamiltonianSpec& spec) const;
};

struct UniquenessCheck {
  int n_solutions = 0;
  double max_gap = 0.0;  // pairwise sup distance of min-gauged limits
  bool ok = false;
};

struct ConvergenceReport {
  HamiltonianSpec spec;
  VerifyConfig config;
  LambdaEstimate lambda;
  double residual_drift = 0.0;  // lambda of the normalized equation
  double rho = 0.0;
  double rho_spread = 0.0;
  std::optional<RationalApprox> rational;
  std::optional<int> detected_period;
  PeriodDetection detection;
  double final_gap = 0.0;
  std::optional<UniquenessCheck> uniqueness;
  bool lambda_ok = false;
  bool addendum_ok = false;
  bool theorem_ok = false;

  std::string rho_hypothesis() const { return rational ? "rational" : "irrational_at_resolution"; }
};

// evolve -> lambda -> fold lambda in -> re-evolve -> residual drift ->
// rotation number -> rational reduction -> period detection -> final gap of
// the trace tail against the limit built from its final T-period block.
// When rho is irrational at resolution, also evolves from two more seeded
// initial fields and compares the min-gauged limits. Never throws for a
// missing period: the report carries the residual histories instead.
ConvergenceReport verify_theorem(const HamiltonianSpec& spec, const ValueField& u0, const VerifyConfig& config);

}  // namespace weakkam
