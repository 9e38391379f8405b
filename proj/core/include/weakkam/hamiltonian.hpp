#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace weakkam {

/// Catalog families. All are 1-periodic in t and x.
///
///   Mechanical       H = p^2/2 + A cos(2 pi x) (1 + eps cos(2 pi t))
///   TiltedQuadratic  H = (p + c)^2 / 2
///   Quartic          H = p^4/4 + A cos(2 pi x) (1 + eps cos(2 pi t))
///   Rescaled         a base family viewed in the moving frame of a rational
///                    rotation a/b, see rescale()
enum class Family { Mechanical, TiltedQuadratic, Quartic, Rescaled };

std::string to_string(Family family);

struct Rescaling {
  long a = 0;
  long b = 1;

  friend bool operator==(const Rescaling&, const Rescaling&) = default;
};

struct HamiltonianSpec {
  Family base = Family::Mechanical;  // never Rescaled
  double amplitude = 0.0;            // A >= 0
  double modulation = 0.0;           // eps in [0, 1)
  double tilt = 0.0;                 // c
  std::optional<Rescaling> rescaling;
  // Subtracted from H, so that folding the critical value in gives lambda = 0.
  double lambda_shift = 0.0;

  Family family() const { return rescaling ? Family::Rescaled : base; }

  static HamiltonianSpec mechanical(double amplitude, double modulation = 0.0);
  static HamiltonianSpec tilted_quadratic(double tilt);
  static HamiltonianSpec quartic(double amplitude, double modulation = 0.0);

  HamiltonianSpec with_lambda_shift(double shift) const;

  friend bool operator==(const HamiltonianSpec&, const HamiltonianSpec&) = default;
};

// Throws ConfigError when parameters fall outside the catalog's ranges.
void validate(const HamiltonianSpec& spec);

struct Partials {
  double h_p = 0.0;   // velocity
  double h_x = 0.0;   // minus the force
  double h_pp = 0.0;  // curvature
};

struct LegendreResult {
  double value = 0.0;     // L(t, x, v)
  double argmax_p = 0.0;  // maximizing momentum, equals L_v
  int iterations = 0;
};

double eval(const HamiltonianSpec& spec, double t, double x, double p);

Partials partials(const HamiltonianSpec& spec, double t, double x, double p);

// L(t,x,v) = sup_p (p v - H). Closed form for Mechanical and TiltedQuadratic;
// safeguarded Newton on H_p(p) = v for Quartic (residual <= 1e-12). Rescaled
// specs route through their base family. Throws NoConvergence.
LegendreResult legendre(const HamiltonianSpec& spec, double t, double x, double v);

// Frame change for a rational rotation number a/b:
//
//   H~(t, x, p) = b H(b t, b x + a t, p / b) - (a / b) p
//
// so that u~(t, x) = u(b t, b x + a t) solves the rescaled equation whenever u
// solves the original one, and rotation a/b maps to 0. Rescaling a Rescaled
// spec composes the two frame changes. Throws InvalidRescale if b < 1 or a == 0.
HamiltonianSpec rescale(const HamiltonianSpec& spec, long a, long b);

// Minimum of H_pp over a Halton sample of n_samples points with t, x in
// [0, 1) and p in [p_lo, p_hi]. Callers reject the spec if the result is <= 0.
double verify_convexity(const HamiltonianSpec& spec, int n_samples, double p_lo, double p_hi);

/// Space-time separable piece g(t) h(x) of the potential.
struct PotentialTerm {
  std::function<double(double)> time_factor;
  std::function<double(double)> space_factor;
};

// Every catalog Lagrangian splits as L(t,x,v) = K(v) - sum_k g_k(t) h_k(x).
// Returns the terms of the potential part.
std::vector<PotentialTerm> potential_terms(const HamiltonianSpec& spec);

// sum_k g_k(t) h_k(x).
double potential(const HamiltonianSpec& spec, double t, double x);

// Bound on |u_x| for solutions past the initial transient, from the energy
// oscillation of the potential. Used to size the velocity grid.
double momentum_bound(const HamiltonianSpec& spec);

}  // namespace weakkam
