#include "weakkam/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "weakkam/errors.hpp"
#include "weakkam/grid.hpp"

namespace weakkam {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFirstOrderTolerance = 1e-12;
constexpr int kMaxNewtonIterations = 200;

double modulation_factor(const HamiltonianSpec& spec, double t) {
  return 1.0 + spec.modulation * std::cos(kTwoPi * wrap(t));
}

// Base-family pieces, without shift or rescaling.
double base_potential(const HamiltonianSpec& spec, double t, double x) {
  if (spec.base == Family::TiltedQuadratic) return 0.0;
  return spec.amplitude * std::cos(kTwoPi * wrap(x)) * modulation_factor(spec, t);
}

double base_potential_x(const HamiltonianSpec& spec, double t, double x) {
  if (spec.base == Family::TiltedQuadratic) return 0.0;
  return -kTwoPi * spec.amplitude * std::sin(kTwoPi * wrap(x)) * modulation_factor(spec, t);
}

double kinetic(const HamiltonianSpec& spec, double p) {
  switch (spec.base) {
    case Family::TiltedQuadratic: return 0.5 * (p + spec.tilt) * (p + spec.tilt);
    case Family::Quartic: return 0.25 * p * p * p * p;
    default: return 0.5 * p * p;
  }
}

double kinetic_p(const HamiltonianSpec& spec, double p) {
  switch (spec.base) {
    case Family::TiltedQuadratic: return p + spec.tilt;
    case Family::Quartic: return p * p * p;
    default: return p;
  }
}

double kinetic_pp(const HamiltonianSpec& spec, double p) {
  return spec.base == Family::Quartic ? 3.0 * p * p : 1.0;
}

HamiltonianSpec base_of(const HamiltonianSpec& spec) {
  HamiltonianSpec base = spec;
  base.rescaling.reset();
  base.lambda_shift = 0.0;
  return base;
}

// Coordinates of the base family seen from a rescaled spec.
struct BaseCoordinates {
  double t;
  double x;
};

BaseCoordinates to_base(const Rescaling& r, double t, double x) {
  const double b = static_cast<double>(r.b);
  const double a = static_cast<double>(r.a);
  return {wrap(b * wrap(t)), wrap(b * wrap(x) + a * wrap(t))};
}

// Safeguarded Newton on H_p(p) = v. H_p is increasing in p for every catalog
// family, so a bracket always exists; bisection covers points where H_pp
// vanishes (Quartic at p = 0).
LegendreResult solve_first_order(const HamiltonianSpec& spec, double t, double x, double v) {
  auto residual_at = [&](double p) { return partials(spec, t, x, p).h_p - v; };

  double lo = -1.0;
  double hi = 1.0;
  for (int k = 0; k < 1100 && residual_at(lo) > 0.0; ++k) lo *= 2.0;
  for (int k = 0; k < 1100 && residual_at(hi) < 0.0; ++k) hi *= 2.0;

  double p = std::clamp(v, lo, hi);
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
  for (; iterations < kMaxNewtonIterations; ++iterations) {
    const Partials d = partials(spec, t, x, p);
    residual = d.h_p - v;
    if (std::abs(residual) <= kFirstOrderTolerance) break;
    if (residual > 0.0) {
      hi = p;
    } else {
      lo = p;
    }
    double next = d.h_pp > 0.0 ? p - residual / d.h_pp : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == p) break;
    p = next;
  }
  if (!(std::abs(residual) <= kFirstOrderTolerance)) {
    throw NoConvergence("Legendre transform: first-order condition not met at v = " + std::to_string(v),
                        std::abs(residual));
  }
  return {p * v - eval(spec, t, x, p), p, iterations};
}

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

std::string to_string(Family family) {
  switch (family) {
    case Family::Mechanical: return "mechanical";
    case Family::TiltedQuadratic: return "tilted_quadratic";
    case Family::Quartic: return "quartic";
    case Family::Rescaled: return "rescaled";
  }
  return "unknown";
}

HamiltonianSpec HamiltonianSpec::mechanical(double amplitude, double modulation) {
  HamiltonianSpec s;
  s.base = Family::Mechanical;
  s.amplitude = amplitude;
  s.modulation = modulation;
  return s;
}

HamiltonianSpec HamiltonianSpec::tilted_quadratic(double tilt) {
  HamiltonianSpec s;
  s.base = Family::TiltedQuadratic;
  s.tilt = tilt;
  return s;
}

HamiltonianSpec HamiltonianSpec::quartic(double amplitude, double modulation) {
  HamiltonianSpec s;
  s.base = Family::Quartic;
  s.amplitude = amplitude;
  s.modulation = modulation;
  return s;
}

HamiltonianSpec HamiltonianSpec::with_lambda_shift(double shift) const {
  HamiltonianSpec s = *this;
  s.lambda_shift = shift;
  return s;
}

void validate(const HamiltonianSpec& spec) {
  if (spec.base == Family::Rescaled) throw ConfigError("base family cannot be 'rescaled'");
  if (!std::isfinite(spec.amplitude) || !std::isfinite(spec.modulation) || !std::isfinite(spec.tilt) ||
      !std::isfinite(spec.lambda_shift)) {
    throw ConfigError("Hamiltonian parameters must be finite");
  }
  if (spec.base != Family::TiltedQuadratic) {
    if (spec.amplitude < 0.0) throw ConfigError("amplitude must be >= 0");
    if (spec.modulation < 0.0 || spec.modulation >= 1.0) throw ConfigError("modulation must lie in [0, 1)");
  }
  if (spec.rescaling && spec.rescaling->b < 1) throw ConfigError("rescale.b must be >= 1");
}

double eval(const HamiltonianSpec& spec, double t, double x, double p) {
  if (spec.rescaling) {
    const Rescaling& r = *spec.rescaling;
    const double b = static_cast<double>(r.b);
    const BaseCoordinates c = to_base(r, t, x);
    const double q = p / b;
    return b * (kinetic(spec, q) + base_potential(spec, c.t, c.x)) -
           (static_cast<double>(r.a) / b) * p - spec.lambda_shift;
  }
  return kinetic(spec, p) + base_potential(spec, t, x) - spec.lambda_shift;
}

Partials partials(const HamiltonianSpec& spec, double t, double x, double p) {
  if (spec.rescaling) {
    const Rescaling& r = *spec.rescaling;
    const double b = static_cast<double>(r.b);
    const BaseCoordinates c = to_base(r, t, x);
    const double q = p / b;
    return {kinetic_p(spec, q) - static_cast<double>(r.a) / b,
            b * b * base_potential_x(spec, c.t, c.x),
            kinetic_pp(spec, q) / b};
  }
  return {kinetic_p(spec, p), base_potential_x(spec, t, x), kinetic_pp(spec, p)};
}

LegendreResult legendre(const HamiltonianSpec& spec, double t, double x, double v) {
  if (spec.rescaling) {
    // sup_p [p v - b H(., p/b) + (a/b) p] = b L(bt, bx + at, v + a/b)
    const Rescaling& r = *spec.rescaling;
    const double b = static_cast<double>(r.b);
    const BaseCoordinates c = to_base(r, t, x);
    const LegendreResult inner = legendre(base_of(spec), c.t, c.x, v + static_cast<double>(r.a) / b);
    return {b * inner.value + spec.lambda_shift, b * inner.argmax_p, inner.iterations};
  }
  switch (spec.base) {
    case Family::Mechanical:
      return {0.5 * v * v - base_potential(spec, t, x) + spec.lambda_shift, v, 0};
    case Family::TiltedQuadratic:
      return {0.5 * v * v - spec.tilt * v + spec.lambda_shift, v - spec.tilt, 0};
    default:
      return solve_first_order(spec, t, x, v);
  }
}

HamiltonianSpec rescale(const HamiltonianSpec& spec, long a, long b) {
  if (b < 1) throw InvalidRescale("rescale needs b >= 1, got " + std::to_string(b));
  if (a == 0) throw InvalidRescale("rescale needs a != 0");
  HamiltonianSpec out = spec;
  const Rescaling inner = spec.rescaling.value_or(Rescaling{0, 1});
  // Composition of (a1, b1) followed by (a, b) is (a1 b + a b1, b1 b).
  out.rescaling = Rescaling{inner.a * b + a * inner.b, inner.b * b};
  out.lambda_shift = static_cast<double>(b) * spec.lambda_shift;
  return out;
}

double verify_convexity(const HamiltonianSpec& spec, int n_samples, double p_lo, double p_hi) {
  if (n_samples < 1) throw ConfigError("verify_convexity needs n_samples >= 1");
  double lowest = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_samples; ++k) {
    const auto index = static_cast<unsigned>(k);
    const double p = p_lo + (p_hi - p_lo) * radical_inverse(index, 2);
    const double t = radical_inverse(index, 3);
    const double x = radical_inverse(index, 5);
    lowest = std::min(lowest, partials(spec, t, x, p).h_pp);
  }
  return lowest;
}

std::vector<PotentialTerm> potential_terms(const HamiltonianSpec& spec) {
  if (spec.base == Family::TiltedQuadratic) return {};
  const double amp = spec.amplitude;
  const double eps = spec.modulation;
  if (!spec.rescaling) {
    return {{[amp, eps](double t) { return amp * (1.0 + eps * std::cos(kTwoPi * wrap(t))); },
             [](double x) { return std::cos(kTwoPi * wrap(x)); }}};
  }
  // b A g(bt) cos(2 pi (bx + at)) split with the angle-addition formula.
  const double a = static_cast<double>(spec.rescaling->a);
  const double b = static_cast<double>(spec.rescaling->b);
  auto g = [amp, eps, b](double t) { return b * amp * (1.0 + eps * std::cos(kTwoPi * wrap(b * wrap(t)))); };
  return {{[g, a](double t) { return g(t) * std::cos(kTwoPi * wrap(a * wrap(t))); },
           [b](double x) { return std::cos(kTwoPi * wrap(b * wrap(x))); }},
          {[g, a](double t) { return -g(t) * std::sin(kTwoPi * wrap(a * wrap(t))); },
           [b](double x) { return std::sin(kTwoPi * wrap(b * wrap(x))); }}};
}

double potential(const HamiltonianSpec& spec, double t, double x) {
  double total = 0.0;
  for (const PotentialTerm& term : potential_terms(spec)) total += term.time_factor(t) * term.space_factor(x);
  return total;
}

double momentum_bound(const HamiltonianSpec& spec) {
  const double oscillation = 2.0 * spec.amplitude * (1.0 + spec.modulation);
  double bound = 0.0;
  switch (spec.base) {
    case Family::Quartic: bound = std::pow(4.0 * oscillation, 0.25); break;
    case Family::TiltedQuadratic: bound = 0.0; break;
    default: bound = std::sqrt(2.0 * oscillation); break;
  }
  if (spec.rescaling) bound *= static_cast<double>(spec.rescaling->b);
  return bound;
}

}  // namespace weakkam
