#pragma once

#include <cmath>
#include <string>

#include "gravent/errors.hpp"

namespace gravent {

struct PhysicalParams {
  double G = 6.67430e-11;
  double c = 2.99792458e8;
  double hbar = 1.054571817e-34;
  double m = 1e-14;
  double d = 1e-4;
  double omega_m = 1e2;
  double r = 0.0;

  friend bool operator==(const PhysicalParams&, const PhysicalParams&) = default;
};

// Placeholder lab-scale point; nothing here is a measured value.
inline PhysicalParams lab_defaults() { return PhysicalParams{}; }

struct DerivedScales {
  double omega_m = 0;
  double hbar = 0;
  double delta_x = 0;
  double delta_p = 0;
  double g_x = 0;
  double g_p = 0;
  double g_plus = 0;
  double g_minus = 0;
  double omega_e = 0;
  double omega_0 = 0;
  double g_0 = 0;
  double eps_0pn = 0;
  double eps_1pn = 0;
  double eps_2pn = 0;
  double x_planck = 0;
  double p_planck = 0;
};

inline double effective_delta_x(const PhysicalParams& p) {
  return std::sqrt(p.hbar / (2.0 * p.m * p.omega_m)) * std::exp(-p.r);
}

inline void validate(const PhysicalParams& p) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw DomainError(std::string("parameter ") + name + " must be positive and finite");
  };
  positive(p.G, "G");
  positive(p.c, "c");
  positive(p.hbar, "hbar");
  positive(p.m, "m");
  positive(p.d, "d");
  positive(p.omega_m, "omega_m");
  if (!std::isfinite(p.r)) throw DomainError("parameter r must be finite");
  double dx = effective_delta_x(p);
  if (!(p.d > 10.0 * dx))
    throw ValidityError("d>10*delta_x", "separation d=" + std::to_string(p.d) +
                                            " does not exceed 10*delta_x=" + std::to_string(10.0 * dx));
}

inline DerivedScales derive_scales(const PhysicalParams& p) {
  validate(p);
  DerivedScales s;
  const double w = p.omega_m;
  s.omega_m = w;
  s.hbar = p.hbar;
  s.delta_x = std::sqrt(p.hbar / (2.0 * p.m * w));
  s.delta_p = p.hbar / (2.0 * s.delta_x);
  s.eps_1pn = p.G * p.m / (p.c * p.c * p.d);
  s.eps_0pn = p.G * p.m / (2.0 * p.d * p.d * p.d * w * w);
  s.eps_2pn = 9.0 * p.G * p.hbar * w / (32.0 * std::pow(p.c, 4) * p.d);
  s.g_x = 2.0 * s.eps_0pn * w;
  s.g_p = 2.0 * s.eps_1pn * w;
  s.g_plus = s.g_x + s.g_p;
  s.g_minus = s.g_x - s.g_p;
  // omega_m^2 + g_+^2 - g_-^2 = omega_m^2 + 4 g_x g_p
  s.omega_e = w * std::sqrt(1.0 + 4.0 * (s.g_x / w) * (s.g_p / w));
  s.omega_0 = p.c / (std::sqrt(2.0) * p.d);
  // g_x evaluated at omega_0; carries 1/c, see README
  s.g_0 = 2.0 * s.eps_1pn * s.omega_0;
  s.x_planck = std::sqrt(p.hbar * p.G / (p.c * p.c * p.c));
  s.p_planck = p.hbar / s.x_planck;
  return s;
}

// Rescale G so that eps_1pn == coupling_scale. Ratios that do not involve G are untouched.
inline PhysicalParams dimensionless_point(const PhysicalParams& p, double coupling_scale) {
  if (!(coupling_scale > 0.0 && coupling_scale <= 0.1))
    throw DomainError("coupling_scale must lie in (0, 0.1]");
  validate(p);
  PhysicalParams q = p;
  q.G = coupling_scale * p.c * p.c * p.d / p.m;
  return q;
}

inline PhysicalParams with_omega(PhysicalParams p, double omega) {
  p.omega_m = omega;
  return p;
}

inline double omega_zero(const PhysicalParams& p) { return p.c / (std::sqrt(2.0) * p.d); }

// omega for which the ground-state zero-point motion equals dx
inline double omega_for_delta_x(const PhysicalParams& p, double dx) {
  return p.hbar / (2.0 * p.m * dx * dx);
}

}  // namespace gravent
