#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <numbers>

#include "gravent/entropy.hpp"
#include "gravent/errors.hpp"
#include "gravent/fock.hpp"
#include "gravent/model.hpp"

namespace gravent {

struct ModeCoefficients {
  std::complex<double> c0;
  double c_plus = 0;
  double c_minus = 0;
  double t = 0;

  double commutator() const { return std::norm(c0) + c_plus * c_plus - c_minus * c_minus; }
};

inline ModeCoefficients mode_coefficients(const DerivedScales& s, double t) {
  if (t < 0) throw DomainError("mode_coefficients: t must be >= 0");
  const double th = s.omega_e * t;
  const double sn = std::sin(th);
  ModeCoefficients mc;
  mc.c0 = {std::cos(th), -(s.omega_m / s.omega_e) * sn};
  mc.c_plus = (s.g_plus / s.omega_e) * sn;
  mc.c_minus = (s.g_minus / s.omega_e) * sn;
  mc.t = t;
  return mc;
}

// own(t) = alpha*own + beta*other + gamma*own^+ + delta*other^+
struct ModeExpansion {
  std::complex<double> alpha, beta, gamma, delta;

  double commutator() const {
    return std::norm(alpha) + std::norm(beta) - std::norm(gamma) - std::norm(delta);
  }
};

inline ModeExpansion expansion_of(const ModeCoefficients& mc) { return {mc.c0, mc.c_plus, 0.0, mc.c_minus}; }

// Exact Heisenberg solution: s,d = (a +- b)/sqrt2 evolve independently under
// Omega n + (kappa/2)(x^2 + x^+2).
inline ModeExpansion normal_mode_expansion(const DerivedScales& s, double t) {
  if (t < 0) throw DomainError("normal_mode_expansion: t must be >= 0");
  using C = std::complex<double>;
  auto single = [t](double Om, double ka) {
    double e = std::sqrt((Om - ka) * (Om + ka));
    double sn = std::sin(e * t);
    return std::pair<C, C>{C(std::cos(e * t), -(Om / e) * sn), C(0, -(ka / e) * sn)};
  };
  const double w = s.omega_m;
  auto [ms, ns] = single(w + s.g_plus, s.g_minus);
  auto [md, nd] = single(w - s.g_plus, -s.g_minus);
  return {(ms + md) / 2.0, (ms - md) / 2.0, (ns + nd) / 2.0, (ns - nd) / 2.0};
}

enum class Dynamics { heisenberg_ansatz, normal_modes };

inline ModeExpansion expansion_at(const DerivedScales& s, double t, Dynamics dyn) {
  return dyn == Dynamics::normal_modes ? normal_mode_expansion(s, t) : expansion_of(mode_coefficients(s, t));
}

struct SecondMoments {
  double xx = 0;  // <x^2>
  double pp = 0;  // <p^2>
  double xp = 0;  // <xp + px>/2
  Subsystem subsystem = Subsystem::A;
  double hbar = 0;
  double excess = 0;  // 4(xx pp - xp^2)/hbar^2 - 1, kept without cancellation where possible

  static SecondMoments from_raw(double xx, double pp, double xp, double hbar, Subsystem sub = Subsystem::A) {
    SecondMoments m{xx, pp, xp, sub, hbar, 0};
    m.excess = 4.0 * (xx * pp - xp * xp) / (hbar * hbar) - 1.0;
    return m;
  }
};

// Quadrature rows of Q(t) = own + own^+ and P(t) = i(own^+ - own) over (Q_own, P_own, Q_oth, P_oth).
inline std::pair<std::array<double, 4>, std::array<double, 4>> quadrature_rows(const ModeExpansion& e) {
  using C = std::complex<double>;
  const C I(0, 1);
  C k = e.alpha + std::conj(e.gamma), kb = e.beta + std::conj(e.delta);
  std::array<double, 4> u{k.real(), -k.imag(), kb.real(), -kb.imag()};
  k = I * (std::conj(e.gamma) - e.alpha);
  kb = I * (std::conj(e.delta) - e.beta);
  std::array<double, 4> v{k.real(), -k.imag(), kb.real(), -kb.imag()};
  return {u, v};
}

// Moments of one subsystem for a canonical expansion acting on SMSV(r) x SMSV(r).
inline SecondMoments moments_from_expansion(const DerivedScales& s, double r, const ModeExpansion& e,
                                            Subsystem sub) {
  if (std::abs(e.commutator() - 1.0) > 1e-10)
    throw ContractError("mode expansion does not preserve [a, a^+] = 1");
  auto [u, v] = quadrature_rows(e);
  const double em = std::exp(-2 * r), ep = std::exp(2 * r);
  const std::array<double, 4> V{em, ep, em, ep};
  double qq = 0, pp = 0, qp = 0;
  for (int i = 0; i < 4; ++i) {
    qq += V[i] * u[i] * u[i];
    pp += V[i] * v[i] * v[i];
    qp += V[i] * u[i] * v[i];
  }
  auto w = [&](int i, int j) { return u[i] * v[j] - u[j] * v[i]; };
  // det = a'^2 + b^2 + cross with a' + b = 1 for a canonical map
  const double b = w(2, 3), a = 1.0 - b;
  const double cross = em * em * w(0, 2) * w(0, 2) + ep * ep * w(1, 3) * w(1, 3) + w(0, 3) * w(0, 3) +
                       w(1, 2) * w(1, 2);
  SecondMoments m;
  m.xx = s.delta_x * s.delta_x * qq;
  m.pp = s.delta_p * s.delta_p * pp;
  m.xp = s.delta_x * s.delta_p * qp;
  m.subsystem = sub;
  m.hbar = s.hbar;
  m.excess = cross - 2.0 * a * b;
  return m;
}

// Both subsystems obey the same equations (the coupling is symmetric), so B mirrors A.
inline SecondMoments second_moments(const DerivedScales& s, double r, double t, Subsystem sub = Subsystem::A,
                                    Dynamics dyn = Dynamics::heisenberg_ansatz) {
  return moments_from_expansion(s, r, expansion_at(s, t, dyn), sub);
}

inline SecondMoments normal_mode_second_moments(const DerivedScales& s, double r, double t,
                                                Subsystem sub = Subsystem::A) {
  return second_moments(s, r, t, sub, Dynamics::normal_modes);
}

inline std::atomic<long>& symplectic_clamp_counter() {
  static std::atomic<long> n{0};
  return n;
}

// f = sqrt(xx pp - xp^2)/hbar - 1/2
inline double symplectic_f(const SecondMoments& m) {
  if (m.excess < -1e-10) throw NumericalError("second moments violate the uncertainty relation");
  if (m.excess < 0) {
    symplectic_clamp_counter().fetch_add(1, std::memory_order_relaxed);
    return 0.0;
  }
  return m.excess / (2.0 * (std::sqrt(1.0 + m.excess) + 1.0));
}

inline EntropyValue entropy_gaussian(double f) {
  if (f < 0 || std::isnan(f)) throw DomainError("entropy_gaussian: f must be >= 0");
  if (f == 0) return EntropyValue::zero();
  return EntropyValue::from_value((1 + f) * std::log1p(f) - f * std::log(f));
}

inline EntropyValue entropy_exact_moments(const DerivedScales& s, double r, double t,
                                          Dynamics dyn = Dynamics::heisenberg_ansatz) {
  return entropy_gaussian(symplectic_f(second_moments(s, r, t, Subsystem::A, dyn)));
}

inline void require_weak_coupling(const DerivedScales& s) {
  double ratio = std::max(s.g_x, s.g_p) / s.omega_m;
  if (!(ratio < 0.05))
    throw RegimeError("g/omega_m", "coupling ratio max(g_x, g_p)/omega_m = " + std::to_string(ratio) +
                                       " is outside the weak-coupling regime (< 0.05)");
}

inline double amplitude_A(const DerivedScales& s, double r, double t) {
  const double gx = s.g_x, gp = s.g_p, wt = s.omega_m * t;
  const double sn = std::sin(wt);
  return gp * gp - 4 * gp * gx + gx * gx + (gp * gp + gx * gx) * std::cos(2 * wt) +
         2 * (gp * gp * std::exp(4 * r) + gx * gx * std::exp(-4 * r)) * sn * sn;
}

inline EntropyValue entropy_closed_time(const DerivedScales& s, double r, double t) {
  require_weak_coupling(s);
  const double sn = std::sin(s.omega_m * t);
  const double A = std::max(amplitude_A(s, r, t), 0.0);
  const double X = A / (2 * s.omega_m * s.omega_m) * sn * sn;
  if (!(X > 0)) return EntropyValue::zero();
  if (!(X < 1))
    throw RegimeError("X", "closed time law needs X = A sin^2/(2 omega_m^2) < 1, got " + std::to_string(X));
  const double lnX = std::log(X);
  return EntropyValue::from_ln(lnX + std::log(1.0 - lnX));
}

inline double quarter_period(const DerivedScales& s) { return std::numbers::pi / (2.0 * s.omega_m); }

inline EntropyValue max_entropy_over_time(const DerivedScales& s, double r,
                                          Dynamics dyn = Dynamics::heisenberg_ansatz) {
  require_weak_coupling(s);
  return entropy_exact_moments(s, r, quarter_period(s), dyn);
}

// g_x e^{-2r} = g_p e^{2r}
inline double find_dip_squeezed(const DerivedScales& s) {
  if (!(s.g_x > 0 && s.g_p > 0)) throw DomainError("find_dip_squeezed: couplings must be positive");
  return 0.25 * (std::log(s.g_x) - std::log(s.g_p));
}

}  // namespace gravent
