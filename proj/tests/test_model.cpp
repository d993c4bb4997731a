#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gravent/model.hpp"
#include "gravent/pn_potential.hpp"

using namespace gravent;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

PhysicalParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  PhysicalParams p;
  p.m = std::pow(10.0, -16 + 4 * u(rng));
  p.d = std::pow(10.0, -6 + 3 * u(rng));
  p.omega_m = std::pow(10.0, 0 + 14 * u(rng));
  return p;
}

}  // namespace

TEST(Model, UnitChoiceGivesUnitZeroPointMotion) {
  PhysicalParams p;
  p.hbar = 2;
  p.m = 1;
  p.omega_m = 1;
  p.d = 100;
  auto s = derive_scales(p);
  EXPECT_DOUBLE_EQ(s.delta_x, 1.0);
  EXPECT_DOUBLE_EQ(s.delta_p, 1.0);
}

TEST(Model, HeisenbergProductAcrossRandomPoints) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    auto p = random_params(rng);
    auto s = derive_scales(p);
    EXPECT_LE(rel(s.delta_x * s.delta_p, p.hbar / 2), 1e-14);
    EXPECT_LE(rel(s.omega_e * s.omega_e, s.omega_m * s.omega_m + s.g_plus * s.g_plus - s.g_minus * s.g_minus), 1e-14);
    EXPECT_EQ(s.g_plus, s.g_x + s.g_p);
    EXPECT_EQ(s.g_minus, s.g_x - s.g_p);
  }
}

TEST(Model, MatchingPointEqualCouplings) {
  PhysicalParams p = lab_defaults();
  p.omega_m = omega_zero(p);
  auto s = derive_scales(p);
  EXPECT_LE(rel(s.g_x, s.g_p), 1e-12);
  EXPECT_LE(rel(s.g_x, s.g_0), 1e-12);
  EXPECT_LE(std::abs(s.g_minus), 1e-12 * s.g_x);
  // g_0 = sqrt2 G m/(c d^2)
  EXPECT_LE(rel(s.g_0, std::sqrt(2.0) * p.G * p.m / (p.c * p.d * p.d)), 1e-14);
}

TEST(Model, MatchingIsBidirectionalOnLogGrid) {
  PhysicalParams p = lab_defaults();
  const double w0 = omega_zero(p);
  for (int k = -40; k <= 40; ++k) {
    double w = w0 * std::pow(10.0, k / 10.0);
    auto s = derive_scales(with_omega(p, w));
    bool equal = rel(s.g_x, s.g_p) <= 1e-12;
    EXPECT_EQ(equal, k == 0) << k;
  }
}

TEST(Model, AdimensionalMatching) {
  PhysicalParams p = lab_defaults();
  p.omega_m = omega_zero(p);
  auto s = derive_scales(p);
  EXPECT_LE(rel(s.delta_x / p.d, std::sqrt(2.0) * s.delta_p / (p.m * p.c)), 1e-12);
}

TEST(Model, LabPointArithmetic) {
  PhysicalParams p;
  p.G = 6.674e-11;
  p.c = 2.998e8;
  p.hbar = 1.0546e-34;
  p.m = 1e-14;
  p.d = 1e-4;
  p.omega_m = 1e2;
  auto s = derive_scales(p);
  // independent arbitrary-precision evaluation (mpmath, 30 digits)
  EXPECT_LE(rel(s.eps_1pn, 7.42545285916650682e-38), 1e-12);
  EXPECT_LE(rel(s.eps_0pn, 3.337e-17), 1e-12);
  EXPECT_LE(rel(s.eps_2pn, 2.45041694141341694e-73), 1e-12);
  EXPECT_LE(rel(s.g_x, 6.674e-15), 1e-12);
  EXPECT_LE(rel(s.g_p, 1.48509057183330136e-35), 1e-12);
}

TEST(Model, ValidityGuardNamesItself) {
  PhysicalParams p = lab_defaults();
  p.d = 1e-12;
  try {
    derive_scales(p);
    FAIL();
  } catch (const ValidityError& e) {
    EXPECT_EQ(e.guard(), "d>10*delta_x");
  }
  p = lab_defaults();
  p.m = -1;
  EXPECT_THROW(derive_scales(p), DomainError);
  p = lab_defaults();
  p.r = -30;  // delta_x inflated by e^30
  EXPECT_THROW(derive_scales(p), ValidityError);
}

TEST(Model, RescalingPreservesRatios) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    auto p = random_params(rng);
    auto q = dimensionless_point(p, 1e-3);
    auto a = derive_scales(p), b = derive_scales(q);
    EXPECT_LE(rel(b.eps_1pn, 1e-3), 1e-14);
    EXPECT_LE(rel(b.g_x / b.g_p, a.g_x / a.g_p), 1e-13);
    EXPECT_EQ(q.omega_m * q.d / q.c, p.omega_m * p.d / p.c);
    EXPECT_EQ(effective_delta_x(q) / q.d, effective_delta_x(p) / p.d);
    // both 0PN and 1PN are linear in G
    EXPECT_LE(rel(b.eps_0pn / a.eps_0pn, b.eps_1pn / a.eps_1pn), 1e-13);
  }
}

TEST(Model, RescaleRangeChecked) {
  auto p = lab_defaults();
  EXPECT_THROW(dimensionless_point(p, 0.0), DomainError);
  EXPECT_THROW(dimensionless_point(p, 0.2), DomainError);
  EXPECT_NO_THROW(dimensionless_point(p, 0.1));
}

TEST(Model, DipConditionIsCouplingIndependent) {
  auto p = dimensionless_point(lab_defaults(), 1e-4);
  p.omega_m = omega_zero(p);
  auto s = derive_scales(p);
  EXPECT_LE(rel(s.g_x, s.g_p), 1e-12);
  EXPECT_LE(rel(s.omega_m * p.d / p.c, 1 / std::sqrt(2.0)), 1e-15);
}
