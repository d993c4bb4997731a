#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gravent/fock.hpp"

using namespace gravent;

namespace {

CouplingTerm monomial(int xa, int xb, int pa, int pb, double coeff = 1.0) {
  CouplingTerm t;
  t.pow_xA = xa;
  t.pow_xB = xb;
  t.pow_pA = pa;
  t.pow_pB = pb;
  t.coeff = coeff;
  return t;
}

double tms_entropy(double s) {
  if (s == 0) return 0;
  double c2 = std::pow(std::cosh(s), 2), s2 = std::pow(std::sinh(s), 2);
  return c2 * std::log(c2) - s2 * std::log(s2);
}

}  // namespace

TEST(Fock, LadderAndNumber) {
  const int dim = 10;
  Eigen::MatrixXd L = ladder(dim);
  Eigen::MatrixXd n = L.transpose() * L;
  EXPECT_LE((n - number_op(dim)).cwiseAbs().maxCoeff(), 1e-14);
  Eigen::MatrixXd comm = L * L.transpose() - L.transpose() * L;
  for (int k = 0; k + 1 < dim; ++k) EXPECT_NEAR(comm(k, k), 1.0, 1e-14);
  EXPECT_NEAR(comm(dim - 1, dim - 1), -(dim - 1.0), 1e-14);
}

TEST(Fock, QuadraticMatrixElements) {
  FockSpace sp(6, 6, 0.3, 1.7);
  auto xx = assemble_monomial(sp, monomial(1, 1, 0, 0));
  auto pp = assemble_monomial(sp, monomial(0, 0, 1, 1));
  auto col = sp.index(0, 0);
  EXPECT_NEAR(xx.matrix(sp.index(1, 1), col).real(), 0.09, 1e-15);
  EXPECT_NEAR(pp.matrix(sp.index(1, 1), col).real(), -1.7 * 1.7, 1e-14);
  EXPECT_LE(hermiticity_defect(xx.matrix), 1e-15);
  EXPECT_LE(hermiticity_defect(pp.matrix), 1e-14);
}

TEST(Fock, WeylOrderingMatchesExplicitSymmetrization) {
  const int dim = 8, ext = 16;
  const double dx = 0.4, dp = 1.25;
  Eigen::MatrixXd L = ladder(ext);
  Eigen::MatrixXcd X = (dx * (L + L.transpose())).cast<cplx>();
  Eigen::MatrixXcd P = cplx(0, dp) * (L.transpose() - L).cast<cplx>();
  Eigen::MatrixXcd want = (X * X * P + X * P * X + P * X * X) / 3.0;
  Eigen::MatrixXcd got = weyl_single_mode(dim, 2, 1, dx, dp);
  EXPECT_LE((got - want.topLeftCorner(dim, dim)).cwiseAbs().maxCoeff(), 1e-13);
  Eigen::MatrixXcd xp = weyl_single_mode(dim, 1, 1, dx, dp);
  EXPECT_LE(std::abs(xp(0, 0)), 1e-15);
  EXPECT_LE(hermiticity_defect(xp), 1e-14);
  EXPECT_NEAR(weyl_single_mode(dim, 2, 0, dx, dp)(0, 0).real(), dx * dx, 1e-15);
}

TEST(Fock, SqueezedVacuumMoments) {
  const double dx = 0.7, dp = 1 / (2 * dx);
  for (double r : {-0.8, -0.2, 0.0, 0.3, 1.0}) {
    const int dim = 200;
    Eigen::VectorXcd v = smsv_amplitudes(dim, r).cast<cplx>();
    Eigen::MatrixXd L = ladder(dim);
    Eigen::MatrixXcd X = (dx * (L + L.transpose())).cast<cplx>();
    Eigen::MatrixXcd P = cplx(0, dp) * (L.transpose() - L).cast<cplx>();
    EXPECT_NEAR(v.norm(), 1.0, 1e-14);
    EXPECT_NEAR((v.adjoint() * X * X * v)(0).real(), dx * dx * std::exp(-2 * r), 1e-12) << r;
    EXPECT_NEAR((v.adjoint() * P * P * v)(0).real(), dp * dp * std::exp(2 * r), 1e-12) << r;
    EXPECT_NEAR((v.adjoint() * L.cast<cplx>() * L.cast<cplx>() * v)(0).real(), -std::sinh(r) * std::cosh(r), 1e-12);
  }
}

TEST(Fock, SqueezedVacuumTruncation) {
  EXPECT_THROW(smsv_amplitudes(8, 2.0), TruncationError);
  EXPECT_THROW(tms_vacuum(FockSpace(10, 10, 1, 0.5), 2.0), TruncationError);
  FockSpace sp(4, 4, 1, 0.5);
  EXPECT_THROW(assemble_monomial(sp, monomial(3, 1, 1, 0)), TruncationError);
}

TEST(Fock, BellStateEntropy) {
  FockSpace sp(3, 3, 1, 0.5);
  FockState s{Eigen::VectorXcd::Zero(sp.size()), sp};
  s.amplitudes(sp.index(0, 0)) = 1 / std::sqrt(2.0);
  s.amplitudes(sp.index(1, 1)) = 1 / std::sqrt(2.0);
  EXPECT_NEAR(partial_trace_entropy(s).value, std::log(2.0), 1e-14);
  EXPECT_TRUE(partial_trace_entropy(basis_state(sp, 2, 1)).is_zero());
}

TEST(Fock, TwoModeSqueezedVacuum) {
  FockSpace sp(160, 160, 1, 0.5);
  for (int k = 0; k <= 15; ++k) {
    double s = 0.1 * k;
    auto st = tms_vacuum(sp, s);
    EXPECT_NEAR(st.norm(), 1.0, 1e-12);
    EXPECT_NEAR(partial_trace_entropy(st).value, tms_entropy(s), 1e-8) << s;
  }
}

TEST(Fock, EntropySymmetricInSubsystems) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  FockSpace sp(5, 7, 1, 0.5);
  for (int trial = 0; trial < 20; ++trial) {
    FockState s{Eigen::VectorXcd(sp.size()), sp};
    for (int i = 0; i < sp.size(); ++i) s.amplitudes(i) = cplx(g(rng), g(rng));
    s.amplitudes.normalize();
    EXPECT_NEAR(partial_trace_entropy(s, Subsystem::A).value, partial_trace_entropy(s, Subsystem::B).value, 1e-10);
  }
}

TEST(Fock, EvolveAtZeroTimeIsIdentity) {
  FockSpace sp(16, 16, 0.2, 2.5);
  CouplingTable t;
  t.terms = {monomial(1, 1, 0, 0, 0.3), monomial(0, 0, 1, 1, -0.01)};
  auto H = assemble_table(sp, t);
  auto psi0 = smsv_state(sp, 0.1);
  psi0.amplitudes /= psi0.amplitudes.norm();
  auto psi = evolve_exact(sp, psi0, H, 1.0, 1.0, 0.0);
  EXPECT_LE((psi.amplitudes - psi0.amplitudes).norm(), 1e-13);
}

TEST(Fock, FreeEvolutionIsLocalPhase) {
  FockSpace sp(6, 6, 1, 0.5);
  FockOperator zero{Eigen::MatrixXcd::Zero(sp.size(), sp.size()), sp};
  FockState psi0{Eigen::VectorXcd::Zero(sp.size()), sp};
  psi0.amplitudes(sp.index(0, 0)) = 0.6;
  psi0.amplitudes(sp.index(2, 1)) = 0.8;
  const double w = 3.0, t = 0.37;
  auto psi = evolve_exact(sp, psi0, zero, w, 1.0, t);
  EXPECT_LE(std::abs(psi.amp(2, 1) - 0.8 * std::exp(cplx(0, -3 * w * t))), 1e-13);
  EXPECT_NEAR(partial_trace_entropy(psi).value, partial_trace_entropy(psi0).value, 1e-12);
}

TEST(Fock, BeamSplitterKeepsVacuumProduct) {
  // x_A x_B and p_A p_B with equal rates cancel the a b + a^+ b^+ part
  const double dx = 0.3, dp = 1 / (2 * dx), g = 0.02;
  FockSpace sp(12, 12, dx, dp);
  CouplingTable t;
  t.terms = {monomial(1, 1, 0, 0, g / (dx * dx)), monomial(0, 0, 1, 1, g / (dp * dp))};
  auto H = assemble_table(sp, t);
  auto vac = basis_state(sp, 0, 0);
  ExactEvolver ev(H, 1.0, 1.0, vac);
  for (double tt : {0.5, 1.7, 6.0}) EXPECT_LT(partial_trace_entropy(ev.at(tt)).value, 1e-12);
}

TEST(Fock, ReachableSubspaceKeepsParity) {
  FockSpace sp(12, 12, 0.3, 1 / 0.6);
  CouplingTable t;
  t.terms = {monomial(1, 1, 0, 0, 0.1), monomial(0, 0, 1, 1, -0.002)};
  ExactEvolver ev(assemble_table(sp, t), 1.0, 1.0, smsv_state(sp, 0.05));
  EXPECT_EQ(ev.reachable_dimension(), 72);
}

TEST(Fock, RejectsNonHermitianHamiltonian) {
  FockSpace sp(3, 3, 1, 0.5);
  FockOperator h{Eigen::MatrixXcd::Zero(sp.size(), sp.size()), sp};
  h.matrix(0, 1) = 1.0;
  EXPECT_THROW(evolve_exact(sp, basis_state(sp, 0, 0), h, 1.0, 1.0, 1.0), ContractError);
}
