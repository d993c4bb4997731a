#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>
#include <string>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "gravent/entropy.hpp"
#include "gravent/errors.hpp"
#include "gravent/model.hpp"
#include "gravent/pn_potential.hpp"

namespace gravent {

using cplx = std::complex<double>;

struct FockSpace {
  int dim_a = 12;
  int dim_b = 12;
  double delta_x = 1;
  double delta_p = 1;

  FockSpace() = default;
  FockSpace(int da, int db, double dx, double dp) : dim_a(da), dim_b(db), delta_x(dx), delta_p(dp) {
    if (da < 2 || db < 2) throw DomainError("Fock dimensions must be >= 2");
  }
  static FockSpace for_scales(const DerivedScales& s, int dim) {
    return FockSpace(dim, dim, s.delta_x, s.delta_p);
  }
  int size() const { return dim_a * dim_b; }
  int index(int n, int N) const { return n * dim_b + N; }
};

struct FockOperator {
  Eigen::MatrixXcd matrix;
  FockSpace space;
};

struct FockState {
  Eigen::VectorXcd amplitudes;
  FockSpace space;

  double norm() const { return amplitudes.norm(); }
  cplx amp(int n, int N) const { return amplitudes(space.index(n, N)); }
};

// L|n> = sqrt(n)|n-1>
inline Eigen::MatrixXd ladder(int dim) {
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) L(n - 1, n) = std::sqrt(double(n));
  return L;
}

inline Eigen::MatrixXd number_op(int dim) {
  return Eigen::VectorXd::LinSpaced(dim, 0, dim - 1).asDiagonal();
}

// Weyl-ordered x^nx p^np of one mode, projected onto the first dim levels. The products are
// formed in a space large enough that the projection is exact.
inline Eigen::MatrixXcd weyl_single_mode(int dim, int nx, int np, double dx, double dp) {
  const int ext = dim + nx + np;
  Eigen::MatrixXd L = ladder(ext);
  Eigen::MatrixXcd X = (dx * (L + L.transpose())).cast<cplx>();
  Eigen::MatrixXcd P = cplx(0, dp) * (L.transpose() - L).cast<cplx>();
  std::string word(nx, 'x');
  word += std::string(np, 'p');
  std::sort(word.begin(), word.end());
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(ext, ext);
  int count = 0;
  do {
    Eigen::MatrixXcd prod = Eigen::MatrixXcd::Identity(ext, ext);
    for (char ch : word) prod = prod * (ch == 'x' ? X : P);
    acc += prod;
    ++count;
  } while (std::next_permutation(word.begin(), word.end()));
  return acc.topLeftCorner(dim, dim) / double(count);
}

inline FockOperator assemble_monomial(const FockSpace& space, const CouplingTerm& term) {
  if (term.pow_xA + term.pow_pA > space.dim_a - 1 || term.pow_xB + term.pow_pB > space.dim_b - 1)
    throw TruncationError("monomial " + term.label() + " exceeds Fock dimensions " +
                          std::to_string(space.dim_a) + "x" + std::to_string(space.dim_b));
  Eigen::MatrixXcd A = weyl_single_mode(space.dim_a, term.pow_xA, term.pow_pA, space.delta_x, space.delta_p);
  Eigen::MatrixXcd B = weyl_single_mode(space.dim_b, term.pow_xB, term.pow_pB, space.delta_x, space.delta_p);
  FockOperator op{Eigen::kroneckerProduct(A, B).eval(), space};
  op.matrix *= term.coeff;
  return op;
}

inline FockOperator assemble_table(const FockSpace& space, const CouplingTable& table) {
  FockOperator h{Eigen::MatrixXcd::Zero(space.size(), space.size()), space};
  for (auto& t : table.terms) h.matrix += assemble_monomial(space, t).matrix;
  return h;
}

inline double hermiticity_defect(const Eigen::MatrixXcd& M) {
  return (M - M.adjoint()).cwiseAbs().maxCoeff();
}

// Amplitudes of a single-mode squeezed vacuum with <x^2> = dx^2 e^{-2r}.
inline Eigen::VectorXd smsv_amplitudes(int dim, double r) {
  const double t = -std::tanh(r);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  double a = 1.0 / std::sqrt(std::cosh(r));
  double tail = 0;
  for (int n = 0;; ++n) {
    if (n > 0) a *= t * std::sqrt(double(2 * n) * (2 * n - 1)) / (2.0 * n);
    if (2 * n < dim)
      v(2 * n) = a;
    else {
      tail += a * a;
      if (a * a < 1e-30 * (tail + 1e-300) || a == 0) break;
    }
    if (n > 100000) break;
  }
  if (tail >= 1e-12)
    throw TruncationError("squeezed vacuum r=" + std::to_string(r) + " leaves tail mass " +
                          std::to_string(tail) + " beyond dim " + std::to_string(dim) +
                          "; increase the truncation");
  return v / v.norm();
}

inline FockState smsv_state(const FockSpace& space, double r) {
  Eigen::VectorXcd a = smsv_amplitudes(space.dim_a, r).cast<cplx>();
  Eigen::VectorXcd b = smsv_amplitudes(space.dim_b, r).cast<cplx>();
  return {Eigen::kroneckerProduct(a, b).eval(), space};
}

inline FockState basis_state(const FockSpace& space, int n, int N) {
  FockState s{Eigen::VectorXcd::Zero(space.size()), space};
  s.amplitudes(space.index(n, N)) = 1.0;
  return s;
}

// exp(s (a+b+ - ab)) |00>, computed inside the invariant |n,n> ladder.
inline FockState tms_vacuum(const FockSpace& space, double s) {
  const int nmax = std::min(space.dim_a, space.dim_b);
  const double th = std::tanh(std::abs(s));
  if (s != 0 && 2.0 * nmax * std::log(th) > std::log(1e-12))
    throw TruncationError("two-mode squeezed vacuum s=" + std::to_string(s) + " needs more than " +
                          std::to_string(nmax) + " levels");
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nmax, nmax);
  for (int n = 0; n + 1 < nmax; ++n) {
    K(n + 1, n) = n + 1;
    K(n, n + 1) = -(n + 1);
  }
  Eigen::MatrixXd U = (s * K).exp();
  FockState st{Eigen::VectorXcd::Zero(space.size()), space};
  for (int n = 0; n < nmax; ++n) st.amplitudes(space.index(n, n)) = U(n, 0);
  return st;
}

enum class Subsystem { A, B };

inline Eigen::MatrixXcd reduced_density(const FockState& state, Subsystem keep) {
  const auto& sp = state.space;
  Eigen::MatrixXcd psi(sp.dim_a, sp.dim_b);
  for (int n = 0; n < sp.dim_a; ++n)
    for (int N = 0; N < sp.dim_b; ++N) psi(n, N) = state.amplitudes(sp.index(n, N));
  if (keep == Subsystem::A) return psi * psi.adjoint();
  return psi.transpose() * psi.conjugate();
}

inline EntropyValue entropy_from_spectrum(const Eigen::VectorXd& lam) {
  double s = 0;
  for (int i = 0; i < lam.size(); ++i) {
    double l = lam(i);
    if (l < -1e-12) throw NumericalError("reduced density eigenvalue " + std::to_string(l));
    if (l >= 1e-16) s -= l * std::log(l);
  }
  return EntropyValue::from_value(std::max(s, 0.0));
}

inline EntropyValue partial_trace_entropy(const FockState& state, Subsystem keep = Subsystem::A) {
  if (std::abs(state.amplitudes.squaredNorm() - 1.0) > 1e-10)
    throw ContractError("partial_trace_entropy: state not normalized");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(reduced_density(state, keep), Eigen::EigenvaluesOnly);
  return entropy_from_spectrum(es.eigenvalues());
}

// Exact propagation under hbar*omega_m*(n_A + n_B) + H_AB, restricted to the part of the basis
// reachable from the initial state.
class ExactEvolver {
 public:
  ExactEvolver(const FockOperator& h_ab, double omega_m, double hbar, const FockState& initial)
      : space_(h_ab.space), omega_(omega_m) {
    const auto& M = h_ab.matrix;
    double scale = std::max(M.cwiseAbs().maxCoeff(), 1e-300);
    if (hermiticity_defect(M) > 1e-12 * scale) throw ContractError("evolve_exact: Hamiltonian not Hermitian");
    if (omega_m <= 0 || hbar <= 0) throw DomainError("evolve_exact: omega_m and hbar must be positive");
    const int D = space_.size();
    Eigen::MatrixXcd H = M / (hbar * omega_m);
    for (int n = 0; n < space_.dim_a; ++n)
      for (int N = 0; N < space_.dim_b; ++N) H(space_.index(n, N), space_.index(n, N)) += double(n + N);

    std::vector<char> seen(D, 0);
    std::queue<int> q;
    for (int i = 0; i < D; ++i)
      if (initial.amplitudes(i) != cplx(0)) {
        seen[i] = 1;
        q.push(i);
      }
    while (!q.empty()) {
      int i = q.front();
      q.pop();
      for (int j = 0; j < D; ++j)
        if (!seen[j] && H(j, i) != cplx(0)) {
          seen[j] = 1;
          q.push(j);
        }
    }
    for (int i = 0; i < D; ++i)
      if (seen[i]) support_.push_back(i);
    const int k = int(support_.size());
    Eigen::MatrixXcd Hs(k, k);
    Eigen::VectorXcd psi0(k);
    for (int a = 0; a < k; ++a) {
      psi0(a) = initial.amplitudes(support_[a]);
      for (int b = 0; b < k; ++b) Hs(a, b) = H(support_[a], support_[b]);
    }
    if (Hs.imag().cwiseAbs().maxCoeff() == 0.0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hs.real());
      evals_ = es.eigenvalues();
      vecs_ = es.eigenvectors().cast<cplx>();
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Hs);
      evals_ = es.eigenvalues();
      vecs_ = es.eigenvectors();
    }
    coeffs_ = vecs_.adjoint() * psi0;
  }

  FockState at(double t) const {
    if (t < 0) throw DomainError("evolve_exact: t must be >= 0");
    const double th = omega_ * t;
    Eigen::VectorXcd c(coeffs_.size());
    for (int i = 0; i < c.size(); ++i) c(i) = std::exp(cplx(0, -evals_(i) * th)) * coeffs_(i);
    Eigen::VectorXcd local = vecs_ * c;
    FockState out{Eigen::VectorXcd::Zero(space_.size()), space_};
    for (size_t a = 0; a < support_.size(); ++a) out.amplitudes(support_[a]) = local(a);
    if (std::abs(out.amplitudes.norm() - coeffs_.norm()) > 1e-10)
      throw NumericalError("evolve_exact: norm drift");
    return out;
  }

  int reachable_dimension() const { return int(support_.size()); }

 private:
  FockSpace space_;
  double omega_;
  std::vector<int> support_;
  Eigen::VectorXd evals_;
  Eigen::MatrixXcd vecs_;
  Eigen::VectorXcd coeffs_;
};

inline FockState evolve_exact(const FockSpace& space, const FockState& initial, const FockOperator& hamiltonian,
                              double omega_m, double hbar, double t) {
  if (hamiltonian.space.size() != space.size() || initial.space.size() != space.size())
    throw ContractError("evolve_exact: mismatched Fock spaces");
  return ExactEvolver(hamiltonian, omega_m, hbar, initial).at(t);
}

}  // namespace gravent
