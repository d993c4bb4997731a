#pragma once

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gravent/entropy.hpp"
#include "gravent/errors.hpp"
#include "gravent/fock.hpp"
#include "gravent/model.hpp"
#include "gravent/pn_potential.hpp"

namespace gravent {

using Cell = std::pair<int, int>;

struct PerturbedState {
  std::map<Cell, double> coeffs;  // C_00 = 1 implicit

  double norm() const {
    double s = 1.0;
    for (auto& [k, v] : coeffs) s += v * v;
    return s;
  }
  double excited_weight() const {
    double s = 0;
    for (auto& [k, v] : coeffs) s += v * v;
    return s;
  }
  double at(int n, int N) const {
    auto it = coeffs.find({n, N});
    return it == coeffs.end() ? 0.0 : it->second;
  }
  PerturbedState transposed() const {
    PerturbedState t;
    for (auto& [k, v] : coeffs) t.coeffs[{k.second, k.first}] = v;
    return t;
  }
  void add(int n, int N, double v) { coeffs[{n, N}] += v; }
};

// Quantities the tabulated closed forms depend on.
struct TableContext {
  double G, c, hbar, m, d, w, dx;
  static TableContext of(const PhysicalParams& p) {
    return {p.G, p.c, p.hbar, p.m, p.d, p.omega_m, std::sqrt(p.hbar / (2 * p.m * p.omega_m))};
  }
};

using TableFn = std::function<double(const TableContext&)>;

struct TabulatedCell {
  int n, N;
  TableFn printed;   // as tabulated
  TableFn resolved;  // what the matrix elements give for the basis coupling
  std::string annotation;
};

struct TabulatedRow {
  int xA, xB, pA, pB;
  PnOrder order;
  TableFn printed_coeff;  // coupling column as tabulated
  TableFn basis_coeff;    // coupling the entries were computed for
  std::vector<TabulatedCell> cells;
  std::string annotation;
};

inline const std::vector<TabulatedRow>& tabulated_coefficients() {
  using C = TableContext;
  const double s2 = std::sqrt(2.0), s6 = std::sqrt(6.0);
  auto c2 = [](const C& k) { return k.c * k.c; };
  static const std::vector<TabulatedRow> rows = [&] {
    std::vector<TabulatedRow> r;
    auto same = [](TableFn f) { return std::pair<TableFn, TableFn>{f, f}; };
    auto row = [&](int xa, int xb, int pa, int pb, PnOrder o, std::pair<TableFn, TableFn> coeff,
                   std::vector<TabulatedCell> cells, std::string note = {}) {
      r.push_back({xa, xb, pa, pb, o, coeff.first, coeff.second, std::move(cells), std::move(note)});
    };
    auto cell = [](int n, int N, TableFn f, std::string note = {}) {
      return TabulatedCell{n, N, f, f, std::move(note)};
    };
    // 0PN
    row(1, 1, 0, 0, PnOrder::PN0, same([](const C& k) { return 2 * k.G * k.m * k.m / std::pow(k.d, 3); }),
        {cell(1, 1, [](const C& k) { return -k.G * k.m / (2 * std::pow(k.d, 3) * k.w * k.w); })});
    row(2, 1, 0, 0, PnOrder::PN0, same([](const C& k) { return 3 * k.G * k.m * k.m / std::pow(k.d, 4); }),
        {cell(2, 1, [=](const C& k) { return -k.G * k.m * k.dx / (s2 * std::pow(k.d, 4) * k.w * k.w); })});
    row(1, 2, 0, 0, PnOrder::PN0, same([](const C& k) { return -3 * k.G * k.m * k.m / std::pow(k.d, 4); }),
        {cell(1, 2, [=](const C& k) { return k.G * k.m * k.dx / (s2 * std::pow(k.d, 4) * k.w * k.w); })});
    row(3, 1, 0, 0, PnOrder::PN0, same([](const C& k) { return 4 * k.G * k.m * k.m / std::pow(k.d, 5); }),
        {cell(1, 1, [](const C& k) { return -3 * k.G * k.hbar / (2 * std::pow(k.d, 5) * std::pow(k.w, 3)); }),
         cell(3, 1, [=](const C& k) { return -s6 * k.G * k.hbar / (4 * std::pow(k.d, 5) * std::pow(k.w, 3)); })});
    row(2, 2, 0, 0, PnOrder::PN0, same([](const C& k) { return -6 * k.G * k.m * k.m / std::pow(k.d, 5); }),
        {cell(2, 2, [](const C& k) { return 3 * k.G * k.hbar / (4 * std::pow(k.d, 5) * std::pow(k.w, 3)); })});
    row(1, 3, 0, 0, PnOrder::PN0, same([](const C& k) { return 4 * k.G * k.m * k.m / std::pow(k.d, 5); }),
        {cell(1, 1, [](const C& k) { return -3 * k.G * k.hbar / (2 * std::pow(k.d, 5) * std::pow(k.w, 3)); }),
         cell(1, 3, [=](const C& k) { return -s6 * k.G * k.hbar / (4 * std::pow(k.d, 5) * std::pow(k.w, 3)); })});
    // 1PN, p_A p_B block
    row(0, 0, 1, 1, PnOrder::PN1, same([=](const C& k) { return 4 * k.G / (c2(k) * k.d); }),
        {cell(1, 1, [=](const C& k) { return k.G * k.m / (c2(k) * k.d); })});
    row(1, 0, 1, 1, PnOrder::PN1, same([=](const C& k) { return 4 * k.G / (c2(k) * k.d * k.d); }),
        {cell(2, 1, [=](const C& k) { return 2 * s2 * k.G * k.m * k.dx / (3 * c2(k) * k.d * k.d); })});
    row(0, 1, 1, 1, PnOrder::PN1, same([=](const C& k) { return -4 * k.G / (c2(k) * k.d * k.d); }),
        {cell(1, 2, [=](const C& k) { return -2 * s2 * k.G * k.m * k.dx / (3 * c2(k) * k.d * k.d); })});
    row(2, 0, 1, 1, PnOrder::PN1, same([=](const C& k) { return 4 * k.G / (c2(k) * std::pow(k.d, 3)); }),
        {cell(1, 1, [=](const C& k) { return k.G * k.hbar / (2 * c2(k) * std::pow(k.d, 3) * k.w); }),
         cell(3, 1, [=](const C& k) { return s6 * k.G * k.hbar / (4 * c2(k) * std::pow(k.d, 3) * k.w); })});
    row(1, 1, 1, 1, PnOrder::PN1, same([=](const C& k) { return -8 * k.G / (c2(k) * std::pow(k.d, 3)); }),
        {cell(2, 2, [=](const C& k) { return -k.G * k.hbar / (c2(k) * std::pow(k.d, 3) * k.w); })});
    row(0, 2, 1, 1, PnOrder::PN1, same([=](const C& k) { return 4 * k.G / (c2(k) * std::pow(k.d, 3)); }),
        {cell(1, 1, [=](const C& k) { return k.G * k.hbar / (2 * c2(k) * std::pow(k.d, 3) * k.w); }),
         cell(1, 3, [=](const C& k) { return s6 * k.G * k.hbar / (4 * c2(k) * std::pow(k.d, 3) * k.w); })});
    // 1PN, p_A^2 block
    row(0, 1, 2, 0, PnOrder::PN1, same([=](const C& k) { return 1.5 * k.G / (c2(k) * k.d * k.d); }),
        {cell(2, 1, [=](const C& k) { return s2 * k.G * k.m * k.dx / (4 * c2(k) * k.d * k.d); })});
    row(0, 2, 2, 0, PnOrder::PN1, same([=](const C& k) { return -1.5 * k.G / (c2(k) * std::pow(k.d, 3)); }),
        {cell(2, 2, [=](const C& k) { return -3 * k.G * k.hbar / (16 * c2(k) * std::pow(k.d, 3) * k.w); })});
    row(1, 1, 2, 0, PnOrder::PN1, same([=](const C& k) { return 3 * k.G / (c2(k) * std::pow(k.d, 3)); }),
        {cell(1, 1, [=](const C& k) { return -3 * k.G * k.hbar / (8 * c2(k) * std::pow(k.d, 3) * k.w); }),
         TabulatedCell{3, 1,
                    [=](const C& k) { return 3 * s6 * k.G * k.hbar / (16 * c2(k) * k.d * k.d * k.w); },
                    [=](const C& k) { return 3 * s6 * k.G * k.hbar / (16 * c2(k) * std::pow(k.d, 3) * k.w); },
                    "tabulated with d^2, which is not dimensionless; matrix element gives d^3"}});
    // 1PN, p_B^2 block
    row(1, 0, 0, 2, PnOrder::PN1,
        same([=](const C& k) { return 1.5 * k.G / (c2(k) * k.d * k.d); }),
        {cell(1, 2, [=](const C& k) { return s2 * k.G * k.m * k.dx / (4 * c2(k) * k.d * k.d); })},
        "tabulated coupling +3G/(2c^2d^2); expanding with A at -d/2, B at +d/2 gives -3G/(2c^2d^2), "
        "so C12 enters with the opposite sign (antisymmetric with C21)");
    row(2, 0, 0, 2, PnOrder::PN1,
        {[=](const C& k) { return -1.5 * k.G / (c2(k) * k.d * k.d); },
         [=](const C& k) { return -1.5 * k.G / (c2(k) * std::pow(k.d, 3)); }},
        {cell(2, 2, [=](const C& k) { return -3 * k.G * k.hbar / (16 * c2(k) * std::pow(k.d, 3) * k.w); })},
        "tabulated coupling carries d^2; the entry corresponds to -3G/(2c^2d^3)");
    row(1, 1, 0, 2, PnOrder::PN1, same([=](const C& k) { return 3 * k.G / (c2(k) * std::pow(k.d, 3)); }),
        {cell(1, 1, [=](const C& k) { return -3 * k.G * k.hbar / (8 * c2(k) * std::pow(k.d, 3) * k.w); }),
         TabulatedCell{1, 3,
                    [=](const C& k) { return 3 * s6 * k.G * k.hbar / (16 * c2(k) * k.d * k.d * k.w); },
                    [=](const C& k) { return 3 * s6 * k.G * k.hbar / (16 * c2(k) * std::pow(k.d, 3) * k.w); },
                    "tabulated with d^2, which is not dimensionless; matrix element gives d^3"}});
    // 2PN
    row(0, 0, 2, 2, PnOrder::PN2,
        same([=](const C& k) { return -9 * k.G / (4 * c2(k) * c2(k) * k.m * k.m * k.d); }),
        {cell(2, 2, [=](const C& k) { return 9 * k.G * k.hbar * k.w / (32 * c2(k) * c2(k) * k.d); })});
    return r;
  }();
  return rows;
}

inline const TabulatedRow* find_tabulated_row(const CouplingTerm& t) {
  for (auto& row : tabulated_coefficients())
    if (t.same_monomial(row.xA, row.xB, row.pA, row.pB)) return &row;
  return nullptr;
}

inline void check_perturbative(const PerturbedState& s) {
  for (auto& [k, v] : s.coeffs)
    if (!(std::abs(v) < 0.1))
      throw RegimeError("C" + std::to_string(k.first) + std::to_string(k.second),
                        "first-order coefficient C" + std::to_string(k.first) + std::to_string(k.second) + " = " +
                            std::to_string(v) + " is outside the perturbative regime |C| < 0.1");
}

// Sum over the table's terms of the tabulated closed forms, scaled to the term's coefficient.
inline PerturbedState coefficients_closed_form(const PhysicalParams& p, const CouplingTable& table) {
  validate(p);
  const auto ctx = TableContext::of(p);
  PerturbedState s;
  for (auto& term : table.terms) {
    const TabulatedRow* row = find_tabulated_row(term);
    if (!row) throw ContractError("no tabulated closed form for coupling " + term.label());
    const double scale = term.coeff / row->basis_coeff(ctx);
    for (auto& c : row->cells) s.add(c.n, c.N, scale * c.resolved(ctx));
  }
  check_perturbative(s);
  return s;
}

// <nN| term |00> / (-hbar omega (n+N)) for n, N >= 1.
inline std::map<Cell, double> oracle_cells(const PhysicalParams& p, const CouplingTerm& term, int fock_dim) {
  int need = std::max(term.pow_xA + term.pow_pA, term.pow_xB + term.pow_pB) + 2;
  if (fock_dim < need)
    throw TruncationError("fock_dim " + std::to_string(fock_dim) + " below " + std::to_string(need) +
                          " required by " + term.label());
  auto sc = derive_scales(p);
  FockSpace sp(fock_dim, fock_dim, sc.delta_x, sc.delta_p);
  Eigen::VectorXcd col = assemble_monomial(sp, term).matrix.col(sp.index(0, 0));
  double big = col.cwiseAbs().maxCoeff();
  std::map<Cell, double> out;
  for (int n = 1; n < fock_dim; ++n)
    for (int N = 1; N < fock_dim; ++N) {
      cplx e = col(sp.index(n, N));
      if (std::abs(e) <= 1e-12 * big) continue;
      if (std::abs(e.imag()) > 1e-12 * std::abs(e))
        throw NumericalError("complex first-order matrix element for " + term.label());
      out[{n, N}] = e.real() / (-p.hbar * p.omega_m * (n + N));
    }
  return out;
}

inline PerturbedState coefficients_from_oracle(const PhysicalParams& p, const CouplingTable& table,
                                               int fock_dim = 12) {
  validate(p);
  PerturbedState s;
  for (auto& term : table.terms)
    for (auto& [k, v] : oracle_cells(p, term, fock_dim)) s.add(k.first, k.second, v);
  check_perturbative(s);
  return s;
}

inline EntropyValue schmidt_entropy(const PerturbedState& state) {
  if (state.coeffs.empty()) return EntropyValue::zero();
  int rows = 1, cols = 1;
  bool touches_vacuum = false;
  for (auto& [k, v] : state.coeffs) {
    rows = std::max(rows, k.first + 1);
    cols = std::max(cols, k.second + 1);
    if (k.first == 0 || k.second == 0) touches_vacuum = true;
  }
  const double w = state.excited_weight();
  if (w == 0) return EntropyValue::zero();
  const double norm = 1.0 + w;
  Eigen::VectorXd sig2;
  double s = 0;
  if (!touches_vacuum) {
    // M = [1] (+) B, so sigma_0^2 = 1/N exactly and the rest come from B alone.
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(rows - 1, cols - 1);
    for (auto& [k, v] : state.coeffs) B(k.first - 1, k.second - 1) = v;
    double bscale = B.cwiseAbs().maxCoeff();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(B / bscale);
    sig2 = svd.singularValues().array().square() * (bscale * bscale) / norm;
    s = std::log1p(w) / norm;
  } else {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(rows, cols);
    M(0, 0) = 1.0;
    for (auto& [k, v] : state.coeffs) M(k.first, k.second) = v;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M / std::sqrt(norm));
    sig2 = svd.singularValues().array().square();
  }
  for (int i = 0; i < sig2.size(); ++i)
    if (sig2(i) > 0) s -= sig2(i) * std::log(sig2(i));
  return EntropyValue::from_value(std::max(s, 0.0));
}

// Leading closed-form coefficients: C11 = eps_1pn - eps_0pn and the 2PN C22.
struct LeadingCoefficients {
  double c11, c22;
  double ln_abs_c11, ln_c22;
};

inline LeadingCoefficients leading_coefficients(const PhysicalParams& p) {
  auto sc = derive_scales(p);
  const double q = sc.omega_0 / sc.omega_m;
  const double one_minus_q2 = (1.0 - q) * (1.0 + q);
  LeadingCoefficients lc;
  lc.c11 = sc.eps_1pn * one_minus_q2;
  lc.c22 = sc.eps_2pn;
  lc.ln_abs_c11 = lc.c11 == 0 ? -INFINITY : std::log(sc.eps_1pn) + std::log(std::abs(one_minus_q2));
  lc.ln_c22 = std::log(sc.eps_2pn);
  for (auto [name, v] : {std::pair{"C11(0PN)", sc.eps_0pn}, std::pair{"C11(1PN)", sc.eps_1pn},
                         std::pair{"C22(2PN)", sc.eps_2pn}})
    if (!(v < 0.1)) throw RegimeError(name, std::string("leading coefficient ") + name + " outside |C| < 0.1");
  return lc;
}

inline PerturbedState leading_state(const PhysicalParams& p) {
  auto lc = leading_coefficients(p);
  PerturbedState s;
  s.coeffs[{1, 1}] = lc.c11;
  s.coeffs[{2, 2}] = lc.c22;
  return s;
}

// -e11^2 ln e11^2 - e22^2 ln e22^2 with the normalization set to 1, assembled from ln e.
inline EntropyValue entropy_closed_form(const PhysicalParams& p) {
  auto lc = leading_coefficients(p);
  double ln_s = -INFINITY;
  if (lc.c11 != 0) ln_s = log_add_exp(ln_s, ln_xlogx_term(lc.ln_abs_c11));
  if (lc.c22 != 0) ln_s = log_add_exp(ln_s, ln_xlogx_term(lc.ln_c22));
  return EntropyValue::from_ln(ln_s);
}

// Plateau value -(Gm/c^2d)^2 ln (Gm/c^2d)^2.
inline EntropyValue plateau_entropy(const PhysicalParams& p) {
  validate(p);
  double eps1 = p.G * p.m / (p.c * p.c * p.d);
  if (!(eps1 < 0.1)) throw RegimeError("eps_1pn", "eps_1pn outside the perturbative regime");
  return EntropyValue::from_ln(ln_xlogx_term(std::log(eps1)));
}

struct GroundDip {
  double omega_dip;
  double delta_x_dip;
  double delta_p_dip;
};

// Root of ln eps_0pn(omega) - ln eps_1pn, solved in ln omega.
inline GroundDip find_dip_ground(const PhysicalParams& tmpl) {
  validate(tmpl);
  const double ln_a = std::log(tmpl.G * tmpl.m / (2.0 * std::pow(tmpl.d, 3)));
  const double ln_b = std::log(tmpl.G * tmpl.m / (tmpl.c * tmpl.c * tmpl.d));
  auto h = [&](double y) { return ln_a - 2.0 * y - ln_b; };
  std::uintmax_t iters = 200;
  auto [lo, hi] = boost::math::tools::toms748_solve(h, -700.0, 700.0, boost::math::tools::eps_tolerance<double>(53),
                                                    iters);
  double y = (h(lo) == 0) ? lo : (h(hi) == 0 ? hi : 0.5 * (lo + hi));
  GroundDip dip;
  dip.omega_dip = std::exp(y);
  dip.delta_x_dip = std::sqrt(tmpl.hbar / (2.0 * tmpl.m * dip.omega_dip));
  dip.delta_p_dip = tmpl.hbar / (2.0 * dip.delta_x_dip);
  return dip;
}

struct TabulatedComparison {
  std::string coupling;
  PnOrder order;
  int n, N;
  double oracle;
  double closed_form;
  double rel_err;
  double printed_entry;
  bool printed_consistent;  // printed entry agrees with the oracle for the printed coupling
  std::string annotation;
};

// One row per tabulated C_nN entry (25 at full coverage).
inline std::vector<TabulatedComparison> compare_tabulated(const PhysicalParams& p, int fock_dim = 12) {
  validate(p);
  const auto ctx = TableContext::of(p);
  auto table = expand_cross_coupling(p, 4, PnOrder::PN2);
  std::vector<TabulatedComparison> out;
  for (auto& row : tabulated_coefficients()) {
    const CouplingTerm* term = table.find(row.xA, row.xB, row.pA, row.pB);
    if (!term) throw ContractError("expansion lacks a tabulated coupling");
    auto oracle = oracle_cells(p, *term, fock_dim);
    const double scale = term->coeff / row.basis_coeff(ctx);
    for (auto& c : row.cells) {
      TabulatedComparison cmp;
      cmp.coupling = term->label();
      cmp.order = row.order;
      cmp.n = c.n;
      cmp.N = c.N;
      auto it = oracle.find({c.n, c.N});
      cmp.oracle = it == oracle.end() ? 0.0 : it->second;
      cmp.closed_form = scale * c.resolved(ctx);
      cmp.rel_err = std::abs(cmp.closed_form - cmp.oracle) / std::max(std::abs(cmp.oracle), 1e-300);
      cmp.printed_entry = c.printed(ctx);
      double oracle_for_printed = cmp.oracle * row.printed_coeff(ctx) / term->coeff;
      cmp.printed_consistent =
          std::abs(cmp.printed_entry - oracle_for_printed) <= 1e-10 * std::abs(oracle_for_printed);
      cmp.annotation = c.annotation.empty() ? row.annotation : c.annotation;
      out.push_back(cmp);
    }
  }
  return out;
}

}  // namespace gravent
