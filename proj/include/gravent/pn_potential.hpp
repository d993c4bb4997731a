#pragma once

#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "gravent/errors.hpp"
#include "gravent/model.hpp"
#include "json.hpp"

namespace gravent {

enum class PnOrder { PN0 = 0, PN1 = 1, PN2 = 2 };

NLOHMANN_JSON_SERIALIZE_ENUM(PnOrder, {{PnOrder::PN0, "PN0"}, {PnOrder::PN1, "PN1"}, {PnOrder::PN2, "PN2"}})

inline const char* to_string(PnOrder o) {
  switch (o) {
    case PnOrder::PN0: return "PN0";
    case PnOrder::PN1: return "PN1";
    case PnOrder::PN2: return "PN2";
  }
  return "?";
}

// One monomial x_A^a x_B^b p_A^c p_B^d, read in Weyl order.
struct CouplingTerm {
  int pow_xA = 0;
  int pow_xB = 0;
  int pow_pA = 0;
  int pow_pB = 0;
  double coeff = 0;
  PnOrder pn_order = PnOrder::PN0;

  int operator_order() const { return pow_xA + pow_xB + pow_pA + pow_pB; }
  bool same_monomial(int xa, int xb, int pa, int pb) const {
    return pow_xA == xa && pow_xB == xb && pow_pA == pa && pow_pB == pb;
  }
  std::string label() const {
    std::string s;
    auto put = [&s](const char* f, int k) {
      if (k == 0) return;
      if (!s.empty()) s += ' ';
      s += f;
      if (k > 1) s += '^' + std::to_string(k);
    };
    put("pA", pow_pA);
    put("pB", pow_pB);
    put("xA", pow_xA);
    put("xB", pow_xB);
    return s;
  }
  friend bool operator==(const CouplingTerm&, const CouplingTerm&) = default;
};

struct CouplingTable {
  std::vector<CouplingTerm> terms;
  PhysicalParams params;

  const CouplingTerm* find(int xa, int xb, int pa, int pb) const {
    for (auto& t : terms)
      if (t.same_monomial(xa, xb, pa, pb)) return &t;
    return nullptr;
  }
};

inline void to_json(nlohmann::json& j, const CouplingTerm& t) {
  j = nlohmann::json{{"pow_xA", t.pow_xA}, {"pow_xB", t.pow_xB}, {"pow_pA", t.pow_pA},
                     {"pow_pB", t.pow_pB}, {"coeff", t.coeff},   {"pn_order", t.pn_order}};
}
inline void from_json(const nlohmann::json& j, CouplingTerm& t) {
  j.at("pow_xA").get_to(t.pow_xA);
  j.at("pow_xB").get_to(t.pow_xB);
  j.at("pow_pA").get_to(t.pow_pA);
  j.at("pow_pB").get_to(t.pow_pB);
  j.at("coeff").get_to(t.coeff);
  j.at("pn_order").get_to(t.pn_order);
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PhysicalParams, G, c, hbar, m, d, omega_m, r)

inline void to_json(nlohmann::json& j, const CouplingTable& t) {
  j = nlohmann::json{{"schema", "gravent.coupling_table/1"}, {"params", t.params}, {"terms", t.terms}};
}
inline void from_json(const nlohmann::json& j, CouplingTable& t) {
  if (j.value("schema", "") != "gravent.coupling_table/1")
    throw DomainError("unknown coupling table schema");
  j.at("params").get_to(t.params);
  j.at("terms").get_to(t.terms);
}

namespace detail {

struct MomentumMonomial {
  int pA, pB;
  double prefactor;  // multiplies 1/|r_A - r_B|
};

inline double binomial(int n, int k) {
  double b = 1;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

}  // namespace detail

// Cross terms of the PN potential expanded around x_A = x_B = 0, with particle A at -d/2 and
// B at +d/2, so 1/|r_A - r_B| = (1/d) sum_k ((x_A - x_B)/d)^k.
inline CouplingTable expand_cross_coupling(const PhysicalParams& p, int max_operator_order = 4,
                                           PnOrder max_pn = PnOrder::PN2) {
  validate(p);
  if (max_operator_order < 2 || max_operator_order > 4)
    throw DomainError("max_operator_order must be 2, 3 or 4");
  const double G = p.G, c2 = p.c * p.c, m = p.m;
  const std::array<std::pair<PnOrder, std::vector<detail::MomentumMonomial>>, 3> orders{{
      {PnOrder::PN0, {{0, 0, -G * m * m}}},
      {PnOrder::PN1, {{1, 1, 4.0 * G / c2}, {2, 0, -1.5 * G / c2}, {0, 2, -1.5 * G / c2}}},
      {PnOrder::PN2,
       {{4, 0, 5.0 * G / (8.0 * c2 * c2 * m * m)},
        {2, 2, -18.0 * G / (8.0 * c2 * c2 * m * m)},
        {0, 4, 5.0 * G / (8.0 * c2 * c2 * m * m)}}},
  }};

  CouplingTable table;
  table.params = p;
  for (auto& [order, poly] : orders) {
    if (static_cast<int>(order) > static_cast<int>(max_pn)) break;
    for (auto& mono : poly) {
      for (int k = 0; mono.pA + mono.pB + k <= max_operator_order; ++k) {
        for (int j = k; j >= 0; --j) {
          int xa = j, xb = k - j;
          if (mono.pA + xa == 0 || mono.pB + xb == 0) continue;
          double sign = (xb % 2 == 0) ? 1.0 : -1.0;
          double coeff = mono.prefactor * detail::binomial(k, j) * sign / std::pow(p.d, k + 1);
          table.terms.push_back({xa, xb, mono.pA, mono.pB, coeff, order});
        }
      }
    }
  }
  return table;
}

struct QuadraticRates {
  double g_minus;
  double g_plus;
};

// H_AB = hbar g_-(ab + a+b+) + hbar g_+(ab+ + a+b) for a table holding only x_A x_B and p_A p_B.
inline QuadraticRates quadratic_mode_form(const CouplingTable& table) {
  double cxx = 0, cpp = 0;
  for (auto& t : table.terms) {
    if (t.same_monomial(1, 1, 0, 0))
      cxx += t.coeff;
    else if (t.same_monomial(0, 0, 1, 1))
      cpp += t.coeff;
    else
      throw ContractError("quadratic_mode_form: table holds non-quadratic term " + t.label());
  }
  const auto& p = table.params;
  validate(p);
  double dx2 = p.hbar / (2.0 * p.m * p.omega_m);
  double dp2 = p.hbar * p.m * p.omega_m / 2.0;
  double gx = cxx * dx2 / p.hbar;
  double gp = cpp * dp2 / p.hbar;
  return {gx - gp, gx + gp};
}

// Full scalar potential with classical momenta along the axis.
inline double pn_potential_scalar(const PhysicalParams& p, double pA, double pB, double r_sep) {
  if (!(r_sep > 0)) throw DomainError("separation must be positive");
  const double G = p.G, m = p.m, c2 = p.c * p.c;
  return -G * m * m / r_sep - G * (3 * pA * pA - 8 * pA * pB + 3 * pB * pB) / (2 * c2 * r_sep) +
         G * (5 * std::pow(pA, 4) - 18 * pA * pA * pB * pB + 5 * std::pow(pB, 4)) /
             (8 * c2 * c2 * m * m * r_sep);
}

// Centre-of-momentum form, p_A = -p_B = p.
inline double com_frame_check(const PhysicalParams& p, double mom, double r_sep) {
  if (!(r_sep > 0)) throw DomainError("separation must be positive");
  const double G = p.G, m = p.m, c2 = p.c * p.c;
  return -G * m * m / r_sep - 7 * G * mom * mom / (c2 * r_sep) -
         G * std::pow(mom, 4) / (c2 * c2 * m * m * r_sep);
}

}  // namespace gravent
