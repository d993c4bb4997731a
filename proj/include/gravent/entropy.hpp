#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "gravent/errors.hpp"

namespace gravent {

enum class Normalization { raw, per_plateau_S_p, per_reference_max };

inline const char* to_string(Normalization n) {
  switch (n) {
    case Normalization::raw: return "raw";
    case Normalization::per_plateau_S_p: return "per_plateau_S_p";
    case Normalization::per_reference_max: return "per_reference_max";
  }
  return "?";
}

// value in nats; log10_value stays meaningful when value under/overflows.
struct EntropyValue {
  double value = 0;
  double log10_value = -std::numeric_limits<double>::infinity();
  Normalization normalization_tag = Normalization::raw;

  static EntropyValue zero(Normalization tag = Normalization::raw) {
    return {0.0, -std::numeric_limits<double>::infinity(), tag};
  }
  static EntropyValue from_value(double v, Normalization tag = Normalization::raw) {
    if (v < 0 || std::isnan(v)) throw NumericalError("negative entropy " + std::to_string(v));
    if (v == 0) return zero(tag);
    return {v, std::log10(v), tag};
  }
  static EntropyValue from_ln(double ln_v, Normalization tag = Normalization::raw) {
    if (ln_v == -std::numeric_limits<double>::infinity()) return zero(tag);
    return {std::exp(ln_v), ln_v / std::log(10.0), tag};
  }
  bool is_zero() const { return log10_value == -std::numeric_limits<double>::infinity(); }
  double ln_value() const { return log10_value * std::log(10.0); }

  // this / ref, assembled in log space
  EntropyValue normalized_by(const EntropyValue& ref, Normalization tag) const {
    if (ref.is_zero()) throw DomainError("normalizing by a zero entropy");
    if (is_zero()) return zero(tag);
    return from_ln(ln_value() - ref.ln_value(), tag);
  }
};

// ln(x^2 * (-ln x^2)) for 0 < x < 1: the log of one -x^2 ln x^2 term.
inline double ln_xlogx_term(double ln_x) {
  return 2.0 * ln_x + std::log(-2.0 * ln_x);
}

inline double log_add_exp(double a, double b) {
  const double ninf = -std::numeric_limits<double>::infinity();
  if (a == ninf) return b;
  if (b == ninf) return a;
  double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace gravent
