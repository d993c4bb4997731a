#pragma once

#include <cmath>

#include "gravent/errors.hpp"

namespace gravent {

struct Minimum {
  double x;
  double fx;
  int evaluations;
};

// Golden-section search for a unimodal f on [a, b].
template <class F>
Minimum golden_section(F&& f, double a, double b, double tol = 1e-9, int max_iter = 500) {
  if (!(a < b)) throw DomainError("golden_section: empty bracket");
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  int evals = 2;
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  double x = 0.5 * (a + b);
  return {x, f(x), evals + 1};
}

}  // namespace gravent
