#pragma once

#include "stochint/interval.hpp"
#include "stochint/weight.hpp"

namespace stochint {

// Lower-triangle product kernel K(x1, x2) = psi1(x1) psi2(x2) for x1 < x2,
// zero elsewhere (including the diagonal).
inline double kernel_k(const WeightFunction& w1, const WeightFunction& w2,
                       double x1, double x2, const Interval& iv) {
  if (!(x1 < x2)) return 0.0;
  return eval_weight(w1, x1, iv) * eval_weight(w2, x2, iv);
}

// Symmetrized-diagonal variant: K plus (1/2) psi1(x1) psi2(x1) exactly on the
// diagonal. The diagonal test is exact floating-point equality; the diagonal
// value carries the mean-square theory for equal noise components.
inline double kernel_kstar(const WeightFunction& w1, const WeightFunction& w2,
                           double x1, double x2, const Interval& iv) {
  if (x1 == x2) {
    return 0.5 * eval_weight(w1, x1, iv) * eval_weight(w2, x1, iv);
  }
  return kernel_k(w1, w2, x1, x2, iv);
}

}  // namespace stochint
