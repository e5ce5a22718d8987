#pragma once

#include "stochint/coefficients.hpp"
#include "stochint/noise.hpp"

namespace stochint {

// Mean-square error functionals of a truncation level.
struct ErrorReport {
  int p1;
  int p2;
  double proj_error_sq;    // int int R^2 = ||K||^2 - sum C^2 (clamped at 0)
  double diag_integral;    // int R(t,t) dt = (1/2) int psi1 psi2 - partial trace
  double ms_exact_offdiag; // exact second moment for distinct nonzero components
  double ms_bound_equal;   // 2*proj_error_sq + diag_integral^2, the equal-pair bound
};

// Pointwise remainder R(x1, x2) = K*(x1, x2) - sum_{j1<=p1, j2<=p2}
// C_{j2 j1} phi_{j1}(x1) phi_{j2}(x2).
double remainder_eval(const CoeffMatrix& mat, double x1, double x2);

// Closed-form diagonal integral (1/2) int psi1 psi2 - sum_{j<=min(p1,p2)} C_jj.
double diag_remainder_integral(const CoeffMatrix& mat);

// Projection error int int R^2 over the square; the Pythagoras form
// ||K||^2 - sum C^2 clamped at zero (a warning is reported via errno-free
// return; values below -1e-10 before clamping throw).
double ms_projection_error(const CoeffMatrix& mat);

ErrorReport ms_error_bound(const CoeffMatrix& mat, const NoisePair& pair);

// Second-moment theory for E[(J*[psi] - truncated)^2] used by the oracle:
// exact for any pair with distinct components (including time components,
// where the partially integrated remainder is square-integrated numerically)
// and for the all-deterministic pair; the factor-2 upper bound for equal
// nonzero components.
struct MomentTheory {
  double value;
  bool exact;
};
MomentTheory remainder_second_moment(const CoeffMatrix& mat, const NoisePair& pair);

}  // namespace stochint
