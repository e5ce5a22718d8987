#include "stochint/remainder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stochint/kernels.hpp"

namespace stochint {
namespace {

Eigen::VectorXd phi_vector(const BasisSystem& b, int p, double x) {
  Eigen::VectorXd out(p + 1);
  for (int j = 0; j <= p; ++j) out[j] = phi(b, j, x);
  return out;
}

// int_{t0}^x psi; the phi_0 antiderivative rescaled by sqrt(L).
double weight_antiderivative(const WeightFunction& w, const Interval& iv, double x) {
  const BasisSystem b{BasisKind::kLegendre, iv};
  return std::sqrt(iv.length()) * inner_antiderivative(w, b, 0, x);
}

}  // namespace

double remainder_eval(const CoeffMatrix& mat, double x1, double x2) {
  const BasisSystem b{mat.meta.basis, mat.meta.iv};
  const Eigen::VectorXd b1 = phi_vector(b, mat.p1(), x1);
  const Eigen::VectorXd b2 = phi_vector(b, mat.p2(), x2);
  const double truncated = b1.dot(mat.values * b2);
  return kernel_kstar(mat.meta.psi1, mat.meta.psi2, x1, x2, mat.meta.iv) - truncated;
}

double diag_remainder_integral(const CoeffMatrix& mat) {
  const int p = std::min(mat.p1(), mat.p2());
  return 0.5 * mat.meta.weight_product - trace_partial_sum(mat, p);
}

double ms_projection_error(const CoeffMatrix& mat) {
  const double knorm = k_norm_sq(mat.meta.psi1, mat.meta.psi2, mat.meta.iv);
  const double residual = knorm - mat.values.squaredNorm();
  if (residual < -1e-10) {
    throw std::runtime_error(
        "ms_projection_error: Bessel sum exceeds ||K||^2 by more than 1e-10; "
        "coefficient table and kernel norm are inconsistent");
  }
  return std::max(0.0, residual);
}

ErrorReport ms_error_bound(const CoeffMatrix& mat, const NoisePair& pair) {
  (void)pair;  // the report carries both pair regimes; selection happens downstream
  const double proj = ms_projection_error(mat);
  const double diag = diag_remainder_integral(mat);
  return ErrorReport{mat.p1(), mat.p2(), proj, diag, proj, 2.0 * proj + diag * diag};
}

MomentTheory remainder_second_moment(const CoeffMatrix& mat, const NoisePair& pair) {
  const double proj = ms_projection_error(mat);
  if (pair.i1 != 0 && pair.i2 != 0) {
    if (pair.i1 != pair.i2) {
      // The two off-diagonal iterated integrals live on disjoint time
      // simplices of distinct components, hence are orthogonal: the second
      // moment is exactly the projection error.
      return MomentTheory{proj, true};
    }
    const double diag = diag_remainder_integral(mat);
    return MomentTheory{2.0 * proj + diag * diag, false};
  }

  const Interval& iv = mat.meta.iv;
  const BasisSystem b{mat.meta.basis, iv};
  const int jmax = std::max(mat.p1(), mat.p2());
  Eigen::VectorXd zeta0(jmax + 1);
  for (int j = 0; j <= jmax; ++j) zeta0[j] = phi_integral(b, j, iv.t0, iv.t1);

  if (pair.i1 == 0 && pair.i2 == 0) {
    // Fully deterministic: the value is the plain double integral of R.
    const BasisSystem leg{BasisKind::kLegendre, iv};
    const double lower_mass =
        iv.length() * fourier_coeff(mat.meta.psi1, mat.meta.psi2, leg, 0, 0);
    const double truncated = zeta0.head(mat.p1() + 1).transpose() * mat.values *
                             zeta0.head(mat.p2() + 1);
    const double d = lower_mass - truncated;
    return MomentTheory{d * d, true};
  }

  // One time component: integrate R over the deterministic slot, then
  // square-integrate the remaining function of the stochastic slot.
  QuadratureOptions opts;
  opts.min_panels = 16 + 2 * jmax;
  if (pair.i1 == 0) {
    // g(t2) = psi2(t2) int_{t0}^{t2} psi1 - sum_{j2} (V^T zeta0)_{j2} phi_{j2}(t2)
    const Eigen::VectorXd a = mat.values.transpose() * zeta0.head(mat.p1() + 1);
    auto g = [&](double t2) {
      double acc = mat.meta.psi2.value(t2, iv) *
                   weight_antiderivative(mat.meta.psi1, iv, t2);
      for (int j2 = 0; j2 <= mat.p2(); ++j2) acc -= a[j2] * phi(b, j2, t2);
      return acc * acc;
    };
    return MomentTheory{integrate(g, iv.t0, iv.t1, opts), true};
  }
  // pair.i2 == 0: h(t1) = psi1(t1) int_{t1}^{t1max} psi2 - sum_{j1} (V zeta0)_{j1} phi_{j1}(t1)
  const Eigen::VectorXd a = mat.values * zeta0.head(mat.p2() + 1);
  const double total2 = weight_antiderivative(mat.meta.psi2, iv, iv.t1);
  auto h = [&](double t1) {
    double acc = mat.meta.psi1.value(t1, iv) *
                 (total2 - weight_antiderivative(mat.meta.psi2, iv, t1));
    for (int j1 = 0; j1 <= mat.p1(); ++j1) acc -= a[j1] * phi(b, j1, t1);
    return acc * acc;
  };
  return MomentTheory{integrate(h, iv.t0, iv.t1, opts), true};
}

}  // namespace stochint
