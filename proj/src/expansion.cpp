#include "stochint/expansion.hpp"

#include <stdexcept>

#include "stochint/rng.hpp"

namespace stochint {

Eigen::VectorXd deterministic_zeta0(const BasisSystem& b, int jmax) {
  if (jmax < 0) throw std::invalid_argument("deterministic_zeta0: jmax must be >= 0");
  Eigen::VectorXd out(jmax + 1);
  for (int j = 0; j <= jmax; ++j) {
    out[j] = phi_integral(b, j, b.iv.t0, b.iv.t1);
  }
  return out;
}

GaussianDraws make_draws(const BasisSystem& b, int m, int jmax, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("make_draws: need m >= 1");
  if (jmax < 0) throw std::invalid_argument("make_draws: jmax must be >= 0");
  GaussianDraws d{Eigen::MatrixXd(m + 1, jmax + 1), m, jmax, seed, b.kind, b.iv};
  d.z.row(0) = deterministic_zeta0(b, jmax).transpose();
  for (int i = 1; i <= m; ++i) {
    for (int j = 0; j <= jmax; ++j) {
      d.z(i, j) = rng::gaussian(rng::derive(seed, rng::kPurposeExpansionDraws, i, j));
    }
  }
  return d;
}

ExpansionSample sample_truncated(const CoeffMatrix& mat, const GaussianDraws& draws,
                                 const NoisePair& pair) {
  const int p1 = mat.p1();
  const int p2 = mat.p2();
  if (pair.m > draws.m || std::max(p1, p2) > draws.jmax) {
    throw std::invalid_argument("sample_truncated: draw matrix smaller than (m, max(p1, p2))");
  }
  const auto z1 = draws.z.row(pair.i1);
  const auto z2 = draws.z.row(pair.i2);
  // Fixed j1-major accumulation with Kahan compensation: the sample value must
  // not depend on any BLAS evaluation order.
  double acc = 0.0, comp = 0.0;
  for (int j1 = 0; j1 <= p1; ++j1) {
    for (int j2 = 0; j2 <= p2; ++j2) {
      const double term = mat.values(j1, j2) * z1[j1] * z2[j2] - comp;
      const double t = acc + term;
      comp = (t - acc) - term;
      acc = t;
    }
  }
  const double correction = pair.equal_nonzero() ? 0.5 * mat.meta.weight_product : 0.0;
  return ExpansionSample{acc, acc - correction, p1, p2, pair.i1, pair.i2, draws.seed};
}

double expected_value(const CoeffMatrix& mat, const NoisePair& pair) {
  if (pair.equal_nonzero()) {
    return trace_partial_sum(mat, std::min(mat.p1(), mat.p2()));
  }
  if (pair.i1 == 0 && pair.i2 == 0) {
    const BasisSystem b{mat.meta.basis, mat.meta.iv};
    const Eigen::VectorXd zeta0 = deterministic_zeta0(b, std::max(mat.p1(), mat.p2()));
    return zeta0.head(mat.p1() + 1).transpose() * mat.values * zeta0.head(mat.p2() + 1);
  }
  // A single zero-mean Gaussian factor kills every term.
  return 0.0;
}

}  // namespace stochint
