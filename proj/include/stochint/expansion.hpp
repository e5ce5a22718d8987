#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "stochint/basis.hpp"
#include "stochint/coefficients.hpp"
#include "stochint/noise.hpp"

namespace stochint {

// One draw of the Gaussian system zeta_j^(i) = int phi_j dw^(i). Row 0 holds
// the deterministic time-component values int phi_j ds; rows 1..m are i.i.d.
// standard normals keyed by (seed, i, j), so enlarging jmax or m extends the
// matrix without changing existing entries.
struct GaussianDraws {
  Eigen::MatrixXd z;  // (m+1) x (jmax+1)
  int m;
  int jmax;
  std::uint64_t seed;
  BasisKind basis;
  Interval iv;
};

// Row 0 of the draw matrix: (int phi_0, ..., int phi_jmax) over the whole
// interval. Legendre gives exactly (sqrt(L), 0, ..., 0); trig likewise zeroes
// every nonconstant mode.
Eigen::VectorXd deterministic_zeta0(const BasisSystem& b, int jmax);

GaussianDraws make_draws(const BasisSystem& b, int m, int jmax, std::uint64_t seed);

struct ExpansionSample {
  double stratonovich;
  double ito;
  int p1;
  int p2;
  int i1;
  int i2;
  std::uint64_t seed;
};

// Truncated double series sum_{j1<=p1, j2<=p2} C_{j2 j1} zeta_{j1}^{(i1)}
// zeta_{j2}^{(i2)}, evaluated in fixed j1-major order with compensated
// accumulation. The Ito value subtracts (1/2) int psi1 psi2 when i1 = i2 != 0.
ExpansionSample sample_truncated(const CoeffMatrix& mat, const GaussianDraws& draws,
                                 const NoisePair& pair);

// Exact expectation of the truncated series: the partial trace for equal
// nonzero components, the deterministic bilinear form when both components
// are the time component, and zero otherwise.
double expected_value(const CoeffMatrix& mat, const NoisePair& pair);

}  // namespace stochint
