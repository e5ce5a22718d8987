#pragma once

#include <Eigen/Dense>
#include <string>

#include "stochint/basis.hpp"
#include "stochint/interval.hpp"
#include "stochint/quadrature.hpp"
#include "stochint/weight.hpp"

namespace stochint {

// Provenance block attached to every coefficient table. Keeps the live weight
// functions alongside their canonical descriptors so downstream error
// functionals can evaluate the kernel without re-parsing.
struct CoeffMeta {
  Interval iv;
  BasisKind basis;
  std::string w1;        // canonical weight descriptors
  std::string w2;
  WeightFunction psi1;
  WeightFunction psi2;
  double abs_tol;        // quadrature tolerance the entries were built to
  int panel_count;       // final composite panel count (0 on the exact path)
  bool exact;            // true when the closed-form polynomial path was used
  double weight_product; // cached integral of psi1*psi2 over the interval
};

// Table of generalized Fourier coefficients
//   C_{j2 j1} = int_t^T psi2(t2) phi_{j2}(t2) int_t^{t2} psi1(t1) phi_{j1}(t1) dt1 dt2
// stored as values(j1, j2) = C_{j2 j1}, shape (p1+1) x (p2+1). The first index
// always belongs to the inner integration layer.
struct CoeffMatrix {
  Eigen::MatrixXd values;
  CoeffMeta meta;

  int p1() const { return static_cast<int>(values.rows()) - 1; }
  int p2() const { return static_cast<int>(values.cols()) - 1; }
};

// Phi_{j1}(x) = int_{t0}^x psi1(s) phi_{j1}(s) ds, the running inner layer.
// Exact for polynomial weights with the Legendre basis, composite Gauss with
// panel doubling otherwise.
double inner_antiderivative(const WeightFunction& w1, const BasisSystem& b, int j1,
                            double x, const QuadratureOptions& opts = {});

// Single coefficient C_{j2 j1}.
double fourier_coeff(const WeightFunction& w1, const WeightFunction& w2,
                     const BasisSystem& b, int j1, int j2,
                     const QuadratureOptions& opts = {});

// Full table for j1 <= p1, j2 <= p2. All entries of a quadrature build share
// one panelization, refined until the worst entry moves by less than abs_tol.
CoeffMatrix coeff_matrix(const WeightFunction& w1, const WeightFunction& w2,
                         const BasisSystem& b, int p1, int p2,
                         const QuadratureOptions& opts = {});

// sum_{j<=p} C_{jj}; requires p <= min(p1, p2). Converges to
// (1/2) * int psi1 psi2 as p grows.
double trace_partial_sum(const CoeffMatrix& mat, int p);

// int_{t0}^{t1} psi1(s) psi2(s) ds.
double weight_product_integral(const WeightFunction& w1, const WeightFunction& w2,
                               const Interval& iv, const QuadratureOptions& opts = {});

// Squared L2 norm of the lower-triangle kernel,
// ||K||^2 = int_t^T psi2(t2)^2 int_t^{t2} psi1(t1)^2 dt1 dt2.
double k_norm_sq(const WeightFunction& w1, const WeightFunction& w2,
                 const Interval& iv, const QuadratureOptions& opts = {});

}  // namespace stochint
