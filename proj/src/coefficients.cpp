#include "stochint/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace stochint {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Monomial helpers in u = s - t0 (ascending coefficients, exact small-degree
// polynomial arithmetic for the closed-form paths).
// ---------------------------------------------------------------------------

std::vector<double> conv(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

// int_0^L sum c_k u^k du.
double definite_monomial(const std::vector<double>& c, double L) {
  double acc = 0.0;
  double power = L;
  for (size_t k = 0; k < c.size(); ++k) {
    acc += c[k] * power / static_cast<double>(k + 1);
    power *= L;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Exact path: normalized-Legendre coefficient vectors on [t0, t1]. With
// phi_j = sqrt((2j+1)/L) P_j(z), multiplication by z is the symmetric
// tridiagonal z phi_j = a_j phi_{j+1} + a_{j-1} phi_{j-1},
// a_j = (j+1)/sqrt((2j+1)(2j+3)), and the running integral of phi_j is
//   int_{t0}^x phi_j = (L/2) [ phi_{j+1}/sqrt((2j+1)(2j+3))
//                            - phi_{j-1}/sqrt((2j+1)(2j-1)) ]   (j >= 1)
//   int_{t0}^x phi_0 = (L/2) [ phi_0 + phi_1/sqrt(3) ].
// Both operators are banded, so a polynomial weight of degree d keeps the
// coefficient vector support within d of where it started.
// ---------------------------------------------------------------------------

double alpha_coef(int j) {
  return (j + 1) / std::sqrt((2.0 * j + 1.0) * (2.0 * j + 3.0));
}

// Multiply by u = (s - t0) = (L/2)(1 + z).
VectorXd apply_u(const VectorXd& v, double L) {
  const int n = static_cast<int>(v.size());
  VectorXd out = VectorXd::Zero(n + 1);
  const double half = 0.5 * L;
  for (int j = 0; j < n; ++j) {
    if (v[j] == 0.0) continue;
    out[j] += half * v[j];
    out[j + 1] += half * alpha_coef(j) * v[j];
    if (j > 0) out[j - 1] += half * alpha_coef(j - 1) * v[j];
  }
  return out;
}

// psi(u) * f via operator Horner.
VectorXd apply_poly(const std::vector<double>& c, const VectorXd& v, double L) {
  const int d = static_cast<int>(c.size()) - 1;
  VectorXd acc = c[d] * v;
  for (int k = d - 1; k >= 0; --k) {
    VectorXd shifted = apply_u(acc, L);
    shifted.head(v.size()) += c[k] * v;
    acc = std::move(shifted);
  }
  return acc;
}

// Running integral from t0.
VectorXd cumulative(const VectorXd& v, double L) {
  const int n = static_cast<int>(v.size());
  VectorXd out = VectorXd::Zero(n + 1);
  const double half = 0.5 * L;
  for (int j = 0; j < n; ++j) {
    if (v[j] == 0.0) continue;
    out[j + 1] += half / std::sqrt((2.0 * j + 1.0) * (2.0 * j + 3.0)) * v[j];
    if (j >= 1) {
      out[j - 1] -= half / std::sqrt((2.0 * j - 1.0) * (2.0 * j + 1.0)) * v[j];
    } else {
      out[0] += half * v[0];
    }
  }
  return out;
}

// Coefficients of the inner antiderivative psi1-layer for unit start e_{j1}.
VectorXd exact_inner_coeffs(const std::vector<double>& c1, int j1, double L) {
  VectorXd e = VectorXd::Zero(j1 + 1);
  e[j1] = 1.0;
  return cumulative(apply_poly(c1, e, L), L);
}

// Full row y = psi2 * cumulative(psi1 * e_{j1}); entry y[j2] is C_{j2 j1}.
VectorXd exact_row(const std::vector<double>& c1, const std::vector<double>& c2,
                   int j1, double L) {
  return apply_poly(c2, exact_inner_coeffs(c1, j1, L), L);
}

// Evaluate a normalized-Legendre series at s with one recurrence pass.
double eval_series(const BasisSystem& b, const VectorXd& coeffs, double s) {
  const double L = b.iv.length();
  double z = 2.0 * (s - b.iv.t0) / L - 1.0;
  z = std::clamp(z, -1.0, 1.0);
  double pm = 1.0, pc = z;
  double acc = coeffs[0] * std::sqrt(1.0 / L) * pm;
  const int n = static_cast<int>(coeffs.size());
  if (n > 1) acc += coeffs[1] * std::sqrt(3.0 / L) * pc;
  for (int j = 2; j < n; ++j) {
    const int k = j - 1;
    const double pn = ((2 * k + 1) * z * pc - k * pm) / (k + 1);
    pm = pc;
    pc = pn;
    acc += coeffs[j] * std::sqrt((2.0 * j + 1.0) / L) * pc;
  }
  return acc;
}

bool exact_path_applies(const WeightFunction& w1, const WeightFunction& w2,
                        const BasisSystem& b) {
  return b.kind == BasisKind::kLegendre && w1.is_polynomial() && w2.is_polynomial();
}

// ---------------------------------------------------------------------------
// Quadrature path: one composite Gauss panelization shared by every entry.
// The inner layer Phi_{j1} is a cumulative antiderivative evaluated at the
// outer nodes (panel prefix plus an in-panel partial rule), one pass per j1;
// the outer layer is then a dense product against the weighted basis table.
// ---------------------------------------------------------------------------

// phi_0..phi_jmax at one point, no domain checks (callers stay inside).
void fill_phi_all(const BasisSystem& b, int jmax, double s, double* out) {
  const double L = b.iv.length();
  if (b.kind == BasisKind::kLegendre) {
    double z = 2.0 * (s - b.iv.t0) / L - 1.0;
    z = std::clamp(z, -1.0, 1.0);
    double pm = 1.0, pc = z;
    out[0] = std::sqrt(1.0 / L);
    if (jmax >= 1) out[1] = std::sqrt(3.0 / L) * pc;
    for (int j = 2; j <= jmax; ++j) {
      const int k = j - 1;
      const double pn = ((2 * k + 1) * z * pc - k * pm) / (k + 1);
      pm = pc;
      pc = pn;
      out[j] = std::sqrt((2.0 * j + 1.0) / L) * pc;
    }
    return;
  }
  const double u = (s - b.iv.t0) / L;
  out[0] = 1.0 / std::sqrt(L);
  if (jmax < 1) return;
  const double amp = std::sqrt(2.0 / L);
  // sin/cos of r*2*pi*u by angle-addition recurrence in r.
  const double s1 = sin_two_pi(u), c1 = cos_two_pi(u);
  double sr = s1, cr = c1;
  for (int r = 1; 2 * r - 1 <= jmax; ++r) {
    if (r > 1) {
      const double sn = sr * c1 + cr * s1;
      const double cn = cr * c1 - sr * s1;
      sr = sn;
      cr = cn;
    }
    out[2 * r - 1] = amp * sr;
    if (2 * r <= jmax) out[2 * r] = amp * cr;
  }
}

int base_panels(const BasisSystem& b, int jmax) {
  if (b.kind == BasisKind::kTrigonometric) {
    // At least four panels per period of the highest frequency.
    const int rmax = (jmax + 1) / 2;
    return std::max(8, 4 * std::max(1, rmax));
  }
  return std::max(8, jmax / 2 + 4);
}

MatrixXd quad_pass(const WeightFunction& w1, const WeightFunction& w2,
                   const BasisSystem& b, int p1, int p2, int panels, int q) {
  const GaussRule& rule = GaussRule::cached(q);
  const auto& gn = rule.nodes();
  const auto& gw = rule.weights();
  const Interval& iv = b.iv;
  const double h = iv.length() / panels;
  const int K = panels * q;
  const int jmax = std::max(p1, p2);

  VectorXd xs(K), ws(K), psi1o(K), psi2o(K);
  MatrixXd B(jmax + 1, K);
  for (int m = 0; m < panels; ++m) {
    const double lo = iv.t0 + m * h;
    const double mid = lo + 0.5 * h;
    for (int i = 0; i < q; ++i) {
      const int k = m * q + i;
      xs[k] = mid + 0.5 * h * gn[i];
      ws[k] = 0.5 * h * gw[i];
      psi1o[k] = w1.value(xs[k], iv);
      psi2o[k] = w2.value(xs[k], iv);
      fill_phi_all(b, jmax, xs[k], B.col(k).data());
    }
  }

  // In-panel partial integrals of psi1*phi_{j1} from the panel start to each
  // outer node, all j1 at once per inner point.
  MatrixXd Phi = MatrixXd::Zero(p1 + 1, K);
  VectorXd phiv(p1 + 1);
  for (int m = 0; m < panels; ++m) {
    const double lo = iv.t0 + m * h;
    for (int i = 0; i < q; ++i) {
      const int k = m * q + i;
      const double half = 0.5 * (xs[k] - lo);
      for (int t = 0; t < q; ++t) {
        const double pt = lo + half * (1.0 + gn[t]);
        fill_phi_all(b, p1, pt, phiv.data());
        Phi.col(k) += (half * gw[t] * w1.value(pt, iv)) * phiv;
      }
    }
  }

  // Promote in-panel partials to running integrals from t0; the full-panel
  // increment reuses the panel's own outer nodes as its Gauss rule.
  VectorXd prefix = VectorXd::Zero(p1 + 1);
  for (int m = 0; m < panels; ++m) {
    for (int i = 0; i < q; ++i) {
      Phi.col(m * q + i) += prefix;
    }
    for (int i = 0; i < q; ++i) {
      const int k = m * q + i;
      prefix += (ws[k] * psi1o[k]) * B.col(k).head(p1 + 1);
    }
  }

  MatrixXd W2B(p2 + 1, K);
  for (int k = 0; k < K; ++k) {
    W2B.col(k) = (ws[k] * psi2o[k]) * B.col(k).head(p2 + 1);
  }
  return Phi * W2B.transpose();
}

MatrixXd quad_matrix(const WeightFunction& w1, const WeightFunction& w2,
                     const BasisSystem& b, int p1, int p2,
                     const QuadratureOptions& opts, int* panels_out) {
  int panels = std::max(opts.min_panels, base_panels(b, std::max(p1, p2)));
  const int cap = std::max(panels, opts.max_panels);
  MatrixXd prev = quad_pass(w1, w2, b, p1, p2, panels, opts.gauss_order);
  while (2 * panels <= cap) {
    panels *= 2;
    MatrixXd cur = quad_pass(w1, w2, b, p1, p2, panels, opts.gauss_order);
    const double diff = (cur - prev).cwiseAbs().maxCoeff();
    if (diff < opts.abs_tol) {
      if (panels_out) *panels_out = panels;
      return cur;
    }
    prev = std::move(cur);
  }
  throw QuadratureError("coeff_matrix: panel refinement hit the cap (" +
                        std::to_string(cap) + " panels) before reaching abs_tol=" +
                        std::to_string(opts.abs_tol));
}

WeightFunction squared_weight(const WeightFunction& w) {
  if (w.is_polynomial()) {
    return WeightFunction::polynomial(conv(w.coefficients(), w.coefficients()));
  }
  return WeightFunction::custom(
      [w](double s, const Interval& iv) {
        const double v = w.value(s, iv);
        return v * v;
      },
      w.derivative_bound(), "squared");
}

}  // namespace

double inner_antiderivative(const WeightFunction& w1, const BasisSystem& b, int j1,
                            double x, const QuadratureOptions& opts) {
  if (j1 < 0) throw std::invalid_argument("inner_antiderivative: j1 must be >= 0");
  if (!b.iv.contains(x)) {
    throw std::domain_error("inner_antiderivative: x outside the interval");
  }
  if (b.kind == BasisKind::kLegendre && w1.is_polynomial()) {
    return eval_series(b, exact_inner_coeffs(w1.coefficients(), j1, b.iv.length()), x);
  }
  if (x == b.iv.t0) return 0.0;
  QuadratureOptions local = opts;
  const double frac = (x - b.iv.t0) / b.iv.length();
  local.min_panels = std::max(1, static_cast<int>(base_panels(b, j1) * frac) + 1);
  return integrate([&](double s) { return w1.value(s, b.iv) * phi(b, j1, s); },
                   b.iv.t0, x, local);
}

double fourier_coeff(const WeightFunction& w1, const WeightFunction& w2,
                     const BasisSystem& b, int j1, int j2,
                     const QuadratureOptions& opts) {
  if (j1 < 0 || j2 < 0) throw std::invalid_argument("fourier_coeff: indices must be >= 0");
  if (exact_path_applies(w1, w2, b)) {
    const VectorXd y = exact_row(w1.coefficients(), w2.coefficients(), j1, b.iv.length());
    return j2 < y.size() ? y[j2] : 0.0;
  }
  return quad_matrix(w1, w2, b, j1, j2, opts, nullptr)(j1, j2);
}

CoeffMatrix coeff_matrix(const WeightFunction& w1, const WeightFunction& w2,
                         const BasisSystem& b, int p1, int p2,
                         const QuadratureOptions& opts) {
  if (p1 < 0 || p2 < 0) throw std::invalid_argument("coeff_matrix: orders must be >= 0");
  CoeffMatrix mat{MatrixXd::Zero(p1 + 1, p2 + 1),
                  CoeffMeta{b.iv, b.kind, w1.descriptor(), w2.descriptor(), w1, w2,
                            opts.abs_tol, 0, false,
                            weight_product_integral(w1, w2, b.iv, opts)}};
  if (exact_path_applies(w1, w2, b)) {
    const double L = b.iv.length();
    for (int j1 = 0; j1 <= p1; ++j1) {
      const VectorXd y = exact_row(w1.coefficients(), w2.coefficients(), j1, L);
      const int len = std::min<int>(p2 + 1, static_cast<int>(y.size()));
      mat.values.row(j1).head(len) = y.head(len);
    }
    mat.meta.exact = true;
    mat.meta.abs_tol = 0.0;
    return mat;
  }
  int panels = 0;
  mat.values = quad_matrix(w1, w2, b, p1, p2, opts, &panels);
  mat.meta.panel_count = panels;
  return mat;
}

double trace_partial_sum(const CoeffMatrix& mat, int p) {
  if (p < 0 || p > std::min(mat.p1(), mat.p2())) {
    throw std::invalid_argument("trace_partial_sum: need 0 <= p <= min(p1, p2)");
  }
  return mat.values.diagonal().head(p + 1).sum();
}

double weight_product_integral(const WeightFunction& w1, const WeightFunction& w2,
                               const Interval& iv, const QuadratureOptions& opts) {
  if (w1.is_polynomial() && w2.is_polynomial()) {
    return definite_monomial(conv(w1.coefficients(), w2.coefficients()), iv.length());
  }
  QuadratureOptions local = opts;
  local.min_panels = std::max(local.min_panels, 4);
  return integrate([&](double s) { return w1.value(s, iv) * w2.value(s, iv); },
                   iv.t0, iv.t1, local);
}

double k_norm_sq(const WeightFunction& w1, const WeightFunction& w2,
                 const Interval& iv, const QuadratureOptions& opts) {
  if (w1.is_polynomial() && w2.is_polynomial()) {
    // Inner layer int_0^u q1, then one more definite pass against q2, all in
    // exact monomial arithmetic (q_i = psi_i^2).
    const auto q1 = conv(w1.coefficients(), w1.coefficients());
    const auto q2 = conv(w2.coefficients(), w2.coefficients());
    std::vector<double> a1(q1.size() + 1, 0.0);
    for (size_t k = 0; k < q1.size(); ++k) a1[k + 1] = q1[k] / static_cast<double>(k + 1);
    return definite_monomial(conv(a1, q2), iv.length());
  }
  // ||K||^2 equals L * C_00 built from the squared weights (phi_0 = 1/sqrt(L)
  // twice contributes 1/L).
  const BasisSystem b{BasisKind::kLegendre, iv};
  const WeightFunction s1 = squared_weight(w1);
  const WeightFunction s2 = squared_weight(w2);
  return iv.length() * quad_matrix(s1, s2, b, 0, 0, opts, nullptr)(0, 0);
}

}  // namespace stochint
