#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace stochint {

// Raised when panel-doubling refinement hits its cap before reaching the
// requested tolerance.
struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Gauss-Legendre rule on [-1, 1]. Nodes are Newton-refined roots of P_n; the
// classical weight is 2 / ((1 - x^2) P_n'(x)^2).
class GaussRule {
 public:
  explicit GaussRule(int order);

  int order() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  // Shared per-order instances (rules are immutable).
  static const GaussRule& cached(int order);

  // Integral of f over [a, b] with a single application of the rule.
  template <class F>
  double apply(F&& f, double a, double b) const {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (int k = 0; k < order(); ++k) {
      acc += weights_[k] * f(mid + half * nodes_[k]);
    }
    return half * acc;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  int gauss_order = 16;
  int min_panels = 1;
  int max_panels = 1 << 14;  // refinement cap; exceeding it throws
};

// Composite fixed-order Gauss integral of f over [a, b] with uniform panels,
// doubling the panel count until two successive levels agree within abs_tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts = {});

// Single pass at a fixed panel count (no refinement, no error control).
double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        int panels, int gauss_order);

}  // namespace stochint
