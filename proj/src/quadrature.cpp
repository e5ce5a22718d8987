#include "stochint/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "stochint/basis.hpp"

namespace stochint {

GaussRule::GaussRule(int order) {
  if (order < 1) throw std::invalid_argument("GaussRule: order must be >= 1");
  nodes_.resize(order);
  weights_.resize(order);
  const int n = order;
  for (int k = 0; k < (n + 1) / 2; ++k) {
    // Chebyshev-like initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double p = legendre_p(n, x);
      // P_n'(x) from the stable endpoint-free identity
      // (1 - x^2) P_n' = n (P_{n-1} - x P_n).
      dp = n * (legendre_p(n - 1, x) - x * p) / (1.0 - x * x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes_[k] = -x;  // ascending order
    nodes_[n - 1 - k] = x;
    weights_[k] = w;
    weights_[n - 1 - k] = w;
  }
  if (n % 2 == 1) nodes_[n / 2] = 0.0;
}

const GaussRule& GaussRule::cached(int order) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussRule>(order);
  return *slot;
}

double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        int panels, int gauss_order) {
  const GaussRule& rule = GaussRule::cached(gauss_order);
  const double h = (b - a) / panels;
  // Kahan accumulation keeps panel roundoff independent of the panel count.
  double acc = 0.0, comp = 0.0;
  for (int m = 0; m < panels; ++m) {
    const double lo = a + m * h;
    const double hi = (m + 1 == panels) ? b : a + (m + 1) * h;
    const double y = rule.apply(f, lo, hi) - comp;
    const double t = acc + y;
    comp = (t - acc) - y;
    acc = t;
  }
  return acc;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts) {
  int panels = std::max(1, opts.min_panels);
  double prev = integrate_panels(f, a, b, panels, opts.gauss_order);
  while (2 * panels <= opts.max_panels) {
    panels *= 2;
    const double cur = integrate_panels(f, a, b, panels, opts.gauss_order);
    if (std::abs(cur - prev) < opts.abs_tol) return cur;
    prev = cur;
  }
  throw QuadratureError("integrate: no convergence to abs_tol=" +
                        std::to_string(opts.abs_tol) + " within " +
                        std::to_string(opts.max_panels) + " panels");
}

}  // namespace stochint
