#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "stochint/interval.hpp"

namespace stochint {

// Scalar weight psi on an interval. Built-in kinds are a constant and a
// polynomial in powers of (s - t0); a custom evaluator with a declared
// derivative bound is the extension point. Polynomial coefficients are stored
// ascending, so value(s) = c0 + c1*(s-t0) + c2*(s-t0)^2 + ...
class WeightFunction {
 public:
  enum class Kind { kConstant, kPolynomial, kCustom };

  using Evaluator = std::function<double(double s, const Interval& iv)>;

  static WeightFunction constant(double c);
  static WeightFunction polynomial(std::vector<double> coeffs);
  static WeightFunction custom(Evaluator f, double derivative_bound,
                               std::string label = "custom");

  Kind kind() const { return kind_; }

  // True for the kinds with exact closed-form integration paths.
  bool is_polynomial() const { return kind_ != Kind::kCustom; }

  // Ascending coefficients in powers of (s - t0); constant(c) reports {c}.
  const std::vector<double>& coefficients() const;

  double derivative_bound() const;

  // Evaluate at s; throws std::domain_error if s lies outside the interval
  // (with 1e-12 slack).
  double value(double s, const Interval& iv) const;

  // Canonical descriptor, "const:<c>" or "poly:<c0>,<c1>,...". Custom weights
  // report their label and cannot be round-tripped.
  std::string descriptor() const;

  // Parse a descriptor; throws std::invalid_argument on malformed input.
  static WeightFunction parse(std::string_view descriptor);

 private:
  WeightFunction() = default;

  Kind kind_ = Kind::kConstant;
  std::vector<double> coeffs_{0.0};
  Evaluator eval_;
  double derivative_bound_ = 0.0;
  std::string label_;
};

// Free-function form used throughout the integral kernels.
double eval_weight(const WeightFunction& w, double s, const Interval& iv);

}  // namespace stochint
