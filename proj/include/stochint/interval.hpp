#pragma once

#include <stdexcept>
#include <string>

namespace stochint {

// Closed integration interval [t0, t1] with t0 < t1.
struct Interval {
  double t0;
  double t1;

  Interval(double t0_, double t1_) : t0(t0_), t1(t1_) {
    if (!(t0 < t1)) {
      throw std::invalid_argument("Interval: require t0 < t1, got [" +
                                  std::to_string(t0) + ", " + std::to_string(t1) + "]");
    }
  }

  double length() const { return t1 - t0; }

  // Membership with an absolute slack for endpoint rounding.
  bool contains(double s, double tol = 1e-12) const {
    return s >= t0 - tol && s <= t1 + tol;
  }
};

}  // namespace stochint
