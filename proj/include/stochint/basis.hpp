#pragma once

#include <string>

#include "stochint/interval.hpp"

namespace stochint {

enum class BasisKind { kLegendre, kTrigonometric };

std::string to_string(BasisKind kind);
BasisKind basis_kind_from_string(const std::string& name);

// Complete orthonormal system on L2([t0, t1]).
//
// Legendre: phi_j(s) = sqrt((2j+1)/L) P_j(2(s-t0)/L - 1) with L = t1 - t0.
//
// Trigonometric, with u = (s-t0)/L:
//   phi_0      = 1/sqrt(L)
//   phi_{2r-1} = sqrt(2/L) sin(2 pi r u)     (r = 1, 2, ...)
//   phi_{2r}   = sqrt(2/L) cos(2 pi r u)
// so even positive indices are cosines and odd indices are sines of the same
// frequency one index earlier.
struct BasisSystem {
  BasisKind kind;
  Interval iv;
};

// phi_j(s); throws std::invalid_argument for j < 0 and std::domain_error for
// s outside the interval.
double phi(const BasisSystem& b, int j, double s);

// Closed-form integral of phi_j over [a, c] (both inside the interval, a <= c
// not required; a > c flips the sign). Full-interval integrals of every j >= 1
// mode evaluate to exactly 0.0.
double phi_integral(const BasisSystem& b, int j, double a, double c);

// Unnormalized Legendre polynomial P_j on [-1, 1] via the three-term
// recurrence; exposed because the coefficient module builds on it.
double legendre_p(int j, double z);

// sin(2 pi x) / cos(2 pi x) with the argument reduced modulo 1 before scaling,
// so integer x gives exact 0.0 / 1.0 and large arguments lose no phase.
double sin_two_pi(double x);
double cos_two_pi(double x);

}  // namespace stochint
