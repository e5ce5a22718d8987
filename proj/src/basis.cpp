#include "stochint/basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stochint {

std::string to_string(BasisKind kind) {
  return kind == BasisKind::kLegendre ? "legendre" : "trig";
}

BasisKind basis_kind_from_string(const std::string& name) {
  if (name == "legendre") return BasisKind::kLegendre;
  if (name == "trig" || name == "trigonometric") return BasisKind::kTrigonometric;
  throw std::invalid_argument("unknown basis '" + name + "' (expected legendre|trig)");
}

double legendre_p(int j, double z) {
  if (j < 0) throw std::invalid_argument("legendre_p: negative degree");
  if (j == 0) return 1.0;
  double pm = 1.0;  // P_0
  double pc = z;    // P_1
  for (int k = 1; k < j; ++k) {
    const double pn = ((2 * k + 1) * z * pc - k * pm) / (k + 1);
    pm = pc;
    pc = pn;
  }
  return pc;
}

namespace {

// sin(2 pi q) for q already reduced to [-1/2, 1/2]. Folding the outer halves
// onto [-1/4, 1/4] keeps the subtractions exact (Sterbenz), so half-integer
// phases hit the sine zero at argument exactly 0.
double sin_reduced(double q) {
  if (q > 0.25) {
    q = 0.5 - q;
  } else if (q < -0.25) {
    q = -0.5 - q;
  }
  return std::sin(2.0 * std::numbers::pi * q);
}

}  // namespace

double sin_two_pi(double x) {
  return sin_reduced(x - std::nearbyint(x));
}

double cos_two_pi(double x) {
  // cos(2 pi r) = sin(2 pi (1/4 - r)), renormalized into [-1/2, 1/2].
  double q = 0.25 - (x - std::nearbyint(x));
  if (q > 0.5) q -= 1.0;
  return sin_reduced(q);
}

namespace {

void check_index(int j) {
  if (j < 0) throw std::invalid_argument("basis index must be >= 0");
}

void check_point(const Interval& iv, double s) {
  if (!iv.contains(s)) {
    throw std::domain_error("basis: point " + std::to_string(s) + " outside [" +
                            std::to_string(iv.t0) + ", " + std::to_string(iv.t1) + "]");
  }
}

// Trig frequency of index j >= 1; odd indices are sines, even are cosines.
inline int trig_frequency(int j) { return (j + 1) / 2; }

}  // namespace

double phi(const BasisSystem& b, int j, double s) {
  check_index(j);
  check_point(b.iv, s);
  const double L = b.iv.length();
  if (b.kind == BasisKind::kLegendre) {
    double z = 2.0 * (s - b.iv.t0) / L - 1.0;
    if (z > 1.0) z = 1.0;
    if (z < -1.0) z = -1.0;
    return std::sqrt((2.0 * j + 1.0) / L) * legendre_p(j, z);
  }
  if (j == 0) return 1.0 / std::sqrt(L);
  const double u = (s - b.iv.t0) / L;
  const int r = trig_frequency(j);
  const double amp = std::sqrt(2.0 / L);
  return (j % 2 == 1) ? amp * sin_two_pi(r * u) : amp * cos_two_pi(r * u);
}

double phi_integral(const BasisSystem& b, int j, double a, double c) {
  check_index(j);
  check_point(b.iv, a);
  check_point(b.iv, c);
  const double L = b.iv.length();
  if (j == 0) {
    // (c - a) / sqrt(L), written so the full interval gives exactly sqrt(L).
    return std::sqrt(L) * ((c - a) / L);
  }
  if (b.kind == BasisKind::kLegendre) {
    // Antiderivative of P_j is (P_{j+1} - P_{j-1})/(2j+1); it vanishes at both
    // endpoints z = +-1, so full-interval integrals are exactly zero.
    auto anti = [&](double x) {
      double z = 2.0 * (x - b.iv.t0) / L - 1.0;
      if (z > 1.0) z = 1.0;
      if (z < -1.0) z = -1.0;
      return legendre_p(j + 1, z) - legendre_p(j - 1, z);
    };
    const double scale = 0.5 * std::sqrt(L) / std::sqrt(2.0 * j + 1.0);
    return scale * (anti(c) - anti(a));
  }
  const int r = trig_frequency(j);
  const double scale = std::sqrt(2.0 * L) / (2.0 * std::numbers::pi * r);
  auto u = [&](double x) { return (x - b.iv.t0) / L; };
  if (j % 2 == 1) {
    return scale * (cos_two_pi(r * u(a)) - cos_two_pi(r * u(c)));
  }
  return scale * (sin_two_pi(r * u(c)) - sin_two_pi(r * u(a)));
}

}  // namespace stochint
