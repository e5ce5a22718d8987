#include <doctest.h>

#include <cmath>

#include "stochint/kernels.hpp"
#include "stochint/remainder.hpp"
#include "support/simpson.hpp"

using namespace stochint;

namespace {

const Interval kUnit(0.0, 1.0);

WeightFunction one() { return WeightFunction::constant(1.0); }
WeightFunction ident() { return WeightFunction::polynomial({0.0, 1.0}); }

CoeffMatrix unit_matrix(int p) {
  const BasisSystem leg{BasisKind::kLegendre, kUnit};
  return coeff_matrix(one(), one(), leg, p, p);
}

// Brute-force int int R^2 over the square, split along the diagonal so each
// piece is smooth: the kernel is psi1 psi2 above the diagonal, 0 below.
double proj_error_oracle(const CoeffMatrix& mat) {
  auto upper = [&](double t1, double t2) {
    const double r = remainder_eval(mat, t1, t2);
    return r * r;
  };
  auto lower = [&](double t2, double t1) {
    // Swapped arguments walk the t1 > t2 triangle.
    const double r = remainder_eval(mat, t1, t2);
    return r * r;
  };
  const double a = mat.meta.iv.t0;
  const double b = mat.meta.iv.t1;
  return testsupport::integrate_triangle(upper, a, b, 1e-8, 1e-10) +
         testsupport::integrate_triangle(lower, a, b, 1e-8, 1e-10);
}

}  // namespace

TEST_CASE("pointwise remainder at pinned points") {
  const CoeffMatrix mat = unit_matrix(0);
  CHECK(remainder_eval(mat, 0.2, 0.8) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(remainder_eval(mat, 0.8, 0.2) == doctest::Approx(-0.5).epsilon(1e-15));
  for (double x : {0.0, 0.4, 1.0}) {
    CHECK(remainder_eval(mat, x, x) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  }

  // Pointwise convergence signature away from the diagonal.
  const CoeffMatrix big = unit_matrix(50);
  CHECK(std::abs(remainder_eval(big, 0.3, 0.7)) < 0.05);
}

TEST_CASE("diagonal remainder integral closed form") {
  for (int p : {0, 1, 4}) {
    CHECK(diag_remainder_integral(unit_matrix(p)) ==
          doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  }
  const BasisSystem leg{BasisKind::kLegendre, kUnit};
  CHECK(diag_remainder_integral(coeff_matrix(ident(), ident(), leg, 0, 0)) ==
        doctest::Approx(1.0 / 24.0).epsilon(1e-14));
  CHECK(diag_remainder_integral(coeff_matrix(ident(), ident(), leg, 1, 1)) ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-14));

  // The value depends on (p1, p2) only through the smaller of the two.
  const CoeffMatrix rect = coeff_matrix(ident(), ident(), leg, 0, 5);
  CHECK(diag_remainder_integral(rect) == doctest::Approx(1.0 / 24.0).epsilon(1e-14));
}

TEST_CASE("projection error closed values and monotonicity") {
  CHECK(ms_projection_error(unit_matrix(0)) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(ms_projection_error(unit_matrix(1)) ==
        doctest::Approx(1.0 / 12.0).epsilon(1e-12));
  for (int p : {0, 1, 2, 5}) {
    CHECK(ms_projection_error(unit_matrix(p)) ==
          doctest::Approx(0.25 / (2.0 * p + 1.0)).epsilon(1e-10));
  }

  const BasisSystem leg{BasisKind::kLegendre, kUnit};
  double prev = 1.0;
  for (int p : {0, 1, 2, 5}) {
    const double cur = ms_projection_error(coeff_matrix(one(), one(), leg, p, 2));
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}

TEST_CASE("projection error matches brute-force quadrature of the square") {
  for (int p : {0, 1}) {
    const CoeffMatrix mat = unit_matrix(p);
    CHECK(ms_projection_error(mat) ==
          doctest::Approx(proj_error_oracle(mat)).epsilon(1e-6));
  }
}

TEST_CASE("error report fields") {
  const ErrorReport rep = ms_error_bound(unit_matrix(0), NoisePair(1, 1, 1));
  CHECK(rep.p1 == 0);
  CHECK(rep.p2 == 0);
  CHECK(rep.proj_error_sq == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(rep.diag_integral == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(rep.ms_exact_offdiag == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(rep.ms_bound_equal == doctest::Approx(0.5).epsilon(1e-11));
}

TEST_CASE("second moment theory per component pair") {
  const CoeffMatrix mat = unit_matrix(0);

  const MomentTheory offdiag = remainder_second_moment(mat, NoisePair(1, 2, 2));
  CHECK(offdiag.exact);
  CHECK(offdiag.value == doctest::Approx(0.25).epsilon(1e-12));

  const MomentTheory equal = remainder_second_moment(mat, NoisePair(1, 1, 1));
  CHECK_FALSE(equal.exact);
  CHECK(equal.value == doctest::Approx(0.5).epsilon(1e-11));

  const MomentTheory left_time = remainder_second_moment(mat, NoisePair(0, 1, 1));
  CHECK(left_time.exact);
  CHECK(left_time.value == doctest::Approx(1.0 / 12.0).epsilon(1e-10));

  const MomentTheory right_time = remainder_second_moment(mat, NoisePair(1, 0, 1));
  CHECK(right_time.exact);
  CHECK(right_time.value == doctest::Approx(1.0 / 12.0).epsilon(1e-10));

  const MomentTheory both_time = remainder_second_moment(mat, NoisePair(0, 0, 1));
  CHECK(both_time.exact);
  CHECK(both_time.value == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));

  // One degree of truncation captures the linear partially-integrated kernel
  // exactly, so the time-component moment collapses to zero.
  const MomentTheory captured = remainder_second_moment(unit_matrix(1), NoisePair(0, 1, 1));
  CHECK(captured.value == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}
