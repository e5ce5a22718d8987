#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "stochint/expansion.hpp"
#include "support/simpson.hpp"

using namespace stochint;

namespace {

const Interval kUnit(0.0, 1.0);

WeightFunction one() { return WeightFunction::constant(1.0); }
WeightFunction ident() { return WeightFunction::polynomial({0.0, 1.0}); }

// E[z_a z_b z_c z_d] for independent standard normals, by Wick pairing.
double wick4(int a, int b, int c, int d) {
  return (a == b && c == d ? 1.0 : 0.0) + (a == c && b == d ? 1.0 : 0.0) +
         (a == d && b == c ? 1.0 : 0.0);
}

// Brute-force E[S^2] for S = sum C_{j2 j1} z_{j1} z_{j2} with one shared
// component; the quadruple loop stands in for any closed-form moment algebra.
double second_moment_equal(const Eigen::MatrixXd& v) {
  double acc = 0.0;
  for (int a = 0; a < v.rows(); ++a)
    for (int b = 0; b < v.cols(); ++b)
      for (int c = 0; c < v.rows(); ++c)
        for (int d = 0; d < v.cols(); ++d)
          acc += v(a, b) * v(c, d) * wick4(a, b, c, d);
  return acc;
}

double second_moment_distinct(const Eigen::MatrixXd& v) {
  double acc = 0.0;
  for (int a = 0; a < v.rows(); ++a)
    for (int b = 0; b < v.cols(); ++b) acc += v(a, b) * v(a, b);
  return acc;
}

template <class A, class B>
bool bits_equal(const A& a, const B& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         (a.array() == b.array()).all();
}

}  // namespace

TEST_CASE("deterministic zeta row") {
  const BasisSystem leg{BasisKind::kLegendre, kUnit};
  const Eigen::VectorXd z = deterministic_zeta0(leg, 3);
  REQUIRE(z.size() == 4);
  CHECK(z[0] == 1.0);
  CHECK(z[1] == 0.0);
  CHECK(z[2] == 0.0);
  CHECK(z[3] == 0.0);

  const BasisSystem wide{BasisKind::kLegendre, Interval(0.0, 4.0)};
  const Eigen::VectorXd zw = deterministic_zeta0(wide, 1);
  CHECK(zw[0] == 2.0);
  CHECK(zw[1] == 0.0);

  const BasisSystem trig{BasisKind::kTrigonometric, kUnit};
  const Eigen::VectorXd zt = deterministic_zeta0(trig, 2);
  CHECK(zt[0] == 1.0);
  CHECK(zt[1] == 0.0);
  CHECK(zt[2] == 0.0);
}

TEST_CASE("draw matrices are reproducible and extension-stable") {
  const BasisSystem leg{BasisKind::kLegendre, kUnit};
  const GaussianDraws a = make_draws(leg, 2, 3, 99);
  const GaussianDraws b = make_draws(leg, 2, 3, 99);
  CHECK(bits_equal(a.z, b.z));

  // Row 0 is the deterministic zeta row, bit for bit.
  CHECK(bits_equal(a.z.row(0).transpose(), deterministic_zeta0(leg, 3)));

  // Growing jmax or m extends the matrix without touching old entries.
  const GaussianDraws wider = make_draws(leg, 2, 6, 99);
  CHECK(bits_equal(wider.z.topLeftCorner(3, 4), a.z));
  const GaussianDraws taller = make_draws(leg, 4, 3, 99);
  CHECK(bits_equal(taller.z.topRows(3), a.z));

  const GaussianDraws other = make_draws(leg, 2, 3, 100);
  CHECK_FALSE(bits_equal(other.z.bottomRows(2), a.z.bottomRows(2)));
}

TEST_CASE("sample value for the all-deterministic pair") {
  const BasisSystem leg{BasisKind::kLegendre, kUnit};
  for (int p : {0, 3}) {
    const CoeffMatrix mat = coeff_matrix(one(), one(), leg, p, p);
    const GaussianDraws draws = make_draws(leg, 1, p, 5);
    const ExpansionSample s = sample_truncated(mat, draws, NoisePair(0, 0, 1));
    CHECK(s.stratonovich == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.ito == s.stratonovich);
  }
}

TEST_CASE("sample is bilinear in the draws and applies the correction") {
  const BasisSystem leg{BasisKind::kLegendre, kUnit};
  const CoeffMatrix mat = coeff_matrix(one(), one(), leg, 0, 0);

  GaussianDraws forced = make_draws(leg, 1, 0, 1);
  forced.z(1, 0) = 0.0;
  CHECK(sample_truncated(mat, forced, NoisePair(1, 1, 1)).stratonovich == 0.0);

  forced.z(1, 0) = 1.75;
  const ExpansionSample s = sample_truncated(mat, forced, NoisePair(1, 1, 1));
  CHECK(s.stratonovich == doctest::Approx(0.5 * 1.75 * 1.75).epsilon(1e-15));
  CHECK(s.ito == doctest::Approx(s.stratonovich - 0.5).epsilon(1e-15));

  // Distinct components carry no correction.
  const CoeffMatrix mat2 = coeff_matrix(one(), one(), leg, 2, 2);
  const GaussianDraws draws = make_draws(leg, 2, 2, 17);
  const ExpansionSample t = sample_truncated(mat2, draws, NoisePair(1, 2, 2));
  CHECK(t.ito == t.stratonovich);

  // Identical seeds give bit-identical samples.
  const ExpansionSample t2 =
      sample_truncated(mat2, make_draws(leg, 2, 2, 17), NoisePair(1, 2, 2));
  CHECK(t.stratonovich == t2.stratonovich);
  CHECK(t.ito == t2.ito);
}

TEST_CASE("sample rejects undersized draw matrices") {
  const BasisSystem leg{BasisKind::kLegendre, kUnit};
  const CoeffMatrix mat = coeff_matrix(one(), one(), leg, 2, 2);
  const GaussianDraws small = make_draws(leg, 1, 1, 3);
  CHECK_THROWS_AS(sample_truncated(mat, small, NoisePair(1, 1, 1)),
                  std::invalid_argument);
  const GaussianDraws draws = make_draws(leg, 1, 2, 3);
  CHECK_THROWS_AS(sample_truncated(mat, draws, NoisePair(1, 2, 2)),
                  std::invalid_argument);
}

TEST_CASE("expected values per component pair") {
  const BasisSystem leg{BasisKind::kLegendre, kUnit};
  for (int p : {0, 2, 5}) {
    const CoeffMatrix mat = coeff_matrix(one(), one(), leg, p, p);
    CHECK(expected_value(mat, NoisePair(1, 1, 1)) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(expected_value(mat, NoisePair(1, 2, 2)) == 0.0);
    CHECK(expected_value(mat, NoisePair(0, 1, 1)) == 0.0);
    CHECK(expected_value(mat, NoisePair(0, 0, 1)) == doctest::Approx(0.5).epsilon(1e-14));
  }
}

TEST_CASE("empirical moments match the wick oracle") {
  const BasisSystem leg{BasisKind::kLegendre, kUnit};
  const CoeffMatrix mat = coeff_matrix(ident(), ident(), leg, 2, 2);
  const NoisePair equal(1, 1, 1);
  const NoisePair distinct(1, 2, 2);

  testsupport::Accum strat_equal, sq_equal, strat_distinct, sq_distinct;
  for (int k = 0; k < 20000; ++k) {
    const GaussianDraws draws = make_draws(leg, 2, 2, 1000 + k);
    const double se = sample_truncated(mat, draws, equal).stratonovich;
    const double sd = sample_truncated(mat, draws, distinct).stratonovich;
    strat_equal.add(se);
    sq_equal.add(se * se);
    strat_distinct.add(sd);
    sq_distinct.add(sd * sd);
  }

  const double mean_theory = expected_value(mat, equal);
  CHECK(std::abs(strat_equal.mean() - mean_theory) <= 4.0 * strat_equal.std_error());
  CHECK(std::abs(strat_distinct.mean()) <= 4.0 * strat_distinct.std_error());

  const double m2_equal = second_moment_equal(mat.values);
  const double m2_distinct = second_moment_distinct(mat.values);
  CHECK(std::abs(sq_equal.mean() - m2_equal) <= 4.0 * sq_equal.std_error());
  CHECK(std::abs(sq_distinct.mean() - m2_distinct) <= 4.0 * sq_distinct.std_error());
}

TEST_CASE("wick variance of the truncated sum is monotone in p") {
  const BasisSystem leg{BasisKind::kLegendre, kUnit};
  const CoeffMatrix mat = coeff_matrix(ident(), ident(), leg, 2, 2);
  double prev_equal = -1.0, prev_distinct = -1.0;
  for (int p = 0; p <= 2; ++p) {
    const Eigen::MatrixXd sub = mat.values.topLeftCorner(p + 1, p + 1);
    double mean = 0.0;
    for (int j = 0; j <= p; ++j) mean += sub(j, j);
    const double var_equal = second_moment_equal(sub) - mean * mean;
    const double var_distinct = second_moment_distinct(sub);
    CHECK(var_equal >= prev_equal - 1e-14);
    CHECK(var_distinct >= prev_distinct - 1e-14);
    prev_equal = var_equal;
    prev_distinct = var_distinct;
  }
  CHECK(prev_equal > 0.0);
}
