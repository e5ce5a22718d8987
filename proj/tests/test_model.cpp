#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "stochint/interval.hpp"
#include "stochint/kernels.hpp"
#include "stochint/noise.hpp"
#include "stochint/weight.hpp"

using namespace stochint;

TEST_CASE("interval validates orientation and measures length") {
  CHECK_THROWS_AS(Interval(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Interval(2.0, 1.0), std::invalid_argument);
  const Interval iv(2.0, 5.0);
  CHECK(iv.length() == 3.0);
  CHECK(iv.contains(2.0));
  CHECK(iv.contains(5.0));
  CHECK(iv.contains(5.0 + 1e-13));
  CHECK_FALSE(iv.contains(5.1));
  CHECK_FALSE(iv.contains(1.9));
}

TEST_CASE("weight evaluation on the built-in kinds") {
  const Interval iv(0.0, 1.0);
  CHECK(WeightFunction::constant(1.0).value(0.3, iv) == 1.0);
  CHECK(WeightFunction::polynomial({0.0, 1.0}).value(0.25, iv) == 0.25);
  CHECK(WeightFunction::polynomial({1.0, 2.0, 3.0}).value(0.5, iv) == doctest::Approx(2.75).epsilon(1e-15));

  // Polynomial argument is (s - t0), not s.
  const Interval shifted(2.0, 4.0);
  CHECK(WeightFunction::polynomial({0.0, 1.0}).value(2.5, shifted) == 0.5);

  CHECK_THROWS_AS(WeightFunction::constant(1.0).value(1.5, iv), std::domain_error);
  CHECK_THROWS_AS(WeightFunction::constant(1.0).value(-0.1, iv), std::domain_error);
  CHECK(WeightFunction::constant(2.0).value(1.0 + 1e-13, iv) == 2.0);
}

TEST_CASE("custom weights evaluate through the extension point") {
  const Interval iv(0.0, 2.0);
  const auto w = WeightFunction::custom(
      [](double s, const Interval&) { return std::exp(s); }, std::exp(2.0), "exp");
  CHECK_FALSE(w.is_polynomial());
  CHECK(w.value(1.0, iv) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  CHECK(w.descriptor() == "custom:exp");
  CHECK_THROWS_AS(WeightFunction::custom(nullptr, 1.0), std::invalid_argument);
}

TEST_CASE("weight descriptors round-trip through the parser") {
  CHECK(WeightFunction::parse("const:1").descriptor() == "const:1");
  CHECK(WeightFunction::parse("const:2.5").descriptor() == "const:2.5");
  CHECK(WeightFunction::parse("poly:0,1").descriptor() == "poly:0,1");
  CHECK(WeightFunction::parse("poly:1,2.5e-1").descriptor() == "poly:1,0.25");

  const auto w = WeightFunction::parse("poly:1,2,3");
  CHECK(w.kind() == WeightFunction::Kind::kPolynomial);
  CHECK(w.coefficients() == std::vector<double>{1.0, 2.0, 3.0});

  CHECK_THROWS_AS(WeightFunction::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(WeightFunction::parse("poly:"), std::invalid_argument);
  CHECK_THROWS_AS(WeightFunction::parse("foo:1"), std::invalid_argument);
  CHECK_THROWS_AS(WeightFunction::parse("const:abc"), std::invalid_argument);
  CHECK_THROWS_AS(WeightFunction::parse("poly:1,,2"), std::invalid_argument);
  CHECK_THROWS_AS(WeightFunction::parse("const:1 "), std::invalid_argument);
}

TEST_CASE("kernel K is the strict lower-triangle product") {
  const Interval iv(0.0, 1.0);
  const auto one = WeightFunction::constant(1.0);
  const auto id = WeightFunction::polynomial({0.0, 1.0});

  CHECK(kernel_k(one, one, 0.2, 0.8, iv) == 1.0);
  CHECK(kernel_k(one, one, 0.8, 0.2, iv) == 0.0);
  CHECK(kernel_k(one, one, 0.5, 0.5, iv) == 0.0);
  CHECK(kernel_k(id, one, 0.5, 0.9, iv) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("kernel K* adds exactly half the product on the diagonal") {
  const Interval iv(0.0, 1.0);
  const auto one = WeightFunction::constant(1.0);
  const auto id = WeightFunction::polynomial({0.0, 1.0});

  CHECK(kernel_kstar(one, one, 0.5, 0.5, iv) == 0.5);
  CHECK(kernel_kstar(one, one, 0.2, 0.8, iv) == 1.0);
  CHECK(kernel_kstar(id, id, 0.4, 0.4, iv) == doctest::Approx(0.08).epsilon(1e-15));

  for (double x1 : {0.1, 0.35, 0.9}) {
    for (double x2 : {0.2, 0.6, 0.85}) {
      CHECK(kernel_kstar(id, one, x1, x2, iv) == kernel_k(id, one, x1, x2, iv));
    }
  }
  for (double x : {0.0, 0.3, 1.0}) {
    CHECK(kernel_kstar(id, id, x, x, iv) == 0.5 * x * x);
  }
}

TEST_CASE("noise pairs validate their component range") {
  CHECK_THROWS_AS(NoisePair(0, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(NoisePair(-1, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(NoisePair(0, 2, 1), std::invalid_argument);

  CHECK(NoisePair(1, 1, 1).equal_nonzero());
  CHECK_FALSE(NoisePair(0, 0, 1).equal_nonzero());
  CHECK_FALSE(NoisePair(1, 2, 2).equal_nonzero());
}
