#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

#include "stochint/basis.hpp"
#include "stochint/coefficients.hpp"
#include "stochint/noise.hpp"
#include "stochint/weight.hpp"

namespace stochint {

// Independent discretized-path machinery used to validate the expansion; it
// deliberately shares no integration code with the coefficient module.

// Uniform dyadic partition of [t0, t1] into n subintervals with left
// endpoints tau_k = t0 + k*dt. Row i-1 of dw holds the increments of Wiener
// component i; the time component (i = 0) is implicit with increment dt.
//
// Increments are canonical pairwise-tree reductions of i.i.d. N(0, L/2^13)
// leaf Gaussians keyed by (seed, component, leaf). Consequences: the law of
// each increment is exactly N(0, dt); sample_path(2n) summed pairwise equals
// sample_path(n) bitwise for the same seed; n is capped at 2^13.
struct DiscretePath {
  Interval iv;
  int m;
  int n;
  std::uint64_t seed;
  Eigen::MatrixXd dw;  // m x n

  double dt() const { return iv.length() / n; }
  double left_endpoint(int k) const { return iv.t0 + k * dt(); }
  // Increment of component i over subinterval k (i = 0 is the time row).
  double increment(int i, int k) const { return i == 0 ? dt() : dw(i - 1, k); }
};

inline constexpr int kMaxPathSubintervals = 1 << 13;

DiscretePath sample_path(const Interval& iv, int m, int n, std::uint64_t seed);

// Same randomness on the twice-coarser grid: exact pairwise sums.
DiscretePath coarsen(const DiscretePath& path);

// Continuous kernel on the square, assumed bounded.
struct Kernel2D {
  std::function<double(double, double)> f;
  double operator()(double x1, double x2) const { return f(x1, x2); }
};

// Left-endpoint prelimit sum of the iterated integral:
//   sum_{k2} psi2(tau_{k2}) dw^{(i2)}_{k2} sum_{k1 < k2} psi1(tau_{k1}) dw^{(i1)}_{k1}.
double prelimit_iterated(const DiscretePath& path, const WeightFunction& w1,
                         const WeightFunction& w2, const NoisePair& pair);

// Full-square prelimit sum sum_{k1,k2} Phi(tau_{k1}, tau_{k2}) dw dw.
double prelimit_multiple(const DiscretePath& path, const Kernel2D& kern,
                         const NoisePair& pair);

// Discretized zeta_j^{(i)} = sum_k phi_j(tau_k) dw^{(i)}_k.
double zeta_from_path(const DiscretePath& path, const BasisSystem& b, int j, int i);

struct ExperimentConfig {
  WeightFunction w1;
  WeightFunction w2;
  BasisSystem basis;
  int p1;
  int p2;
  NoisePair pair;
  int n;
  int paths;
  std::uint64_t seed;
  int threads = 1;
};

struct ExperimentResult {
  double mean_sq_diff;   // Monte Carlo estimate of E[(J* - truncated)^2]
  double std_error;      // standard error of that estimate
  double theory;         // remainder-module theory value
  bool theory_exact;     // false when theory is the equal-pair upper bound
  double half_n_mean;    // same estimate on the pairwise-coarsened paths
  bool bias_flagged;     // |half_n_mean - mean| > 2 * std_error
  int n;
  int paths;
};

// Couples the prelimit oracle to the truncated expansion path-by-path: both
// are built from the same DiscretePath, the squared gap is averaged, and the
// result is compared against the remainder-module theory (exact for any pair
// of distinct components, upper bound for equal nonzero components).
ExperimentResult coupled_error_experiment(const ExperimentConfig& config,
                                          const CoeffMatrix* prebuilt = nullptr);

}  // namespace stochint
