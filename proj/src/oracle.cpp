#include "stochint/oracle.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "stochint/remainder.hpp"
#include "stochint/rng.hpp"

namespace stochint {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct KahanSum {
  double acc = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double y = x - comp;
    const double t = acc + y;
    comp = (t - acc) - y;
    acc = t;
  }
};

bool power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

void check_component(const DiscretePath& path, int i) {
  if (i < 0 || i > path.m) {
    throw std::invalid_argument("oracle: component index outside [0, m]");
  }
}

}  // namespace

DiscretePath sample_path(const Interval& iv, int m, int n, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("sample_path: need m >= 1");
  if (!power_of_two(n) || n > kMaxPathSubintervals) {
    throw std::invalid_argument("sample_path: n must be a power of two <= " +
                                std::to_string(kMaxPathSubintervals));
  }
  DiscretePath path{iv, m, n, seed, MatrixXd(m, n)};
  const int ref = kMaxPathSubintervals;
  const double leaf_sd = std::sqrt(iv.length() / ref);
  std::vector<double> buf(ref);
  for (int i = 1; i <= m; ++i) {
    for (int k = 0; k < ref; k += 2) {
      const auto g =
          rng::gaussian_pair(rng::derive(seed, rng::kPurposePathLeaves, i, k / 2));
      buf[k] = leaf_sd * g.first;
      buf[k + 1] = leaf_sd * g.second;
    }
    // Canonical binary-tree reduction; every coarser level is the exact
    // pairwise sum of the next finer one, which is the coupling contract.
    for (int len = ref; len > n; len /= 2) {
      for (int k = 0; k < len / 2; ++k) buf[k] = buf[2 * k] + buf[2 * k + 1];
    }
    for (int k = 0; k < n; ++k) path.dw(i - 1, k) = buf[k];
  }
  return path;
}

DiscretePath coarsen(const DiscretePath& path) {
  if (path.n < 2) throw std::invalid_argument("coarsen: need n >= 2");
  DiscretePath out{path.iv, path.m, path.n / 2, path.seed, MatrixXd(path.m, path.n / 2)};
  for (int i = 0; i < path.m; ++i) {
    for (int k = 0; k < out.n; ++k) {
      out.dw(i, k) = path.dw(i, 2 * k) + path.dw(i, 2 * k + 1);
    }
  }
  return out;
}

double prelimit_iterated(const DiscretePath& path, const WeightFunction& w1,
                         const WeightFunction& w2, const NoisePair& pair) {
  check_component(path, pair.i1);
  check_component(path, pair.i2);
  KahanSum acc;
  double running = 0.0;  // sum_{k1 < k2} psi1(tau_{k1}) dw^{(i1)}_{k1}
  for (int k2 = 0; k2 < path.n; ++k2) {
    const double tau = path.left_endpoint(k2);
    acc.add(w2.value(tau, path.iv) * path.increment(pair.i2, k2) * running);
    running += w1.value(tau, path.iv) * path.increment(pair.i1, k2);
  }
  return acc.acc;
}

double prelimit_multiple(const DiscretePath& path, const Kernel2D& kern,
                         const NoisePair& pair) {
  check_component(path, pair.i1);
  check_component(path, pair.i2);
  if (!kern.f) throw std::invalid_argument("prelimit_multiple: null kernel");
  const int n = path.n;
  std::vector<double> tau(n), d1(n), d2(n);
  for (int k = 0; k < n; ++k) {
    tau[k] = path.left_endpoint(k);
    d1[k] = path.increment(pair.i1, k);
    d2[k] = path.increment(pair.i2, k);
  }
  KahanSum acc;
  for (int k1 = 0; k1 < n; ++k1) {
    for (int k2 = 0; k2 < n; ++k2) {
      acc.add(kern(tau[k1], tau[k2]) * d1[k1] * d2[k2]);
    }
  }
  return acc.acc;
}

double zeta_from_path(const DiscretePath& path, const BasisSystem& b, int j, int i) {
  check_component(path, i);
  KahanSum acc;
  for (int k = 0; k < path.n; ++k) {
    acc.add(phi(b, j, path.left_endpoint(k)) * path.increment(i, k));
  }
  return acc.acc;
}

namespace {

// Per-grid cache: basis rows, weight values, and the deterministic zeta row
// at the left endpoints of an n-subinterval partition.
struct GridTables {
  MatrixXd basis;   // (jmax+1) x n
  VectorXd psi1;    // n
  VectorXd psi2;    // n
  VectorXd zeta0;   // jmax+1, time-component zetas (dt-weighted row sums)
  double dt;
};

GridTables build_tables(const ExperimentConfig& cfg, int jmax, int n) {
  GridTables t;
  t.dt = cfg.basis.iv.length() / n;
  t.basis.resize(jmax + 1, n);
  t.psi1.resize(n);
  t.psi2.resize(n);
  for (int k = 0; k < n; ++k) {
    const double tau = cfg.basis.iv.t0 + k * t.dt;
    for (int j = 0; j <= jmax; ++j) t.basis(j, k) = phi(cfg.basis, j, tau);
    t.psi1[k] = cfg.w1.value(tau, cfg.basis.iv);
    t.psi2[k] = cfg.w2.value(tau, cfg.basis.iv);
  }
  t.zeta0 = t.basis.rowwise().sum() * t.dt;
  return t;
}

double prelimit_from_tables(const DiscretePath& path, const GridTables& t,
                            const NoisePair& pair) {
  KahanSum acc;
  double running = 0.0;
  for (int k = 0; k < path.n; ++k) {
    acc.add(t.psi2[k] * path.increment(pair.i2, k) * running);
    running += t.psi1[k] * path.increment(pair.i1, k);
  }
  return acc.acc;
}

VectorXd zeta_vector(const DiscretePath& path, const GridTables& t, int i, int p) {
  if (i == 0) return t.zeta0.head(p + 1);
  return t.basis.topRows(p + 1) * path.dw.row(i - 1).transpose();
}

double squared_gap(const DiscretePath& path, const GridTables& t,
                   const CoeffMatrix& mat, const NoisePair& pair,
                   double correction) {
  const double j_star = prelimit_from_tables(path, t, pair) + correction;
  const VectorXd z1 = zeta_vector(path, t, pair.i1, mat.p1());
  const VectorXd z2 = zeta_vector(path, t, pair.i2, mat.p2());
  const double truncated = z1.dot(mat.values * z2);
  const double d = j_star - truncated;
  return d * d;
}

struct ChunkSums {
  double sum2 = 0.0;
  double sum4 = 0.0;
  double sum2_half = 0.0;
};

}  // namespace

ExperimentResult coupled_error_experiment(const ExperimentConfig& cfg,
                                          const CoeffMatrix* prebuilt) {
  if (cfg.paths < 2) throw std::invalid_argument("coupled_error_experiment: need paths >= 2");
  if (!power_of_two(cfg.n) || cfg.n < 2 || cfg.n > kMaxPathSubintervals) {
    throw std::invalid_argument("coupled_error_experiment: n must be a power of two in [2, " +
                                std::to_string(kMaxPathSubintervals) + "]");
  }
  const CoeffMatrix mat = prebuilt
                              ? *prebuilt
                              : coeff_matrix(cfg.w1, cfg.w2, cfg.basis, cfg.p1, cfg.p2);
  if (mat.p1() != cfg.p1 || mat.p2() != cfg.p2) {
    throw std::invalid_argument("coupled_error_experiment: prebuilt matrix shape mismatch");
  }
  const MomentTheory theory = remainder_second_moment(mat, cfg.pair);
  const double correction =
      cfg.pair.equal_nonzero() ? 0.5 * mat.meta.weight_product : 0.0;
  const int jmax = std::max(cfg.p1, cfg.p2);
  const GridTables fine = build_tables(cfg, jmax, cfg.n);
  const GridTables half = build_tables(cfg, jmax, cfg.n / 2);

  constexpr int kChunk = 1024;
  const int chunks = (cfg.paths + kChunk - 1) / kChunk;
  std::vector<ChunkSums> partial(chunks);

  auto run_chunk = [&](int c) {
    KahanSum s2, s4, s2h;
    const int lo = c * kChunk;
    const int hi = std::min(cfg.paths, lo + kChunk);
    for (int t = lo; t < hi; ++t) {
      const std::uint64_t pseed = rng::derive(cfg.seed, rng::kPurposePathSeeds,
                                              static_cast<std::uint64_t>(t));
      const DiscretePath path = sample_path(cfg.basis.iv, cfg.pair.m, cfg.n, pseed);
      const double d2 = squared_gap(path, fine, mat, cfg.pair, correction);
      s2.add(d2);
      s4.add(d2 * d2);
      s2h.add(squared_gap(coarsen(path), half, mat, cfg.pair, correction));
    }
    partial[c] = ChunkSums{s2.acc, s4.acc, s2h.acc};
  };

  const int threads = std::max(1, cfg.threads);
  if (threads == 1) {
    for (int c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    // Fixed chunking keeps the reduction order (and thus the result)
    // independent of the worker count and of scheduling.
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (int c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
          run_chunk(c);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  KahanSum s2, s4, s2h;
  for (const auto& p : partial) {
    s2.add(p.sum2);
    s4.add(p.sum4);
    s2h.add(p.sum2_half);
  }
  const double mean = s2.acc / cfg.paths;
  const double var = std::max(0.0, s4.acc / cfg.paths - mean * mean);
  const double std_error = std::sqrt(var / cfg.paths);
  const double half_mean = s2h.acc / cfg.paths;
  const bool flagged = std::abs(half_mean - mean) > 2.0 * std_error;
  return ExperimentResult{mean,      std_error, theory.value, theory.exact,
                          half_mean, flagged,   cfg.n,        cfg.paths};
}

}  // namespace stochint
