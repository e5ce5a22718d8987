#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace stochint::rng {

// Counter-based generation: every random quantity is a pure function of a
// 64-bit key derived from (seed, purpose, indices...). Enlarging any index
// range therefore never perturbs previously drawn values, and identical seeds
// reproduce bit-identical streams.

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix(std::uint64_t x) {
  x += kGamma;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive(std::uint64_t key, std::uint64_t index) {
  return mix(key ^ (index * 0xD1342543DE82EF95ull + 0x63652362B55EAD03ull));
}

template <class... Rest>
inline std::uint64_t derive(std::uint64_t key, std::uint64_t index, Rest... rest) {
  return derive(derive(key, index), rest...);
}

// Uniform in the open interval (0, 1); 53 mantissa bits, never exactly 0.
inline double uniform01(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal via Box-Muller from two independently mixed words.
inline double gaussian(std::uint64_t key) {
  const double u1 = uniform01(mix(key ^ 0x243F6A8885A308D3ull));
  const double u2 = uniform01(mix(key ^ 0x13198A2E03707344ull));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Both Box-Muller outputs of one key; the bulk path sampler consumes pairs.
struct GaussPair {
  double first;
  double second;
};

inline GaussPair gaussian_pair(std::uint64_t key) {
  const double u1 = uniform01(mix(key ^ 0x243F6A8885A308D3ull));
  const double u2 = uniform01(mix(key ^ 0x13198A2E03707344ull));
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  return GaussPair{rad * std::cos(ang), rad * std::sin(ang)};
}

// Purpose tags keep independent consumers of the same seed decorrelated.
enum : std::uint64_t {
  kPurposeExpansionDraws = 1,
  kPurposePathLeaves = 2,
  kPurposeSampleSeeds = 3,
  kPurposePathSeeds = 4,
};

}  // namespace stochint::rng
