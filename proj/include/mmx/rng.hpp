/**
 * @file rng.hpp
 * @brief Deterministic random number generation.
 *
 * Reproducibility contract: the same seed yields the same stream of draws on
 * every platform. std::mt19937_64 is bit-exact by specification, but the
 * standard library's distributions are implementation-defined, so this class
 * maps raw engine output to doubles itself: uniforms via (x >> 11) * 2^-53
 * and normals via the Box-Muller transform (one cached spare per pair).
 * Matrices are filled column by column.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "mmx/point.hpp"

namespace mmx {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform draw in [0, 1) with 53 random mantissa bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n) by rejection (no modulo bias).
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n == 0) throw ConfigError("Rng: uniform_index(0)");
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  /// Standard normal via Box-Muller; draws two uniforms per pair.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  Vector normal_vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  /// Column-major fill order (column j complete before column j+1).
  Matrix normal_matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = normal();
    return m;
  }

  Matrix uniform_matrix(Index rows, Index cols, double lo = 0.0,
                        double hi = 1.0) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = uniform(lo, hi);
    return m;
  }

  /// Derives an independent child seed (e.g. one per sweep cell) via a
  /// SplitMix64 finalizer over (seed, stream) so cells never share streams.
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mmx
