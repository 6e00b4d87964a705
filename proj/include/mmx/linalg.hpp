/**
 * @file linalg.hpp
 * @brief Singular-value helpers shared by sets, metrics, and problems.
 */
#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>

#include "mmx/point.hpp"
#include "mmx/rng.hpp"

namespace mmx {

struct SingularTriple {
  Vector u;      ///< left singular vector (rows)
  Vector v;      ///< right singular vector (cols)
  double sigma;  ///< leading singular value
};

namespace detail {

/// Dimension at or below which a full Jacobi SVD is used instead of power
/// iteration. Jacobi is exact and fast for small blocks.
inline constexpr Index kDenseSvdLimit = 64;
/// Relative convergence tolerance of the power iteration.
inline constexpr double kPowerIterTol = 1e-10;
/// Iteration cap of the power iteration.
inline constexpr int kPowerIterMax = 10000;
/// Fixed seed so repeated leading-triple computations are bit-identical.
inline constexpr std::uint64_t kPowerIterSeed = 0x5eed5eed5eed5eedull;

/// Leading singular triple of a dense matrix. Small matrices use a full
/// Jacobi SVD; larger ones use alternating power iteration from a seeded
/// deterministic start (tolerance kPowerIterTol on the relative change of
/// the singular-value estimate, capped at kPowerIterMax rounds).
inline SingularTriple top_singular_triple(const Matrix& m) {
  const Index rows = m.rows();
  const Index cols = m.cols();
  if (rows == 0 || cols == 0) {
    throw ConfigError("top_singular_triple: empty matrix");
  }
  if (std::max(rows, cols) <= kDenseSvdLimit) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SingularTriple t;
    t.sigma = svd.singularValues()[0];
    t.u = svd.matrixU().col(0);
    t.v = svd.matrixV().col(0);
    return t;
  }

  Rng rng(kPowerIterSeed);
  Vector v = rng.normal_vector(cols);
  v.normalize();
  Vector u = Vector::Zero(rows);
  double sigma = 0.0;
  for (int it = 0; it < kPowerIterMax; ++it) {
    u.noalias() = m * v;
    const double nu = u.norm();
    if (nu == 0.0) {
      // v landed in the null space; the matrix may be zero.
      SingularTriple t;
      t.sigma = 0.0;
      t.u = Vector::Unit(rows, 0);
      t.v = Vector::Unit(cols, 0);
      return t;
    }
    u /= nu;
    v.noalias() = m.transpose() * u;
    const double next_sigma = v.norm();
    if (next_sigma == 0.0) {
      SingularTriple t;
      t.sigma = 0.0;
      t.u = Vector::Unit(rows, 0);
      t.v = Vector::Unit(cols, 0);
      return t;
    }
    v /= next_sigma;
    if (std::abs(next_sigma - sigma) <= kPowerIterTol * std::max(1.0, next_sigma)) {
      sigma = next_sigma;
      break;
    }
    sigma = next_sigma;
  }
  SingularTriple t;
  t.sigma = sigma;
  t.u = std::move(u);
  t.v = std::move(v);
  return t;
}

/// Spectral norm (largest singular value).
inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return top_singular_triple(m).sigma;
}

/// Nuclear norm (sum of singular values); full SVD.
inline double nuclear_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

}  // namespace detail
}  // namespace mmx
