/**
 * @file dictionary_learning.hpp
 * @brief Constrained dictionary learning as a nonconvex-linear saddle problem.
 *
 * Given old data A (m x n) with known sparse coefficients padded to
 * C_tilde (q x n), new data A' (m x n'), a reconstruction tolerance delta,
 * a nuclear-norm budget r, and a dual cap B, the payoff is
 *
 *   L((C', D'), y) = (1/2n')||A' - D'C'||_F^2
 *                  + y * ( (1/2n)||A - D'C_tilde||_F^2 - delta )
 *
 * over X = NuclearBall(q, n', r) x ColumnBallProduct(m, q, 1) and Y = [0, B].
 * The scalar multiplier y prices the constraint that the learned dictionary
 * keeps reconstructing the old data within delta. The payoff is nonconvex in
 * (C', D') (bilinear products) and affine in y, so the dual best response is
 * an endpoint of [0, B] and the regularized one is a clamp.
 *
 * Gradients:
 *   grad_{C'} = -(1/n') D'^T (A' - D'C')
 *   grad_{D'} = -(1/n')(A' - D'C') C'^T - (y/n)(A - D'C_tilde) C_tilde^T
 *   grad_y    = (1/2n)||A - D'C_tilde||_F^2 - delta
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <string>
#include <utility>

#include "mmx/linalg.hpp"
#include "mmx/point.hpp"
#include "mmx/problem.hpp"
#include "mmx/rng.hpp"
#include "mmx/sets.hpp"

namespace mmx {

/// Smoothness constants of the dictionary learning payoff over its feasible
/// set, from the Frobenius-norm bounds ||D'||_F <= sqrt(q), ||C'||_* <= r,
/// y <= B. Returns (Lxx, Lyx, Lyy) with Lyy = 0 (the payoff is affine in y).
struct DictionaryLearningConstants {
  double lipschitz_xx;
  double lipschitz_yx;
  double lipschitz_yy;
};

inline DictionaryLearningConstants lipschitz_dl(const Matrix& A,
                                                const Matrix& A_prime,
                                                const Matrix& C_tilde,
                                                double radius, Index q,
                                                double y_cap, Index n,
                                                Index n_prime) {
  const double a_norm = A.norm();
  const double ap_norm = A_prime.norm();
  const double ct_spec = detail::spectral_norm(C_tilde);
  const double rq = radius * std::sqrt(static_cast<double>(q));
  const double dn = static_cast<double>(n);
  const double dnp = static_cast<double>(n_prime);
  const double dq = static_cast<double>(q);

  const double d_block = std::sqrt(
      2.0 * (ap_norm + 2.0 * rq) * (ap_norm + 2.0 * rq) / (dnp * dnp) +
      3.0 * std::pow(radius * radius / dnp + y_cap * ct_spec * ct_spec / dn,
                     2));
  const double c_block =
      std::sqrt(2.0 * dq * dq + 3.0 * (ap_norm + 2.0 * rq) * (ap_norm + 2.0 * rq)) /
      dnp;
  const double lyx =
      std::sqrt(3.0) *
      (a_norm + std::sqrt(dq) * ct_spec) * ct_spec / dn;
  return {std::max(d_block, c_block), lyx, 0.0};
}

class DictionaryLearning final : public PayoffProblem {
 public:
  /// Point layout: block 0 = C' (q x n', nuclear ball), block 1 = D'
  /// (m x q, unit column balls). The dual variable is the scalar y in [0, B].
  DictionaryLearning(Matrix A, Matrix A_prime, Matrix C_tilde, double delta,
                     double radius, double y_cap)
      : A_(std::move(A)),
        A_prime_(std::move(A_prime)),
        C_tilde_(std::move(C_tilde)),
        delta_(delta),
        radius_(radius),
        y_cap_(y_cap) {
    if (!(delta_ > 0)) {
      throw ConfigError("DictionaryLearning: delta must be positive");
    }
    if (!(radius_ > 0) || !(y_cap_ > 0)) {
      throw ConfigError(
          "DictionaryLearning: radius and dual cap must be positive");
    }
    if (A_.rows() != A_prime_.rows()) {
      throw ConfigError(
          "DictionaryLearning: A and A' must have the same row count");
    }
    if (C_tilde_.cols() != A_.cols()) {
      throw ConfigError(
          "DictionaryLearning: C_tilde must have one column per column of A");
    }
    if (C_tilde_.norm() == 0.0) {
      throw ConfigError(
          "DictionaryLearning: C_tilde must be nonzero (a zero coefficient "
          "matrix makes the dual coupling degenerate)");
    }
    const Index m = A_.rows();
    const Index q = C_tilde_.rows();
    const Index n_prime = A_prime_.cols();
    x_set_ = std::make_shared<Product>(std::vector<SetPtr>{
        std::make_shared<NuclearBall>(q, n_prime, radius_),
        std::make_shared<ColumnBallProduct>(m, q, 1.0)});
    y_set_ = std::make_shared<Interval>(0.0, y_cap_);
    const auto k =
        lipschitz_dl(A_, A_prime_, C_tilde_, radius_, q, y_cap_, A_.cols(),
                     n_prime);
    lipschitz_xx_ = k.lipschitz_xx;
    lipschitz_yx_ = k.lipschitz_yx;
    initial_x_ = x_set_->canonical_point();
  }

  /// Same problem with a caller-supplied starting point for the primal block
  /// (the generator's small random dictionary; a zero start is stationary).
  DictionaryLearning(Matrix A, Matrix A_prime, Matrix C_tilde, double delta,
                     double radius, double y_cap, Point initial_x)
      : DictionaryLearning(std::move(A), std::move(A_prime),
                           std::move(C_tilde), delta, radius, y_cap) {
    if (!x_set_->contains(initial_x, kMembershipTol)) {
      throw ConfigError("DictionaryLearning: initial_x is not feasible");
    }
    initial_x_ = std::move(initial_x);
  }

  const FeasibleSet& x_set() const override { return *x_set_; }
  const FeasibleSet& y_set() const override { return *y_set_; }

  double value(const Point& x, const Point& y) const override {
    auto [Cp, Dp] = split(x);
    const double fit_new = (A_prime_ - Dp * Cp).squaredNorm() /
                           (2.0 * static_cast<double>(A_prime_.cols()));
    const double fit_old = (A_ - Dp * C_tilde_).squaredNorm() /
                           (2.0 * static_cast<double>(A_.cols()));
    return fit_new + y.scalar() * (fit_old - delta_);
  }

  Point grad_x(const Point& x, const Point& y) const override {
    auto [Cp, Dp] = split(x);
    const double inv_np = 1.0 / static_cast<double>(A_prime_.cols());
    const double inv_n = 1.0 / static_cast<double>(A_.cols());
    Matrix resid_new = A_prime_ - Dp * Cp;
    Matrix grad_c = -inv_np * Dp.transpose() * resid_new;
    Matrix grad_d = -inv_np * resid_new * Cp.transpose() -
                    (y.scalar() * inv_n) * (A_ - Dp * C_tilde_) *
                        C_tilde_.transpose();
    return Point::concat({Point::of_matrix(std::move(grad_c)),
                          Point::of_matrix(std::move(grad_d))});
  }

  Point grad_y(const Point& x, const Point& y) const override {
    (void)y;
    return Point::of_scalar(constraint_slack(x));
  }

  double lipschitz_xx() const override { return lipschitz_xx_; }
  double lipschitz_yx() const override { return lipschitz_yx_; }
  double lipschitz_yy() const override { return 0.0; }
  double concavity_mu() const override { return 0.0; }
  bool convex_in_x() const override { return false; }

  Point initial_x() const override { return initial_x_; }
  Point initial_y() const override { return Point::of_scalar(0.0); }

  bool has_best_response_y() const override { return true; }
  bool has_smoothed_best_response_y() const override { return true; }

  /// L is affine in y, so the maximizer is an endpoint of [0, B]; ties at
  /// zero slack resolve to 0.
  Point best_response_y(const Point& x) const override {
    return Point::of_scalar(constraint_slack(x) > 0.0 ? y_cap_ : 0.0);
  }

  /// max over [0, B] of y*g - (beta/2)(y - y0)^2 = clamp(y0 + g/beta).
  Point smoothed_best_response_y(const Point& x, double beta,
                                 const Point& y0) const override {
    if (!(beta > 0)) {
      throw ConfigError(
          "DictionaryLearning: smoothed best response needs beta > 0");
    }
    const double target = y0.scalar() + constraint_slack(x) / beta;
    return Point::of_scalar(std::clamp(target, 0.0, y_cap_));
  }

  std::map<std::string, double> metadata() const override {
    return {{"m", static_cast<double>(A_.rows())},
            {"n", static_cast<double>(A_.cols())},
            {"q", static_cast<double>(C_tilde_.rows())},
            {"n_prime", static_cast<double>(A_prime_.cols())},
            {"delta", delta_},
            {"radius", radius_},
            {"y_cap", y_cap_}};
  }

  std::string describe() const override {
    std::ostringstream os;
    os << "DictionaryLearning(m=" << A_.rows() << ", n=" << A_.cols()
       << ", q=" << C_tilde_.rows() << ", n'=" << A_prime_.cols() << ")";
    return os.str();
  }

  const Matrix& old_data() const { return A_; }
  const Matrix& new_data() const { return A_prime_; }
  const Matrix& padded_coefficients() const { return C_tilde_; }
  double delta() const { return delta_; }

 private:
  std::pair<Eigen::Map<const Matrix>, Eigen::Map<const Matrix>> split(
      const Point& x) const {
    return {x.block_as_matrix(0), x.block_as_matrix(1)};
  }

  double constraint_slack(const Point& x) const {
    auto [Cp, Dp] = split(x);
    (void)Cp;
    return (A_ - Dp * C_tilde_).squaredNorm() /
               (2.0 * static_cast<double>(A_.cols())) -
           delta_;
  }

  Matrix A_;
  Matrix A_prime_;
  Matrix C_tilde_;
  double delta_;
  double radius_;
  double y_cap_;
  double lipschitz_xx_ = 0.0;
  double lipschitz_yx_ = 0.0;
  std::shared_ptr<Product> x_set_;
  SetPtr y_set_;
  Point initial_x_;
};

/// Raw matrices produced by the synthetic dictionary learning generator.
struct DictionaryLearningData {
  Matrix A;        ///< old data, m x n, equal to D * C by construction
  Matrix A_prime;  ///< new data, m x n', i.i.d. Gaussian
  Matrix C_tilde;  ///< coefficients zero-padded to q rows, q x n
  Matrix D0;       ///< starting dictionary, m x q, small and column-normalized
  Matrix C0;       ///< starting coefficients, q x n', all zero
};

/// Synthetic instance: A = D * C with D (m x p) Gaussian column-normalized
/// and C = U V^T / (||U||_2 ||V||_2) for Gaussian U (p x l), V (n x l), so
/// ||C||_2 <= 1 and rank(C) <= l. C is zero-padded to q >= p rows. The
/// starting dictionary has entries uniform on [0, 0.1], columns normalized.
inline DictionaryLearningData dl_generate(Index m, Index n, Index p, Index l,
                                          Index q, Index n_prime, Rng& rng) {
  if (m < 1 || n < 1 || p < 1 || l < 1 || q < 1 || n_prime < 1) {
    throw ConfigError("dl_generate: all dimensions must be >= 1");
  }
  if (p > q) {
    throw ConfigError("dl_generate: need p <= q to pad coefficients");
  }
  Matrix D = rng.normal_matrix(m, p);
  for (Index j = 0; j < p; ++j) D.col(j).normalize();
  Matrix U = rng.normal_matrix(p, l);
  Matrix V = rng.normal_matrix(n, l);
  Matrix C = U * V.transpose() /
             (detail::spectral_norm(U) * detail::spectral_norm(V));

  DictionaryLearningData data;
  data.A = D * C;
  data.A_prime = rng.normal_matrix(m, n_prime);
  data.C_tilde = Matrix::Zero(q, n);
  data.C_tilde.topRows(p) = C;
  data.D0 = rng.uniform_matrix(m, q) * 0.1;
  for (Index j = 0; j < q; ++j) data.D0.col(j).normalize();
  data.C0 = Matrix::Zero(q, n_prime);
  return data;
}

/// Sizes of a generated instance; `desk()` is the small testing size and
/// `benchmark()` the full-scale size used by the reference experiments.
struct DictionaryLearningSizes {
  Index m, n, p, l, q, n_prime;
  static DictionaryLearningSizes desk() { return {20, 50, 10, 3, 12, 20}; }
  static DictionaryLearningSizes benchmark() {
    return {100, 500, 50, 5, 60, 103};
  }
};

/// Generates data and assembles the problem with defaults delta = 1e-4,
/// r = 5, B = 1 and the generator's starting point (C0 = 0, D0 small).
inline DictionaryLearning make_dictionary_learning(
    const DictionaryLearningSizes& sz, std::uint64_t seed, double delta = 1e-4,
    double radius = 5.0, double y_cap = 1.0) {
  Rng rng(seed);
  DictionaryLearningData data =
      dl_generate(sz.m, sz.n, sz.p, sz.l, sz.q, sz.n_prime, rng);
  Point x0 = Point::concat(
      {Point::of_matrix(data.C0), Point::of_matrix(data.D0)});
  return DictionaryLearning(std::move(data.A), std::move(data.A_prime),
                            std::move(data.C_tilde), delta, radius, y_cap,
                            std::move(x0));
}

}  // namespace mmx
