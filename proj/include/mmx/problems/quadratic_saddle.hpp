/**
 * @file quadratic_saddle.hpp
 * @brief Strongly convex/concave quadratic saddle over Euclidean balls.
 *
 * L(x, y) = (mu_x/2)||x - xhat||^2 + x^T B y - (mu_y/2)||y - yhat||^2
 * with x in an L2 ball and y in an L2 ball. When the unconstrained saddle
 * point lies strictly inside both balls the problem has a known solution,
 * which makes it the reference problem for convergence-rate checks: the
 * construction solves the 2x2 block linear system for (x*, y*) and refuses
 * configurations whose saddle is not safely interior.
 *
 * Curvature constants: Lxx = mu_x, Lyy = mu_y, Lyx = ||B||_2, mu = mu_y.
 */
#pragma once

#include <Eigen/Dense>
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

class QuadraticSaddle final : public PayoffProblem {
 public:
  /// Builds the problem and solves for the interior saddle point.
  /// Throws ConfigError if the saddle is not strictly inside both balls
  /// (within 99% of each radius), since the closed-form solution is the
  /// point of having this problem.
  QuadraticSaddle(double mu_x, double mu_y, Matrix coupling, Vector x_anchor,
                  Vector y_anchor, double x_radius, double y_radius)
      : mu_x_(mu_x),
        mu_y_(mu_y),
        coupling_(std::move(coupling)),
        x_anchor_(std::move(x_anchor)),
        y_anchor_(std::move(y_anchor)),
        coupling_norm_(detail::spectral_norm(coupling_)) {
    if (!(mu_x_ > 0) || !(mu_y_ > 0)) {
      throw ConfigError("QuadraticSaddle: mu_x and mu_y must be positive");
    }
    if (coupling_.rows() != x_anchor_.size() ||
        coupling_.cols() != y_anchor_.size()) {
      throw ConfigError("QuadraticSaddle: coupling matrix shape mismatch");
    }
    // First-order conditions of the unconstrained saddle:
    //   mu_x (x - xhat) + B y = 0,   B^T x - mu_y (y - yhat) = 0.
    // Eliminating x gives (I + B^T B / (mu_x mu_y)) y = yhat + B^T xhat / mu_x.
    const Index n = y_anchor_.size();
    Matrix lhs = Matrix::Identity(n, n) +
                 coupling_.transpose() * coupling_ / (mu_x_ * mu_y_);
    Vector rhs = y_anchor_ + coupling_.transpose() * x_anchor_ / mu_x_;
    y_star_ = lhs.ldlt().solve(rhs);
    x_star_ = x_anchor_ - coupling_ * y_star_ / mu_x_;
    if (x_star_.norm() > 0.99 * x_radius || y_star_.norm() > 0.99 * y_radius) {
      throw ConfigError(
          "QuadraticSaddle: unconstrained saddle point is not strictly "
          "interior to the feasible balls; enlarge the radii or shrink the "
          "anchors");
    }
    x_set_ = std::make_shared<L2Ball>(
        L2Ball::origin(x_anchor_.size(), x_radius));
    y_set_ = std::make_shared<L2Ball>(L2Ball::origin(n, y_radius));
  }

  /// Deterministic well-conditioned instance used by the rate benchmarks.
  static QuadraticSaddle reference(Index dim, std::uint64_t seed) {
    Rng rng(seed);
    Matrix B = rng.normal_matrix(dim, dim) / std::sqrt(double(dim));
    Vector xhat = 0.25 * rng.normal_vector(dim);
    Vector yhat = 0.25 * rng.normal_vector(dim);
    return QuadraticSaddle(1.0, 1.0, std::move(B), std::move(xhat),
                           std::move(yhat), 4.0, 4.0);
  }

  const FeasibleSet& x_set() const override { return *x_set_; }
  const FeasibleSet& y_set() const override { return *y_set_; }

  double value(const Point& x, const Point& y) const override {
    const Vector& xv = x.flat();
    const Vector& yv = y.flat();
    return 0.5 * mu_x_ * (xv - x_anchor_).squaredNorm() +
           xv.dot(coupling_ * yv) -
           0.5 * mu_y_ * (yv - y_anchor_).squaredNorm();
  }

  Point grad_x(const Point& x, const Point& y) const override {
    return Point::of_vector(mu_x_ * (x.flat() - x_anchor_) +
                            coupling_ * y.flat());
  }

  Point grad_y(const Point& x, const Point& y) const override {
    return Point::of_vector(coupling_.transpose() * x.flat() -
                            mu_y_ * (y.flat() - y_anchor_));
  }

  double lipschitz_xx() const override { return mu_x_; }
  double lipschitz_yx() const override { return coupling_norm_; }
  double lipschitz_yy() const override { return mu_y_; }
  double concavity_mu() const override { return mu_y_; }
  bool convex_in_x() const override { return true; }

  bool has_best_response_y() const override { return true; }
  bool has_smoothed_best_response_y() const override { return true; }
  bool has_best_response_x() const override { return true; }

  /// argmax_y L: isotropic quadratic, so project the unconstrained argmax.
  Point best_response_y(const Point& x) const override {
    Vector target = y_anchor_ + coupling_.transpose() * x.flat() / mu_y_;
    return y_set_->project(Point::of_vector(std::move(target)));
  }

  Point smoothed_best_response_y(const Point& x, double beta,
                                 const Point& y0) const override {
    if (!(beta + mu_y_ > 0)) {
      throw ConfigError("QuadraticSaddle: beta + mu must be positive");
    }
    Vector target = (mu_y_ * y_anchor_ + beta * y0.flat() +
                     coupling_.transpose() * x.flat()) /
                    (mu_y_ + beta);
    return y_set_->project(Point::of_vector(std::move(target)));
  }

  Point best_response_x(const Point& y) const override {
    Vector target = x_anchor_ - coupling_ * y.flat() / mu_x_;
    return x_set_->project(Point::of_vector(std::move(target)));
  }

  /// The saddle point computed at construction (strictly interior).
  const Vector& saddle_x() const { return x_star_; }
  const Vector& saddle_y() const { return y_star_; }
  double saddle_value() const {
    return value(Point::of_vector(x_star_), Point::of_vector(y_star_));
  }

  std::string describe() const override {
    std::ostringstream os;
    os << "QuadraticSaddle(dim_x=" << x_anchor_.size()
       << ", dim_y=" << y_anchor_.size() << ", mu_x=" << mu_x_
       << ", mu_y=" << mu_y_ << ")";
    return os.str();
  }

 private:
  double mu_x_;
  double mu_y_;
  Matrix coupling_;
  Vector x_anchor_;
  Vector y_anchor_;
  double coupling_norm_;
  Vector x_star_;
  Vector y_star_;
  SetPtr x_set_;
  SetPtr y_set_;
};

}  // namespace mmx
