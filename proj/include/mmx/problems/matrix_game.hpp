/**
 * @file matrix_game.hpp
 * @brief Bilinear game x^T A y over a pair of probability simplices.
 *
 * L(x, y) = x^T A y with x in Simplex(m), y in Simplex(n). The payoff is
 * linear in each argument, so Lxx = Lyy = 0, mu = 0, and the coupling
 * constant Lyx equals the spectral norm of A. Both best responses are
 * available in closed form (a simplex vertex), as is the regularized dual
 * best response (a simplex projection), which makes this the standard
 * smoke-test problem for the solvers and the duality-gap metric.
 */
#pragma once

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

class MatrixGame final : public PayoffProblem {
 public:
  explicit MatrixGame(Matrix payoff)
      : payoff_(std::move(payoff)),
        x_set_(std::make_shared<Simplex>(payoff_.rows())),
        y_set_(std::make_shared<Simplex>(payoff_.cols())),
        coupling_norm_(detail::spectral_norm(payoff_)) {
    if (payoff_.rows() < 1 || payoff_.cols() < 1) {
      throw ConfigError("MatrixGame: payoff matrix must be nonempty");
    }
  }

  /// Game with i.i.d. uniform[0,1) payoff entries.
  static MatrixGame random(Index rows, Index cols, std::uint64_t seed) {
    Rng rng(seed);
    return MatrixGame(rng.uniform_matrix(rows, cols));
  }

  const FeasibleSet& x_set() const override { return *x_set_; }
  const FeasibleSet& y_set() const override { return *y_set_; }

  double value(const Point& x, const Point& y) const override {
    return x.flat().dot(payoff_ * y.flat());
  }

  Point grad_x(const Point& x, const Point& y) const override {
    (void)x;
    return Point::of_vector(payoff_ * y.flat());
  }

  Point grad_y(const Point& x, const Point& y) const override {
    (void)y;
    return Point::of_vector(payoff_.transpose() * x.flat());
  }

  double lipschitz_xx() const override { return 0.0; }
  double lipschitz_yx() const override { return coupling_norm_; }
  double lipschitz_yy() const override { return 0.0; }
  double concavity_mu() const override { return 0.0; }
  bool convex_in_x() const override { return true; }

  /// Uniform vectors; a deterministic interior start.
  Point initial_x() const override { return x_set_->canonical_point(); }
  Point initial_y() const override { return y_set_->canonical_point(); }

  bool has_best_response_y() const override { return true; }
  bool has_smoothed_best_response_y() const override { return true; }
  bool has_best_response_x() const override { return true; }

  /// argmax_y x^T A y: vertex at the largest coordinate of A^T x.
  Point best_response_y(const Point& x) const override {
    return best_vertex(payoff_.transpose() * x.flat(), payoff_.cols());
  }

  /// argmax_y x^T A y - (beta/2)||y - y0||^2 = proj_simplex(y0 + A^T x / beta).
  Point smoothed_best_response_y(const Point& x, double beta,
                                 const Point& y0) const override {
    if (!(beta > 0)) {
      throw ConfigError("MatrixGame: smoothed best response needs beta > 0");
    }
    Vector target = y0.flat() + (payoff_.transpose() * x.flat()) / beta;
    return Point::of_vector(detail::project_capped_simplex(target, 1.0));
  }

  /// argmin_x x^T A y: vertex at the smallest coordinate of A y.
  Point best_response_x(const Point& y) const override {
    return best_vertex(-(payoff_ * y.flat()), payoff_.rows());
  }

  const Matrix& payoff_matrix() const { return payoff_; }

  std::string describe() const override {
    std::ostringstream os;
    os << "MatrixGame(" << payoff_.rows() << "x" << payoff_.cols() << ")";
    return os.str();
  }

 private:
  static Point best_vertex(const Vector& score, Index n) {
    Index best = 0;
    for (Index i = 1; i < n; ++i) {
      if (score[i] > score[best]) best = i;
    }
    Vector v = Vector::Zero(n);
    v[best] = 1.0;
    return Point::of_vector(std::move(v));
  }

  Matrix payoff_;
  SetPtr x_set_;
  SetPtr y_set_;
  double coupling_norm_;
};

}  // namespace mmx
