// Shared helpers for the test suite: independent reference oracles (finite
// differences, brute-force projections, closed-form 2x2 game values,
// grid-search best responses) that the library code under test never calls.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mmx/point.hpp"
#include "mmx/problem.hpp"
#include "mmx/rng.hpp"

namespace mmx::testing {

// ---------------------------------------------------------------------------
// Central finite differences, coordinate by coordinate on the flat layout.
// ---------------------------------------------------------------------------

inline Vector fd_grad_x(const PayoffProblem& problem, const Point& x,
                        const Point& y, double h = 1e-5) {
  const Index n = x.flat().size();
  Vector grad(n);
  for (Index i = 0; i < n; ++i) {
    Vector hi = x.flat();
    Vector lo = x.flat();
    hi[i] += h;
    lo[i] -= h;
    grad[i] = (problem.value(Point(hi, x.shape()), y) -
               problem.value(Point(lo, x.shape()), y)) /
              (2.0 * h);
  }
  return grad;
}

inline Vector fd_grad_y(const PayoffProblem& problem, const Point& x,
                        const Point& y, double h = 1e-5) {
  const Index n = y.flat().size();
  Vector grad(n);
  for (Index i = 0; i < n; ++i) {
    Vector hi = y.flat();
    Vector lo = y.flat();
    hi[i] += h;
    lo[i] -= h;
    grad[i] = (problem.value(x, Point(hi, y.shape())) -
               problem.value(x, Point(lo, y.shape()))) /
              (2.0 * h);
  }
  return grad;
}

inline double relative_error(const Vector& got, const Vector& want) {
  return (got - want).norm() / std::max(1.0, want.norm());
}

// ---------------------------------------------------------------------------
// Brute-force simplex projection by support enumeration (n <= ~16): for each
// candidate support S the KKT system gives the shift lambda = (sum_S z - 1) /
// |S|; the unique valid support keeps z_j > lambda inside S and z_j <=
// lambda outside.
// ---------------------------------------------------------------------------

inline Vector simplex_project_enum(const Vector& z) {
  const Index n = z.size();
  const unsigned long supports = (1ul << n) - 1ul;
  for (unsigned long mask = 1; mask <= supports; ++mask) {
    double sum = 0.0;
    long count = 0;
    for (Index j = 0; j < n; ++j) {
      if (mask & (1ul << j)) {
        sum += z[j];
        ++count;
      }
    }
    const double lambda = (sum - 1.0) / static_cast<double>(count);
    bool valid = true;
    for (Index j = 0; j < n && valid; ++j) {
      const bool inside = mask & (1ul << j);
      if (inside && !(z[j] - lambda > -1e-12)) valid = false;
      if (!inside && !(z[j] - lambda <= 1e-12)) valid = false;
    }
    if (valid) {
      Vector x = Vector::Zero(n);
      for (Index j = 0; j < n; ++j) {
        if (mask & (1ul << j)) x[j] = std::max(z[j] - lambda, 0.0);
      }
      return x;
    }
  }
  throw std::logic_error("simplex_project_enum: no valid support found");
}

// ---------------------------------------------------------------------------
// Exact value of a 2x2 zero-sum game min_x max_y x'Ay over simplices. The
// minimizing x is either a vertex or the point equalizing the two columns.
// ---------------------------------------------------------------------------

inline double game_value_2x2(const Matrix& a) {
  auto worst_case = [&a](double p) {
    const double col1 = p * a(0, 0) + (1.0 - p) * a(1, 0);
    const double col2 = p * a(0, 1) + (1.0 - p) * a(1, 1);
    return std::max(col1, col2);
  };
  double best = std::min(worst_case(0.0), worst_case(1.0));
  const double denom = a(0, 0) - a(0, 1) - a(1, 0) + a(1, 1);
  if (denom != 0.0) {
    const double p = (a(1, 1) - a(1, 0)) / denom;
    if (p >= 0.0 && p <= 1.0) best = std::min(best, worst_case(p));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Grid search maximizer of a scalar function over [lo, hi].
// ---------------------------------------------------------------------------

inline double grid_argmax(const std::function<double(double)>& f, double lo,
                          double hi, double resolution) {
  double best_arg = lo;
  double best_val = f(lo);
  for (double v = lo; v <= hi + 0.5 * resolution; v += resolution) {
    const double val = f(std::min(v, hi));
    if (val > best_val) {
      best_val = val;
      best_arg = std::min(v, hi);
    }
  }
  return best_arg;
}

// ---------------------------------------------------------------------------
// Synthetic power-law series for rate-fit checks.
// ---------------------------------------------------------------------------

inline std::vector<std::pair<double, double>> power_series(
    double exponent, std::size_t count, double scale = 1.0,
    double wobble = 0.0) {
  std::vector<std::pair<double, double>> series;
  series.reserve(count);
  for (std::size_t i = 1; i <= count; ++i) {
    const double t = static_cast<double>(i);
    const double factor = 1.0 + wobble * std::sin(t);
    series.emplace_back(t, scale * std::pow(t, exponent) * factor);
  }
  return series;
}

// ---------------------------------------------------------------------------
// A payoff that forwards an inner problem's math but advertises none of the
// optional best-response oracles, for exercising capability-error paths and
// certificate-only dual gaps.
// ---------------------------------------------------------------------------

class NoOraclePayoff final : public PayoffProblem {
 public:
  explicit NoOraclePayoff(std::shared_ptr<const PayoffProblem> inner)
      : inner_(std::move(inner)) {}

  const FeasibleSet& x_set() const override { return inner_->x_set(); }
  const FeasibleSet& y_set() const override { return inner_->y_set(); }
  double value(const Point& x, const Point& y) const override {
    return inner_->value(x, y);
  }
  Point grad_x(const Point& x, const Point& y) const override {
    return inner_->grad_x(x, y);
  }
  Point grad_y(const Point& x, const Point& y) const override {
    return inner_->grad_y(x, y);
  }
  double lipschitz_xx() const override { return inner_->lipschitz_xx(); }
  double lipschitz_yx() const override { return inner_->lipschitz_yx(); }
  double lipschitz_yy() const override { return inner_->lipschitz_yy(); }
  double concavity_mu() const override { return inner_->concavity_mu(); }
  bool convex_in_x() const override { return inner_->convex_in_x(); }
  Point initial_x() const override { return inner_->initial_x(); }
  Point initial_y() const override { return inner_->initial_y(); }
  std::string describe() const override {
    return "NoOraclePayoff(" + inner_->describe() + ")";
  }

 private:
  std::shared_ptr<const PayoffProblem> inner_;
};

}  // namespace mmx::testing
