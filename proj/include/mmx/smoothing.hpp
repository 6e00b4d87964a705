/**
 * @file smoothing.hpp
 * @brief Vanishing dual regularization and step-size schedules.
 *
 * The dual variable is driven by the regularized payoff
 *     L_beta(x, y) = L(x, y) - (beta/2) * ||y - y0||^2,
 * where beta follows the nonincreasing schedule beta_t = C * (t+1)^(-b) and
 * y0 is a fixed anchor (by default the dual initializer). Primal step sizes
 * tau_t come in three forms: a plain power (t+1)^(-a), a constant (for
 * horizon-tuned baseline variants), and the inverse-sum form used by the
 * projected-primal method, tau_t = s / (A(t+1)^a + 5Lxx/2 + K_t), with
 * K_t = 13 Lyx^2 (t+1)^b / (2C) when C > 0 and the constant 13 Lyx^2 / (2 mu)
 * when the regularization is off (C = 0, mu > 0).
 */
#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include "mmx/point.hpp"
#include "mmx/problem.hpp"

namespace mmx {

/// Schedule beta_t = C * (t+1)^(-b); C = 0 disables regularization.
class SmoothingSchedule {
 public:
  SmoothingSchedule() : SmoothingSchedule(0.0, 0.0) {}

  SmoothingSchedule(double C, double b) : C_(C), b_(b) {
    if (C < 0) throw ConfigError("SmoothingSchedule: C must be >= 0");
    if (b < 0 || b >= 1) {
      throw ConfigError("SmoothingSchedule: exponent b must lie in [0, 1)");
    }
  }

  static SmoothingSchedule off() { return SmoothingSchedule(0.0, 0.0); }

  double beta_at(long t) const {
    if (t < 0) throw ConfigError("SmoothingSchedule: t must be >= 0");
    if (C_ == 0.0) return 0.0;
    return C_ * std::pow(static_cast<double>(t) + 1.0, -b_);
  }

  double C() const { return C_; }
  double b() const { return b_; }
  bool active() const { return C_ > 0.0; }

 private:
  double C_;
  double b_;
};

/// Primal step-size schedule tau_t.
class StepSchedule {
 public:
  enum class Form { kPower, kConstant, kInverseSum };

  /// tau_t = (t+1)^(-a), a in (0, 1].
  static StepSchedule power(double a) {
    if (!(a > 0) || a > 1) {
      throw ConfigError("StepSchedule::power: exponent a must lie in (0, 1]");
    }
    StepSchedule s;
    s.form_ = Form::kPower;
    s.a_ = a;
    return s;
  }

  /// tau_t = tau for all t (horizon-tuned baselines).
  static StepSchedule constant(double tau) {
    if (!(tau > 0)) {
      throw ConfigError("StepSchedule::constant: tau must be positive");
    }
    StepSchedule s;
    s.form_ = Form::kConstant;
    s.tau_bar_ = tau;
    return s;
  }

  /// tau_t = scale / (A(t+1)^a + 5Lxx/2 + K_t); see file comment for K_t.
  /// Requires max{C, mu} > 0.
  static StepSchedule inverse_sum(double scale, double A, double a, double b,
                                  double lipschitz_xx, double lipschitz_yx,
                                  double C, double mu) {
    if (!(scale > 0)) throw ConfigError("StepSchedule: scale must be positive");
    if (!(A > 0)) throw ConfigError("StepSchedule: A must be positive");
    if (!(a > 0) || a >= 1) {
      throw ConfigError("StepSchedule: exponent a must lie in (0, 1)");
    }
    if (b < 0 || b >= 1) {
      throw ConfigError("StepSchedule: exponent b must lie in [0, 1)");
    }
    if (lipschitz_xx < 0 || lipschitz_yx < 0) {
      throw ConfigError("StepSchedule: Lipschitz constants must be >= 0");
    }
    StepSchedule s;
    s.form_ = Form::kInverseSum;
    s.scale_ = scale;
    s.A_ = A;
    s.a_ = a;
    s.b_ = b;
    s.base_ = 2.5 * lipschitz_xx;
    if (C > 0) {
      s.growth_coeff_ = 13.0 * lipschitz_yx * lipschitz_yx / (2.0 * C);
    } else if (mu > 0) {
      // Regularization off: the coupling term is held constant at the value
      // the strong concavity provides.
      s.base_ += 13.0 * lipschitz_yx * lipschitz_yx / (2.0 * mu);
      s.growth_coeff_ = 0.0;
      s.b_ = 0.0;
    } else {
      throw ConfigError(
          "StepSchedule: inverse-sum form needs C > 0 or mu > 0");
    }
    return s;
  }

  double tau_at(long t) const {
    if (t < 0) throw ConfigError("StepSchedule: t must be >= 0");
    const double tp1 = static_cast<double>(t) + 1.0;
    switch (form_) {
      case Form::kPower:
        return std::pow(tp1, -a_);
      case Form::kConstant:
        return tau_bar_;
      case Form::kInverseSum:
        return scale_ /
               (A_ * std::pow(tp1, a_) + base_ +
                growth_coeff_ * std::pow(tp1, b_));
    }
    return 0.0;
  }

  Form form() const { return form_; }
  double exponent_a() const { return a_; }

  /// Largest step over all t (schedules here are nonincreasing, so tau_0).
  double max_step() const { return tau_at(0); }

 private:
  StepSchedule() = default;

  Form form_ = Form::kPower;
  double a_ = 1.0;
  double b_ = 0.0;
  double tau_bar_ = 0.0;
  double scale_ = 0.0;
  double A_ = 0.0;
  double base_ = 0.0;
  double growth_coeff_ = 0.0;
};

/// Regularized payoff L_beta(x, y) = L(x, y) - (beta/2)||y - y0||^2.
inline double regularized_value(const PayoffProblem& problem, const Point& x,
                                const Point& y, double beta, const Point& y0) {
  double v = problem.value(x, y);
  if (beta != 0.0) v -= 0.5 * beta * (y - y0).squared_norm();
  return v;
}

/// Dual gradient of the regularized payoff: grad_y L - beta (y - y0).
inline Point regularized_grad_y(const PayoffProblem& problem, const Point& x,
                                const Point& y, double beta, const Point& y0) {
  Point g = problem.grad_y(x, y);
  if (beta == 0.0) return g;
  return g - beta * (y - y0);
}

/// Gradient Lipschitz constant of the smoothed primal envelope
/// f_beta(x) = max_y L_beta(x, y):  Lxx + Lyx^2 / (beta + mu).
inline double smoothed_gradient_lipschitz(const PayoffProblem& problem,
                                          double beta) {
  const double denom = beta + problem.concavity_mu();
  if (!(denom > 0)) {
    throw ConfigError(
        "smoothed_gradient_lipschitz: needs beta + mu > 0 (enable "
        "regularization or use a strongly concave problem)");
  }
  return problem.lipschitz_xx() +
         problem.lipschitz_yx() * problem.lipschitz_yx() / denom;
}

/// A smoothing schedule together with the fixed anchor point it regularizes
/// toward (by default the dual starting iterate).
struct SmoothingState {
  SmoothingSchedule schedule;
  Point anchor;

  double beta_at(long t) const { return schedule.beta_at(t); }

  double value(const PayoffProblem& problem, const Point& x, const Point& y,
               long t) const {
    return regularized_value(problem, x, y, schedule.beta_at(t), anchor);
  }

  Point grad_y(const PayoffProblem& problem, const Point& x, const Point& y,
               long t) const {
    return regularized_grad_y(problem, x, y, schedule.beta_at(t), anchor);
  }
};

/// Infimum over t of the descent margin required by the projected-primal
/// analysis. Plain form:   1/4  - (5Lxx/2) tau_t - 13Lyx^2 tau_t / (2(beta_{t+1}+mu));
/// strongly convex dual domain: 13/16 - (5Lxx/2) tau_t - 13Lyx^2 tau_t / (2(beta_t+mu)).
/// Evaluated on a dense-then-geometric t grid; the grid tail reaches 1e8,
/// far past where the margin is monotone for every supported schedule.
inline double inverse_sum_margin_infimum(const StepSchedule& tau,
                                         const SmoothingSchedule& beta,
                                         double lipschitz_xx,
                                         double lipschitz_yx, double mu,
                                         bool strongly_convex_y) {
  const double headroom = strongly_convex_y ? 13.0 / 16.0 : 0.25;
  double inf = headroom;
  auto margin = [&](long t) {
    const double tau_t = tau.tau_at(t);
    const double beta_ref =
        strongly_convex_y ? beta.beta_at(t) : beta.beta_at(t + 1);
    const double denom = beta_ref + mu;
    if (!(denom > 0)) {
      throw ConfigError(
          "inverse_sum_margin_infimum: beta + mu must stay positive");
    }
    return headroom - 2.5 * lipschitz_xx * tau_t -
           6.5 * lipschitz_yx * lipschitz_yx * tau_t / denom;
  };
  for (long t = 0; t <= 1024; ++t) inf = std::min(inf, margin(t));
  for (long t = 2048; t <= 100000000; t *= 2) inf = std::min(inf, margin(t));
  return inf;
}

}  // namespace mmx
