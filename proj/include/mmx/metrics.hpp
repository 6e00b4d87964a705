/**
 * @file metrics.hpp
 * @brief Stationarity and optimality measures for saddle-point iterates.
 *
 * Three primal measures and one dual measure quantify how close (x, y) is to
 * a solution of min_X max_Y L:
 *   - gap_lmo_x: max_v grad_x'(x - v), the linear-minimization stationarity
 *     gap (zero exactly at primal stationary points).
 *   - gap_po_x: ||project(x - sigma grad_x) - x|| / sigma, the fixed-point
 *     residual of the projected-gradient map at a fixed sigma > 0.
 *   - gap_opt_x: f(x) - min f with f(x) = max_u L(x, u), for problems whose
 *     optimum is known.
 *   - gap_dual_y: max_u L(x, u) - L(x, y), via the problem's exact dual best
 *     response; gap_dual_y_approx brackets it with a Frank-Wolfe certificate
 *     when no exact oracle exists.
 *
 * All gaps are mathematically nonnegative; computed values below the floor
 * kGapFloor indicate a broken oracle and raise NumericalError, while tiny
 * negatives inside the floor are clamped to zero so downstream log-log rate
 * fits stay defined.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mmx/problem.hpp"
#include "mmx/smoothing.hpp"

namespace mmx {

/// Most negative value a gap may take before it is treated as an error.
inline constexpr double kGapFloor = -1e-10;

/// Additive slack for inequality cross-checks between independently computed
/// quantities (ergodic duality bound, projection/LMO gap comparisons).
inline constexpr double kCrossCheckSlack = 1e-8;

namespace detail {

inline double checked_gap(double raw, const char* what) {
  if (raw < kGapFloor) {
    throw NumericalError(std::string(what) + " = " + std::to_string(raw) +
                         " is below the numerical floor; an oracle or "
                         "gradient is inconsistent");
  }
  return std::max(raw, 0.0);
}

}  // namespace detail

/// max_v in X of grad_x L(x,y)' (x - v), evaluated with one LMO call.
inline double gap_lmo_x(const PayoffProblem& problem, const Point& x,
                        const Point& y) {
  const Point g = problem.grad_x(x, y);
  const Point v = problem.x_set().lmo(g);
  return detail::checked_gap(g.dot(x - v), "gap_lmo_x");
}

/// Same measure reusing an already-computed gradient and its LMO output.
inline double gap_lmo_x_from(const Point& grad_x, const Point& x,
                             const Point& v) {
  return detail::checked_gap(grad_x.dot(x - v), "gap_lmo_x");
}

/// ||project(x - sigma grad_x) - x|| / sigma for a fixed sigma > 0.
inline double gap_po_x(const PayoffProblem& problem, const Point& x,
                       const Point& y, double sigma) {
  if (!(sigma > 0)) throw ConfigError("gap_po_x: sigma must be positive");
  const Point g = problem.grad_x(x, y);
  const Point moved = problem.x_set().project(x - sigma * g);
  return (moved - x).norm() / sigma;
}

/// Same measure reusing an already-computed gradient.
inline double gap_po_x_from(const FeasibleSet& x_set, const Point& grad_x,
                            const Point& x, double sigma) {
  if (!(sigma > 0)) throw ConfigError("gap_po_x: sigma must be positive");
  const Point moved = x_set.project(x - sigma * grad_x);
  return (moved - x).norm() / sigma;
}

/// max_u L(x, u) - L(x, y) through the exact dual best response.
inline double gap_dual_y(const PayoffProblem& problem, const Point& x,
                         const Point& y) {
  if (!problem.has_best_response_y()) {
    throw CapabilityError(problem.describe() +
                          ": gap_dual_y needs an exact dual best response; "
                          "use gap_dual_y_approx instead");
  }
  const Point best = problem.best_response_y(x);
  return detail::checked_gap(problem.value(x, best) - problem.value(x, y),
                             "gap_dual_y");
}

/// Bracket of the dual gap from an inner Frank-Wolfe maximization of
/// L(x, .) started at y: the true gap lies in
/// [estimate, estimate + certificate].
struct ApproxGap {
  double estimate;     ///< L(x, u_final) - L(x, y), a lower bound
  double certificate;  ///< width of the bracket above the estimate
};

inline ApproxGap gap_dual_y_approx(const PayoffProblem& problem,
                                   const Point& x, const Point& y,
                                   int inner_iters) {
  if (inner_iters < 1) {
    throw ConfigError("gap_dual_y_approx: inner_iters must be >= 1");
  }
  const FeasibleSet& ys = problem.y_set();
  const double lyy = problem.lipschitz_yy();
  const double base = problem.value(x, y);
  Point u = y;
  double value_u = base;
  double upper = std::numeric_limits<double>::infinity();
  for (int s = 0; s < inner_iters; ++s) {
    const Point g = problem.grad_y(x, u);
    const Point v = ys.lmo(-1.0 * g);
    const Point dir = v - u;
    const double fw_gap = g.dot(dir);
    // Concavity: max_u L(x,u) <= L(x,u_s) + fw_gap at every iterate.
    upper = std::min(upper, value_u + std::max(fw_gap, 0.0));
    const double dir_sq = dir.squared_norm();
    if (fw_gap <= 0.0 || dir_sq < 1e-24) break;
    double gamma = 1.0;
    if (lyy * dir_sq > 0.0) gamma = std::min(fw_gap / (lyy * dir_sq), 1.0);
    u = u.blend_toward(v, gamma);
    value_u = problem.value(x, u);
  }
  ApproxGap out;
  out.estimate = detail::checked_gap(value_u - base, "gap_dual_y_approx");
  out.certificate = std::max(upper - std::max(value_u, base), 0.0);
  return out;
}

/// Primal envelope f(x) = max_u L(x, u), via the exact dual best response.
inline double primal_value(const PayoffProblem& problem, const Point& x) {
  if (!problem.has_best_response_y()) {
    throw CapabilityError(problem.describe() +
                          ": primal_value needs an exact dual best response");
  }
  return problem.value(x, problem.best_response_y(x));
}

/// f(x) - min f, for problems whose optimal value is known externally.
inline double gap_opt_x(const PayoffProblem& problem, const Point& x,
                        double known_min) {
  return detail::checked_gap(primal_value(problem, x) - known_min,
                             "gap_opt_x");
}

/// max_u L(x, u) - min_v L(v, y): the saddle-point (duality) gap. Requires
/// best responses on both sides.
inline double duality_gap(const PayoffProblem& problem, const Point& x,
                          const Point& y) {
  if (!problem.has_best_response_y() || !problem.has_best_response_x()) {
    throw CapabilityError(problem.describe() +
                          ": duality_gap needs best responses on both sides");
  }
  const double upper = problem.value(x, problem.best_response_y(x));
  const double lower = problem.value(problem.best_response_x(y), y);
  return detail::checked_gap(upper - lower, "duality_gap");
}

/// Running averages a solver accumulates for the ergodic duality-gap bound:
/// averaged iterates over t = 1..T and the matching averaged gap sums.
struct ErgodicRecord {
  Point x_bar;
  Point y_bar;
  double avg_gap_lmo_x = 0.0;
  double avg_gap_dual_y = 0.0;
  long iterations = 0;
};

/// Duality gap of the averaged iterates. For convex-concave problems this is
/// bounded by the averaged instantaneous gaps, and that bound is asserted
/// here: a violation beyond kCrossCheckSlack raises NumericalError because
/// it means the averaging or the gap bookkeeping is wrong.
inline double duality_gap_ergodic(const PayoffProblem& problem,
                                  const ErgodicRecord& record) {
  if (!problem.convex_in_x()) {
    throw CapabilityError(problem.describe() +
                          ": the ergodic duality gap requires a payoff convex "
                          "in x");
  }
  if (record.iterations < 1) {
    throw ConfigError("duality_gap_ergodic: empty record");
  }
  const double gap = duality_gap(problem, record.x_bar, record.y_bar);
  const double budget =
      record.avg_gap_lmo_x + record.avg_gap_dual_y + kCrossCheckSlack;
  if (gap > budget) {
    throw NumericalError(
        "duality_gap_ergodic: averaged-iterate gap " + std::to_string(gap) +
        " exceeds the averaged instantaneous bound " + std::to_string(budget));
  }
  return gap;
}

/// Regularized dual discrepancy at iteration t:
/// H_t = L_beta(x, y*_beta(x)) - L_beta(x, y) with beta = schedule(t) and
/// anchor y0. With beta = 0 this reduces to the plain dual gap.
inline double discrepancy_h(const PayoffProblem& problem,
                            const SmoothingSchedule& smoothing, const Point& x,
                            const Point& y, long t, const Point& y0) {
  const double beta = smoothing.beta_at(t);
  Point best = beta > 0.0 ? problem.smoothed_best_response_y(x, beta, y0)
                          : problem.best_response_y(x);
  const double raw = regularized_value(problem, x, best, beta, y0) -
                     regularized_value(problem, x, y, beta, y0);
  return detail::checked_gap(raw, "discrepancy_h");
}

inline double discrepancy_h(const PayoffProblem& problem,
                            const SmoothingSchedule& smoothing, const Point& x,
                            const Point& y, long t) {
  return discrepancy_h(problem, smoothing, x, y, t, problem.initial_y());
}

/// One row of gap measurements, as written to run traces.
struct GapReport {
  double gap_x_lmo = 0.0;
  double gap_x_po = 0.0;
  double gap_y = 0.0;
  double sigma = 0.0;  ///< the sigma used for gap_x_po
  std::optional<double> duality_gap;
  std::optional<double> primal_opt_gap;
  std::optional<double> h_t;
};

/// Least-squares slope of log g against log t over the trailing window.
struct RateEstimate {
  double slope;
  double stderr_slope;  ///< standard error of the fitted slope
  std::size_t points;
};

inline RateEstimate estimate_rate(
    const std::vector<std::pair<double, double>>& series, std::size_t window) {
  if (window < 10) {
    throw ConfigError("estimate_rate: window must cover at least 10 points");
  }
  if (series.size() < window) {
    throw ConfigError("estimate_rate: series shorter than window");
  }
  const std::size_t start = series.size() - window;
  std::vector<double> lt(window), lg(window);
  for (std::size_t i = 0; i < window; ++i) {
    const auto& [t, g] = series[start + i];
    if (!(t > 0) || !(g > 0)) {
      throw ConfigError(
          "estimate_rate: nonpositive value in window (t = " +
          std::to_string(t) + ", g = " + std::to_string(g) + ")");
    }
    lt[i] = std::log(t);
    lg[i] = std::log(g);
  }
  const double m = static_cast<double>(window);
  double mean_t = 0.0, mean_g = 0.0;
  for (std::size_t i = 0; i < window; ++i) {
    mean_t += lt[i];
    mean_g += lg[i];
  }
  mean_t /= m;
  mean_g /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < window; ++i) {
    sxx += (lt[i] - mean_t) * (lt[i] - mean_t);
    sxy += (lt[i] - mean_t) * (lg[i] - mean_g);
  }
  // Rounding in mean_t can leave sxx a hair above zero even when every t in
  // the window is identical, so test the spread of the data directly.
  const auto [lt_min, lt_max] = std::minmax_element(lt.begin(), lt.end());
  if (sxx <= 0.0 || !(*lt_max > *lt_min)) {
    throw ConfigError("estimate_rate: window has no spread in t");
  }
  RateEstimate est;
  est.slope = sxy / sxx;
  est.points = window;
  double rss = 0.0;
  const double intercept = mean_g - est.slope * mean_t;
  for (std::size_t i = 0; i < window; ++i) {
    const double r = lg[i] - (intercept + est.slope * lt[i]);
    rss += r * r;
  }
  est.stderr_slope =
      window > 2 ? std::sqrt(rss / (m - 2.0) / sxx) : 0.0;
  return est;
}

}  // namespace mmx
