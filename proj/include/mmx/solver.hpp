#pragma once

// Single-loop saddle-point solvers over compact feasible sets.
//
// Three oracle arrangements share one iteration skeleton: the primal block
// moves x with either a linear-minimization step (Frank-Wolfe style blend
// toward an extreme point) or a projected gradient step, and the dual block
// moves y on the smoothed payoff with either an adaptive Frank-Wolfe step or
// a projected gradient step.  Both blocks read the same pre-update iterate
// pair, so the two half-steps commute.
//
// run() drives any of the three variants under an iteration or wall-clock
// budget, accumulating ergodic averages and per-iteration stationarity gaps,
// and emits trace rows on a fixed cadence.  Time spent on solver work
// (gradients consumed by the update, oracle calls, iterate arithmetic) is
// metered separately from metric bookkeeping so wall-clock budgets constrain
// only the former.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mmx/errors.hpp"
#include "mmx/metrics.hpp"
#include "mmx/point.hpp"
#include "mmx/problem.hpp"
#include "mmx/smoothing.hpp"

namespace mmx {

// ---------------------------------------------------------------------------
// Oracle arrangements
// ---------------------------------------------------------------------------

/// Which oracle each block uses: primal oracle named first, dual second.
enum class OracleMode {
  kLmoLmo,  // linear minimization on both blocks
  kLmoPo,   // linear minimization on x, projection on y
  kPoLmo,   // projection on x, linear minimization on y
};

inline const char* oracle_mode_name(OracleMode mode) {
  switch (mode) {
    case OracleMode::kLmoLmo:
      return "lmo-lmo";
    case OracleMode::kLmoPo:
      return "lmo-po";
    case OracleMode::kPoLmo:
      return "po-lmo";
  }
  throw ConfigError("unknown oracle mode");
}

inline OracleMode parse_oracle_mode(const std::string& text) {
  if (text == "lmo-lmo") return OracleMode::kLmoLmo;
  if (text == "lmo-po") return OracleMode::kLmoPo;
  if (text == "po-lmo") return OracleMode::kPoLmo;
  throw ConfigError("unknown oracle mode '" + text +
                    "' (expected one of: lmo-lmo, lmo-po, po-lmo)");
}

// ---------------------------------------------------------------------------
// Iterate state
// ---------------------------------------------------------------------------

/// Mutable iterate pair plus running sums for ergodic averages.
///
/// The iterate sums cover exactly the post-step iterates x_1..x_t (the
/// starting pair is excluded), matching the averaging used by the ergodic
/// guarantees.  Sums use compensated accumulation so long runs do not drift.
struct IterateState {
  Point x;
  Point y;
  long t = 0;

  // Constants of the most recent step (all zero before the first step).
  double last_tau = 0.0;
  double last_beta = 0.0;
  double last_gamma = 0.0;

  KahanVector x_sum;
  KahanVector y_sum;

  IterateState(Point x0, Point y0)
      : x(std::move(x0)),
        y(std::move(y0)),
        x_sum(x.size()),
        y_sum(y.size()) {}

  /// Average of x_1..x_t.  Requires at least one completed step.
  Point x_average() const {
    if (t < 1) throw ConfigError("iterate average requires at least one step");
    return Point(x_sum.value() / static_cast<double>(t), x.shape());
  }

  /// Average of y_1..y_t.  Requires at least one completed step.
  Point y_average() const {
    if (t < 1) throw ConfigError("iterate average requires at least one step");
    return Point(y_sum.value() / static_cast<double>(t), y.shape());
  }
};

// ---------------------------------------------------------------------------
// Dual adaptive Frank-Wolfe step
// ---------------------------------------------------------------------------

namespace detail {
/// Below this squared direction norm the dual vertex coincides with the
/// iterate and the step degenerates to gamma = 0.
inline constexpr double kDegenerateDirectionSq = 1e-24;
/// Additive slack allowed on the per-step ascent guarantee of the dual block.
inline constexpr double kDualAscentSlack = 1e-10;
}  // namespace detail

/// Result of one adaptive dual step: the new iterate, the vertex the linear
/// oracle returned, and the blend weight actually used.
struct DualStep {
  Point y_next;
  Point u;
  double gamma = 0.0;
};

/// Adaptive Frank-Wolfe ascent step on the smoothed dual objective, given the
/// already-evaluated regularized dual gradient at (x, y).
///
/// The vertex maximizes the linearization of the smoothed payoff over the
/// dual set; the blend weight is the exact minimizer of the standard quadratic
/// upper model, clipped to [0, 1].  A vertex that coincides with the iterate
/// yields gamma = 0, and a meaningfully negative linearized gain means the
/// linear oracle is broken, which raises a numerical error.
inline DualStep dual_adaptive_step_from(const PayoffProblem& problem,
                                        const Point& y, const Point& grad_reg,
                                        double beta) {
  const FeasibleSet& y_set = problem.y_set();
  Point u = y_set.lmo(-1.0 * grad_reg);
  const Point direction = u - y;
  const double direction_sq = direction.squared_norm();
  if (direction_sq < detail::kDegenerateDirectionSq) {
    return DualStep{y, std::move(u), 0.0};
  }
  const double gain = grad_reg.dot(direction);
  const double scale =
      std::max(1.0, grad_reg.norm() * std::sqrt(direction_sq));
  if (gain < -1e-10 * scale) {
    throw NumericalError(
        "dual linear oracle returned a vertex with negative linearized gain " +
        std::to_string(gain));
  }
  if (gain <= 0.0) {
    return DualStep{y, std::move(u), 0.0};
  }
  const double curvature = (problem.lipschitz_yy() + beta) * direction_sq;
  const double gamma =
      curvature > 0.0 ? std::min(gain / curvature, 1.0) : 1.0;
  return DualStep{y.blend_toward(u, gamma), std::move(u), gamma};
}

/// Convenience overload that evaluates the regularized dual gradient itself.
inline DualStep dual_adaptive_step(const PayoffProblem& problem,
                                   const SmoothingState& smoothing,
                                   const Point& x, const Point& y, long t) {
  const double beta = smoothing.beta_at(t);
  return dual_adaptive_step_from(problem, y,
                                 smoothing.grad_y(problem, x, y, t), beta);
}

// ---------------------------------------------------------------------------
// One iteration of each variant
// ---------------------------------------------------------------------------

namespace detail {

/// Everything evaluated at the pre-update pair (x_t, y_t) that the step
/// consumes.  run() shares this bundle with its metric bookkeeping so the
/// payoff gradients are evaluated once per iteration.
struct StepEval {
  double tau = 0.0;
  double beta = 0.0;
  Point grad_x;
  Point grad_y_reg;
  std::optional<Point> lmo_x;  // primal vertex; filled in LMO-primal modes
};

inline StepEval prepare_step(const PayoffProblem& problem,
                             const SmoothingState& smoothing,
                             const StepSchedule& schedule,
                             const IterateState& state, OracleMode mode) {
  StepEval eval;
  eval.tau = schedule.tau_at(state.t);
  eval.beta = smoothing.beta_at(state.t);
  eval.grad_x = problem.grad_x(state.x, state.y);
  eval.grad_y_reg = regularized_grad_y(problem, state.x, state.y, eval.beta,
                                       smoothing.anchor);
  if (mode != OracleMode::kPoLmo) {
    eval.lmo_x = problem.x_set().lmo(eval.grad_x);
  }
  return eval;
}

inline void apply_step(const PayoffProblem& problem, OracleMode mode,
                       const StepEval& eval, IterateState& state) {
  // Primal block.
  Point x_next = [&] {
    if (mode == OracleMode::kPoLmo) {
      return problem.x_set().project(state.x - eval.tau * eval.grad_x);
    }
    return state.x.blend_toward(*eval.lmo_x, eval.tau);
  }();

  // Dual block: reads the pre-update pair (x_t, y_t).
  double gamma = 0.0;
  Point y_next = [&] {
    if (mode == OracleMode::kLmoPo) {
      const double curvature = problem.lipschitz_yy() + eval.beta;
      if (!(curvature > 0.0)) {
        throw ConfigError(
            "projected dual step requires lipschitz_yy + beta > 0; got " +
            std::to_string(curvature) +
            " (enable smoothing or use the adaptive dual step)");
      }
      gamma = 1.0 / curvature;
      return problem.y_set().project(state.y + gamma * eval.grad_y_reg);
    }
    DualStep dual = dual_adaptive_step_from(problem, state.y, eval.grad_y_reg,
                                            eval.beta);
    gamma = dual.gamma;
    return std::move(dual.y_next);
  }();

  state.x = std::move(x_next);
  state.y = std::move(y_next);
  state.t += 1;
  state.x_sum.add(state.x.flat());
  state.y_sum.add(state.y.flat());
  state.last_tau = eval.tau;
  state.last_beta = eval.beta;
  state.last_gamma = gamma;
}

}  // namespace detail

/// One iteration with linear-minimization oracles on both blocks.
inline void step_lmo_lmo(const PayoffProblem& problem,
                         const SmoothingState& smoothing,
                         const StepSchedule& schedule, IterateState& state) {
  detail::apply_step(
      problem, OracleMode::kLmoLmo,
      detail::prepare_step(problem, smoothing, schedule, state,
                           OracleMode::kLmoLmo),
      state);
}

/// One iteration with a linear-minimization primal step and a projected dual
/// step of size 1 / (lipschitz_yy + beta_t).
inline void step_lmo_po(const PayoffProblem& problem,
                        const SmoothingState& smoothing,
                        const StepSchedule& schedule, IterateState& state) {
  detail::apply_step(
      problem, OracleMode::kLmoPo,
      detail::prepare_step(problem, smoothing, schedule, state,
                           OracleMode::kLmoPo),
      state);
}

/// One iteration with a projected primal step and the adaptive dual step.
inline void step_po_lmo(const PayoffProblem& problem,
                        const SmoothingState& smoothing,
                        const StepSchedule& schedule, IterateState& state) {
  detail::apply_step(
      problem, OracleMode::kPoLmo,
      detail::prepare_step(problem, smoothing, schedule, state,
                           OracleMode::kPoLmo),
      state);
}

// ---------------------------------------------------------------------------
// Full runs
// ---------------------------------------------------------------------------

/// A fully resolved solver configuration: which oracle arrangement to run and
/// the step/smoothing schedules driving it.
struct SolverPlan {
  OracleMode mode = OracleMode::kLmoLmo;
  StepSchedule step = StepSchedule::power(1.0);
  SmoothingSchedule smoothing = SmoothingSchedule::off();

  /// Name of the preset this plan came from, empty for explicit schedules.
  std::string preset_name;
  /// Resolved numeric constants (exponents, scales, ...) echoed in summaries.
  std::map<std::string, double> constants;
};

/// Options controlling run(): budget, trace cadence and optional invariant
/// verification.  Exactly one of `iterations` and `seconds` must be set.
struct RunOptions {
  std::optional<long> iterations;  // stop after this many steps (>= 0)
  std::optional<double> seconds;   // stop once solver time reaches this (> 0)

  /// Emit a trace row every `cadence` iterations (plus first and final).
  long cadence = 10;
  /// Additional iteration indices that always get a trace row.
  std::vector<long> extra_emit;

  /// Override the starting iterates (defaults: the problem's start pair).
  std::optional<Point> x0;
  std::optional<Point> y0;

  /// Override the probe step used by the projection-based primal gap metric
  /// (default: the step schedule's initial step).
  std::optional<double> sigma;

  /// Frank-Wolfe iterations used by the certified dual-gap estimate when the
  /// problem has no exact dual best response.
  int approx_gap_iterations = 64;

  /// When true, emit the ergodic duality-gap column (requires a problem that
  /// is convex in x with both best responses available).
  bool duality_gap_column = true;

  /// Check the dual block's per-step ascent guarantee every iteration.
  bool verify_dual_ascent = false;
  /// Check iterate feasibility (membership tolerance) every iteration.
  bool verify_feasibility = false;
};

/// One emitted trace row.  Gap columns hold the instantaneous stationarity
/// measures at that iterate; avg columns hold running means over iterates
/// 1..t (they echo the instantaneous value at t = 0).
struct TraceRow {
  long iter = 0;
  double wall_ms = 0.0;  // cumulative solver time; 0 under iteration budgets
  double tau = 0.0;      // step size the schedule assigns at this iterate
  double beta = 0.0;     // smoothing weight at this iterate
  double gamma = 0.0;    // dual blend weight of the step that produced y_t
  double objective = 0.0;
  double gap_x = 0.0;
  double gap_y = 0.0;
  double avg_gap_x = 0.0;
  double avg_gap_y = 0.0;
  std::optional<double> duality_gap;  // ergodic, convex problems only
  std::optional<double> gap_y_cert;   // bracket width when gap_y is estimated
};

/// Everything a completed run reports.
struct RunResult {
  std::vector<TraceRow> rows;
  Point x;
  Point y;
  std::optional<Point> x_average;
  std::optional<Point> y_average;
  long iterations = 0;
  double solver_seconds = 0.0;
  double sigma = 0.0;

  const TraceRow& final_row() const {
    if (rows.empty()) throw ConfigError("run produced no trace rows");
    return rows.back();
  }
};

namespace detail {

inline void check_finite_point(const Point& p, const char* what, long t) {
  if (!p.flat().allFinite()) {
    throw NumericalError(std::string("non-finite ") + what +
                         " at iteration " + std::to_string(t));
  }
}

class SolverTimer {
 public:
  void start() { begin_ = std::chrono::steady_clock::now(); }
  void stop() {
    seconds_ += std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - begin_)
                    .count();
  }
  double seconds() const { return seconds_; }

 private:
  std::chrono::steady_clock::time_point begin_{};
  double seconds_ = 0.0;
};

}  // namespace detail

/// Run one solver variant under the given budget, tracing stationarity gaps.
///
/// Trace rows are emitted at iteration 0, at the final iterate, every
/// `cadence` iterations and at every index in `extra_emit`.  Under an
/// iteration budget the output is fully deterministic (wall_ms is written as
/// zero); under a wall-clock budget the budget bounds solver work only, and
/// the number of completed iterations is checked against it once per
/// iteration.
inline RunResult run(const PayoffProblem& problem, const SolverPlan& plan,
                     const RunOptions& options) {
  // --- validate the budget and cadence ---
  if (options.iterations.has_value() == options.seconds.has_value()) {
    throw ConfigError(
        "exactly one of the iteration budget and the seconds budget must be "
        "set");
  }
  if (options.iterations && *options.iterations < 0) {
    throw ConfigError("iteration budget must be >= 0");
  }
  if (options.seconds && !(*options.seconds > 0.0)) {
    throw ConfigError("seconds budget must be > 0");
  }
  if (options.cadence < 1) throw ConfigError("trace cadence must be >= 1");
  if (options.approx_gap_iterations < 1) {
    throw ConfigError("approx_gap_iterations must be >= 1");
  }

  // --- validate the plan against the problem ---
  const double mu = problem.concavity_mu();
  if (!plan.smoothing.active() && !(mu > 0.0)) {
    throw ConfigError(
        "the dual step requires smoothing or strong concavity: configure a "
        "smoothing schedule with C > 0 or use a problem with mu > 0");
  }
  if (plan.mode == OracleMode::kLmoPo && !plan.smoothing.active() &&
      !(problem.lipschitz_yy() > 0.0)) {
    throw ConfigError(
        "the projected dual step requires lipschitz_yy + beta_t > 0 for all "
        "t; enable smoothing or use a problem with lipschitz_yy > 0");
  }

  // --- starting iterates ---
  Point x0 = options.x0.value_or(problem.initial_x());
  Point y0 = options.y0.value_or(problem.initial_y());
  if (!problem.x_set().contains(x0)) {
    throw ConfigError("starting primal iterate is infeasible");
  }
  if (!problem.y_set().contains(y0)) {
    throw ConfigError("starting dual iterate is infeasible");
  }

  IterateState state(std::move(x0), std::move(y0));
  const SmoothingState smoothing{plan.smoothing, state.y};

  const double sigma = options.sigma.value_or(plan.step.max_step());
  if (!(sigma > 0.0)) throw ConfigError("sigma must be > 0");

  const bool exact_dual_gap = problem.has_best_response_y();
  const bool track_duality = options.duality_gap_column &&
                             problem.convex_in_x() && exact_dual_gap &&
                             problem.has_best_response_x();

  std::vector<long> extra_emit = options.extra_emit;
  std::sort(extra_emit.begin(), extra_emit.end());
  const auto emit_due = [&](long t) {
    return t % options.cadence == 0 ||
           std::binary_search(extra_emit.begin(), extra_emit.end(), t);
  };

  // Running gap sums over iterates 1..t.
  KahanSum gap_x_sum;
  KahanSum gap_y_sum;
  KahanSum gap_lmo_sum;  // linearized primal gap, kept for the ergodic bound

  RunResult result;
  detail::SolverTimer timer;

  for (long i = 0;; ++i) {
    const bool last = options.iterations
                          ? (i >= *options.iterations)
                          : (timer.seconds() >= *options.seconds);

    // --- evaluate the step bundle at (x_i, y_i) ---
    // On the final iterate no step consumes it, so it is metric work.
    detail::StepEval eval;
    if (last) {
      eval = detail::prepare_step(problem, smoothing, plan.step, state,
                                  plan.mode);
    } else {
      timer.start();
      eval = detail::prepare_step(problem, smoothing, plan.step, state,
                                  plan.mode);
      timer.stop();
    }
    detail::check_finite_point(state.x, "primal iterate", i);
    detail::check_finite_point(state.y, "dual iterate", i);
    detail::check_finite_point(eval.grad_x, "primal gradient", i);
    detail::check_finite_point(eval.grad_y_reg, "dual gradient", i);

    // --- metrics at iterate i ---
    const double objective = problem.value(state.x, state.y);
    if (!std::isfinite(objective)) {
      throw NumericalError("non-finite objective at iteration " +
                           std::to_string(i));
    }

    double gap_x = 0.0;
    double gap_lmo = 0.0;
    if (plan.mode == OracleMode::kPoLmo) {
      gap_x = gap_po_x_from(problem.x_set(), eval.grad_x, state.x, sigma);
      if (track_duality) {
        gap_lmo = gap_lmo_x_from(eval.grad_x, state.x,
                                 problem.x_set().lmo(eval.grad_x));
      }
    } else {
      gap_x = gap_lmo_x_from(eval.grad_x, state.x, *eval.lmo_x);
      gap_lmo = gap_x;
    }

    double gap_y = 0.0;
    std::optional<double> gap_y_cert;
    if (exact_dual_gap) {
      const Point best = problem.best_response_y(state.x);
      gap_y = detail::checked_gap(problem.value(state.x, best) - objective,
                                  "gap_dual_y");
    } else {
      const ApproxGap approx = gap_dual_y_approx(problem, state.x, state.y,
                                                 options.approx_gap_iterations);
      gap_y = approx.estimate;
      gap_y_cert = approx.certificate;
    }

    if (i >= 1) {
      gap_x_sum.add(gap_x);
      gap_y_sum.add(gap_y);
      if (track_duality) gap_lmo_sum.add(gap_lmo);
    }

    // --- emit a trace row ---
    if (last || emit_due(i)) {
      TraceRow row;
      row.iter = i;
      row.wall_ms = options.seconds ? timer.seconds() * 1e3 : 0.0;
      row.tau = eval.tau;
      row.beta = eval.beta;
      row.gamma = state.last_gamma;
      row.objective = objective;
      row.gap_x = gap_x;
      row.gap_y = gap_y;
      const double denom = static_cast<double>(std::max<long>(i, 1));
      row.avg_gap_x = i >= 1 ? gap_x_sum.value() / denom : gap_x;
      row.avg_gap_y = i >= 1 ? gap_y_sum.value() / denom : gap_y;
      if (track_duality) {
        if (i >= 1) {
          ErgodicRecord record;
          record.x_bar = state.x_average();
          record.y_bar = state.y_average();
          record.avg_gap_lmo_x = gap_lmo_sum.value() / denom;
          record.avg_gap_dual_y = gap_y_sum.value() / denom;
          record.iterations = i;
          row.duality_gap = duality_gap_ergodic(problem, record);
        } else {
          row.duality_gap = duality_gap(problem, state.x, state.y);
        }
      }
      row.gap_y_cert = gap_y_cert;
      result.rows.push_back(std::move(row));
    }

    if (last) {
      result.iterations = i;
      break;
    }

    // --- step (solver work) ---
    std::optional<Point> x_before;
    std::optional<Point> y_before;
    if (options.verify_dual_ascent) {
      x_before = state.x;
      y_before = state.y;
    }

    timer.start();
    detail::apply_step(problem, plan.mode, eval, state);
    timer.stop();

    if (options.verify_dual_ascent) {
      const double before = regularized_value(problem, *x_before, *y_before,
                                              eval.beta, smoothing.anchor);
      const double after = regularized_value(problem, *x_before, state.y,
                                             eval.beta, smoothing.anchor);
      if (after < before - detail::kDualAscentSlack) {
        throw NumericalError(
            "dual step lost smoothed payoff at iteration " +
            std::to_string(i) + ": " + std::to_string(before) + " -> " +
            std::to_string(after));
      }
    }
    if (options.verify_feasibility) {
      if (!problem.x_set().contains(state.x)) {
        throw NumericalError("primal iterate left the feasible set at "
                             "iteration " +
                             std::to_string(i + 1));
      }
      if (!problem.y_set().contains(state.y)) {
        throw NumericalError("dual iterate left the feasible set at "
                             "iteration " +
                             std::to_string(i + 1));
      }
    }
  }

  result.x = state.x;
  result.y = state.y;
  if (state.t >= 1) {
    result.x_average = state.x_average();
    result.y_average = state.y_average();
  }
  result.solver_seconds = timer.seconds();
  result.sigma = sigma;
  return result;
}

}  // namespace mmx
