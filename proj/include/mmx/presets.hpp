#pragma once

// Schedule presets.
//
// Each supported (regime, oracle mode) pair pins the step and smoothing
// exponents for which the corresponding convergence guarantee holds.  A
// regime names the curvature assumptions the guarantee needs:
//
//   nc-c       nonconvex in x, merely concave in y (decaying smoothing)
//   nc-sc      nonconvex in x, strongly concave in y (no smoothing)
//   *+scy      additionally, the dual feasible set is strongly convex
//   c-*        convex in x (ergodic guarantees become available)
//
// plan_from_preset() turns a preset into a runnable SolverPlan, validating
// the assumptions against the concrete problem at configuration time.  The
// fixed-horizon baseline plans (constant schedules tuned to a known budget K)
// live here too.

#include <cmath>
#include <map>
#include <optional>
#include <string>

#include "mmx/errors.hpp"
#include "mmx/problem.hpp"
#include "mmx/smoothing.hpp"
#include "mmx/solver.hpp"

namespace mmx {

// ---------------------------------------------------------------------------
// Regimes
// ---------------------------------------------------------------------------

enum class Regime {
  kNcC,
  kNcSc,
  kNcCScy,
  kNcScScy,
  kCC,
  kCSc,
  kCCScy,
  kCScScy,
};

inline const char* regime_name(Regime regime) {
  switch (regime) {
    case Regime::kNcC:
      return "nc-c";
    case Regime::kNcSc:
      return "nc-sc";
    case Regime::kNcCScy:
      return "nc-c+scy";
    case Regime::kNcScScy:
      return "nc-sc+scy";
    case Regime::kCC:
      return "c-c";
    case Regime::kCSc:
      return "c-sc";
    case Regime::kCCScy:
      return "c-c+scy";
    case Regime::kCScScy:
      return "c-sc+scy";
  }
  throw ConfigError("unknown regime");
}

inline Regime parse_regime(const std::string& text) {
  if (text == "nc-c") return Regime::kNcC;
  if (text == "nc-sc") return Regime::kNcSc;
  if (text == "nc-c+scy") return Regime::kNcCScy;
  if (text == "nc-sc+scy") return Regime::kNcScScy;
  if (text == "c-c") return Regime::kCC;
  if (text == "c-sc") return Regime::kCSc;
  if (text == "c-c+scy") return Regime::kCCScy;
  if (text == "c-sc+scy") return Regime::kCScScy;
  throw ConfigError("unknown regime '" + text +
                    "' (expected one of: nc-c, nc-sc, nc-c+scy, nc-sc+scy, "
                    "c-c, c-sc, c-c+scy, c-sc+scy)");
}

inline bool regime_is_convex_x(Regime r) {
  return r == Regime::kCC || r == Regime::kCSc || r == Regime::kCCScy ||
         r == Regime::kCScScy;
}

inline bool regime_is_strongly_concave(Regime r) {
  return r == Regime::kNcSc || r == Regime::kNcScScy || r == Regime::kCSc ||
         r == Regime::kCScScy;
}

inline bool regime_needs_strongly_convex_y_set(Regime r) {
  return r == Regime::kNcCScy || r == Regime::kNcScScy ||
         r == Regime::kCCScy || r == Regime::kCScScy;
}

// ---------------------------------------------------------------------------
// Preset table
// ---------------------------------------------------------------------------

/// Resolved schedule constants for one (regime, mode) pair.
///
/// `a` is the step exponent and `b` the smoothing exponent; strongly concave
/// regimes run without smoothing (smoothing_c = 0, b = 0).  For the
/// projected-primal mode the step uses the inverse-sum form with scale
/// `scale` and ramp coefficient `ramp`.
struct RegimePreset {
  Regime regime = Regime::kNcC;
  OracleMode mode = OracleMode::kLmoLmo;
  double a = 0.0;
  double b = 0.0;
  double smoothing_c = 0.0;
  double scale = 0.0;  // inverse-sum scale; 0 for the LMO-primal modes
  double ramp = 0.0;   // inverse-sum ramp coefficient A; 0 likewise
};

namespace detail {
/// Default smoothing constant C for presets that smooth (b > 0).
inline constexpr double kDefaultSmoothingC = 1.0;
/// Default ramp coefficient A of the inverse-sum step form.
inline constexpr double kDefaultRamp = 1.0;

[[noreturn]] inline void unsupported_pair(Regime regime, OracleMode mode,
                                          const char* valid) {
  throw ConfigError(std::string("regime '") + regime_name(regime) +
                    "' is not supported for mode '" + oracle_mode_name(mode) +
                    "'; supported regimes for this mode: " + valid);
}
}  // namespace detail

/// Exponent table for the supported (regime, mode) pairs.
///
/// Unsupported pairs (the SCY regimes for lmo-po, and c-c+scy for po-lmo,
/// which has no faster guarantee than c-c) raise a configuration error that
/// lists the valid regimes for the mode.
inline RegimePreset preset(Regime regime, OracleMode mode) {
  RegimePreset p;
  p.regime = regime;
  p.mode = mode;
  const bool smooth = !regime_is_strongly_concave(regime);
  p.smoothing_c = smooth ? detail::kDefaultSmoothingC : 0.0;

  switch (mode) {
    case OracleMode::kLmoLmo:
      switch (regime) {
        case Regime::kNcC:
          p.a = 5.0 / 6.0;
          p.b = 1.0 / 6.0;
          return p;
        case Regime::kNcSc:
          p.a = 3.0 / 4.0;
          return p;
        case Regime::kNcCScy:
          p.a = 4.0 / 5.0;
          p.b = 1.0 / 5.0;
          return p;
        case Regime::kNcScScy:
          p.a = 2.0 / 3.0;
          return p;
        case Regime::kCC:
          p.a = 1.0;
          p.b = 1.0 / 5.0;
          return p;
        case Regime::kCSc:
          p.a = 1.0;
          return p;
        case Regime::kCCScy:
          p.a = 1.0;
          p.b = 1.0 / 4.0;
          return p;
        case Regime::kCScScy:
          p.a = 1.0;
          return p;
      }
      break;

    case OracleMode::kLmoPo:
      switch (regime) {
        case Regime::kNcC:
          p.a = 3.0 / 4.0;
          p.b = 1.0 / 4.0;
          return p;
        case Regime::kNcSc:
          p.a = 1.0 / 2.0;
          return p;
        case Regime::kCC:
          p.a = 1.0;
          p.b = 1.0 / 3.0;
          return p;
        case Regime::kCSc:
          p.a = 1.0;
          return p;
        default:
          detail::unsupported_pair(regime, mode, "nc-c, nc-sc, c-c, c-sc");
      }
      break;

    case OracleMode::kPoLmo:
      p.ramp = detail::kDefaultRamp;
      switch (regime) {
        case Regime::kNcC:
          p.a = 2.0 / 3.0;
          p.b = 1.0 / 6.0;
          p.scale = 1.0 / 5.0;
          return p;
        case Regime::kNcSc:
          p.a = 1.0 / 2.0;
          p.scale = 1.0 / 5.0;
          return p;
        case Regime::kNcCScy:
          p.a = 3.0 / 5.0;
          p.b = 1.0 / 5.0;
          p.scale = 3.0 / 4.0;
          return p;
        case Regime::kNcScScy:
          p.a = 1.0 / 3.0;
          p.scale = 3.0 / 4.0;
          return p;
        case Regime::kCC:
          p.a = 2.0 / 3.0;
          p.b = 1.0 / 3.0;
          p.scale = 1.0 / 5.0;
          return p;
        case Regime::kCSc:
          p.a = 1.0 / 2.0;
          p.scale = 1.0 / 5.0;
          return p;
        case Regime::kCScScy:
          p.a = 1.0 / 3.0;
          p.scale = 3.0 / 4.0;
          return p;
        case Regime::kCCScy:
          detail::unsupported_pair(
              regime, mode,
              "nc-c, nc-sc, nc-c+scy, nc-sc+scy, c-c, c-sc, c-sc+scy");
      }
      break;
  }
  throw ConfigError("unknown (regime, mode) pair");
}

// ---------------------------------------------------------------------------
// Preset -> plan
// ---------------------------------------------------------------------------

/// Optional knobs a caller may turn when materializing a preset.
struct PresetOverrides {
  /// Smoothing constant C (only for presets that smooth; default 1).
  std::optional<double> smoothing_c;
  /// Ramp coefficient A of the inverse-sum step form (default 1).
  std::optional<double> ramp;
};

/// Materialize a preset for a concrete problem, checking the regime's
/// assumptions at configuration time:
///   - c-* regimes need a payoff convex in x,
///   - *-sc regimes (no smoothing) need strong concavity mu > 0,
///   - *+scy regimes need a strongly convex dual feasible set,
///   - the projected-primal step form must keep its descent margin positive.
inline SolverPlan plan_from_preset(const PayoffProblem& problem,
                                   const RegimePreset& p,
                                   const PresetOverrides& overrides = {}) {
  if (regime_is_convex_x(p.regime) && !problem.convex_in_x()) {
    throw ConfigError(std::string("regime '") + regime_name(p.regime) +
                      "' assumes a payoff convex in x, but " +
                      problem.describe() + " is not");
  }
  const double mu = problem.concavity_mu();
  if (regime_is_strongly_concave(p.regime) && !(mu > 0.0)) {
    throw ConfigError(std::string("regime '") + regime_name(p.regime) +
                      "' assumes strong concavity mu > 0, but " +
                      problem.describe() + " has mu = 0");
  }
  if (regime_needs_strongly_convex_y_set(p.regime) &&
      !(problem.y_set().strong_convexity_alpha() > 0.0)) {
    throw ConfigError(std::string("regime '") + regime_name(p.regime) +
                      "' assumes a strongly convex dual set, but the dual "
                      "set of " +
                      problem.describe() + " is not strongly convex");
  }

  double smoothing_c = p.smoothing_c;
  if (overrides.smoothing_c) {
    if (!regime_is_strongly_concave(p.regime)) {
      smoothing_c = *overrides.smoothing_c;
      if (!(smoothing_c > 0.0)) {
        throw ConfigError("smoothing constant override must be > 0");
      }
    } else if (*overrides.smoothing_c != 0.0) {
      throw ConfigError(std::string("regime '") + regime_name(p.regime) +
                        "' runs without smoothing; cannot override C");
    }
  }

  SolverPlan plan;
  plan.mode = p.mode;
  plan.smoothing = smoothing_c > 0.0 ? SmoothingSchedule(smoothing_c, p.b)
                                     : SmoothingSchedule::off();
  plan.preset_name =
      std::string(regime_name(p.regime)) + "/" + oracle_mode_name(p.mode);
  plan.constants["a"] = p.a;
  plan.constants["b"] = p.b;
  plan.constants["C"] = smoothing_c;

  if (p.mode == OracleMode::kPoLmo) {
    const double ramp = overrides.ramp.value_or(p.ramp);
    if (!(ramp > 0.0)) throw ConfigError("ramp coefficient must be > 0");
    plan.step = StepSchedule::inverse_sum(
        p.scale, ramp, p.a, p.b, problem.lipschitz_xx(),
        problem.lipschitz_yx(), smoothing_c, mu);
    const bool scy = regime_needs_strongly_convex_y_set(p.regime);
    const double margin = inverse_sum_margin_infimum(
        plan.step, plan.smoothing, problem.lipschitz_xx(),
        problem.lipschitz_yx(), mu, scy);
    if (!(margin > 0.0)) {
      throw ConfigError(
          std::string("preset '") + plan.preset_name +
          "' leaves no positive descent margin for " + problem.describe() +
          " (infimum " + std::to_string(margin) +
          "); increase the ramp coefficient or the smoothing constant");
    }
    plan.constants["s"] = p.scale;
    plan.constants["A"] = ramp;
    plan.constants["margin"] = margin;
  } else {
    if (overrides.ramp) {
      throw ConfigError("the ramp coefficient applies only to mode po-lmo");
    }
    plan.step = StepSchedule::power(p.a);
  }
  return plan;
}

/// Convenience overload resolving the table row first.
inline SolverPlan plan_from_preset(const PayoffProblem& problem, Regime regime,
                                   OracleMode mode,
                                   const PresetOverrides& overrides = {}) {
  return plan_from_preset(problem, preset(regime, mode), overrides);
}

// ---------------------------------------------------------------------------
// Fixed-horizon baselines
// ---------------------------------------------------------------------------

/// R-PDCG baseline: the two-LMO step body with constants tuned to a known
/// horizon K — constant step K^{-5/6} and constant smoothing 1e-2 K^{-1/6}.
inline SolverPlan horizon_rpdcg(long horizon) {
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  const double k = static_cast<double>(horizon);
  SolverPlan plan;
  plan.mode = OracleMode::kLmoLmo;
  plan.step = StepSchedule::constant(std::pow(k, -5.0 / 6.0));
  plan.smoothing = SmoothingSchedule(1e-2 * std::pow(k, -1.0 / 6.0), 0.0);
  plan.preset_name = "r-pdcg";
  plan.constants["K"] = k;
  plan.constants["tau"] = plan.step.max_step();
  plan.constants["C"] = plan.smoothing.C();
  plan.constants["b"] = 0.0;
  return plan;
}

/// CG-RPGA baseline: the LMO/projection step body with constants tuned to a
/// known horizon K — constant step K^{-3/4} and constant smoothing
/// 1e-2 K^{-1/4}.
inline SolverPlan horizon_cg_rpga(long horizon) {
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  const double k = static_cast<double>(horizon);
  SolverPlan plan;
  plan.mode = OracleMode::kLmoPo;
  plan.step = StepSchedule::constant(std::pow(k, -3.0 / 4.0));
  plan.smoothing = SmoothingSchedule(1e-2 * std::pow(k, -1.0 / 4.0), 0.0);
  plan.preset_name = "cg-rpga";
  plan.constants["K"] = k;
  plan.constants["tau"] = plan.step.max_step();
  plan.constants["C"] = plan.smoothing.C();
  plan.constants["b"] = 0.0;
  return plan;
}

}  // namespace mmx
