/**
 * @file problem.hpp
 * @brief Smooth saddle-point problem interface: min over X, max over Y.
 *
 * A PayoffProblem exposes the payoff L(x, y), its partial gradients, the
 * feasible sets, and curvature constants:
 *   - lipschitz_xx  Lipschitz constant of grad_x in x (uniform over y)
 *   - lipschitz_yx  Lipschitz constant of grad_y in x (uniform over y)
 *   - lipschitz_yy  Lipschitz constant of grad_y in y (uniform over x)
 *   - concavity_mu  strong-concavity modulus of L(x, .) (0 when merely concave)
 *
 * Optional capabilities (exact best responses) power the dual optimality gap
 * and related diagnostics; querying an unavailable capability throws
 * CapabilityError.
 */
#pragma once

#include <map>
#include <string>

#include "mmx/point.hpp"
#include "mmx/sets.hpp"

namespace mmx {

class PayoffProblem {
 public:
  virtual ~PayoffProblem() = default;

  virtual const FeasibleSet& x_set() const = 0;
  virtual const FeasibleSet& y_set() const = 0;

  virtual double value(const Point& x, const Point& y) const = 0;
  virtual Point grad_x(const Point& x, const Point& y) const = 0;
  virtual Point grad_y(const Point& x, const Point& y) const = 0;

  virtual double lipschitz_xx() const = 0;
  virtual double lipschitz_yx() const = 0;
  virtual double lipschitz_yy() const = 0;
  virtual double concavity_mu() const = 0;

  /// Whether L(., y) is convex for every feasible y.
  virtual bool convex_in_x() const = 0;

  /// Default starting iterates (deterministic).
  virtual Point initial_x() const { return x_set().canonical_point(); }
  virtual Point initial_y() const { return y_set().canonical_point(); }

  /// argmax over Y of L(x, .), when available in closed form.
  virtual bool has_best_response_y() const { return false; }
  virtual Point best_response_y(const Point& /*x*/) const {
    throw CapabilityError(describe() +
                          ": exact dual best response unavailable; use the "
                          "certified approximate dual gap instead");
  }

  /// argmax over Y of L(x, .) - (beta/2)||. - y0||^2, when available.
  virtual bool has_smoothed_best_response_y() const { return false; }
  virtual Point smoothed_best_response_y(const Point& /*x*/, double /*beta*/,
                                         const Point& /*y0*/) const {
    throw CapabilityError(describe() +
                          ": smoothed dual best response unavailable");
  }

  /// argmin over X of L(., y), when available in closed form.
  virtual bool has_best_response_x() const { return false; }
  virtual Point best_response_x(const Point& /*y*/) const {
    throw CapabilityError(describe() + ": primal best response unavailable");
  }

  /// Problem-specific constants worth echoing into run summaries.
  virtual std::map<std::string, double> metadata() const { return {}; }

  virtual std::string describe() const = 0;
};

}  // namespace mmx
