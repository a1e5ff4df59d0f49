#pragma once

#include "curvq/numerics/quadrature.hpp"

namespace curvq {

struct RootBracket {
  double root = 0.0;   ///< best estimate, inside [lower, upper]
  double lower = 0.0;
  double upper = 0.0;
  int iterations = 0;
};

/// Brent's method (inverse quadratic / secant steps safeguarded by bisection).
/// Requires fn(lo)*fn(hi) <= 0; the returned bracket has width <= tol
/// (or is degenerate at an exact zero).
RootBracket find_root_bracket(const RealFunction& fn, double lo, double hi,
                              double tol = 1e-12, int max_iterations = 300);

double find_root_bracketed(const RealFunction& fn, double lo, double hi,
                           double tol = 1e-12);

}  // namespace curvq
