#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "curvq/error.hpp"

namespace curvq {

using RealFunction = std::function<double(double)>;

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

struct QuadratureOptions {
  double tol = 1e-10;
  std::size_t max_subdivisions = 5000;
  int max_depth = 60;
};

/// Thrown when the subdivision budget is exhausted; carries the partial result.
class QuadratureError : public NumericalError {
 public:
  QuadratureError(const std::string& what, QuadratureResult partial)
      : NumericalError(what), partial_(partial) {}
  const QuadratureResult& partial() const noexcept { return partial_; }

 private:
  QuadratureResult partial_;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature of fn over [a, b].
///
/// Stops once the summed error estimate is at most max(tol, tol*|value|).
/// The integrand is never evaluated at the endpoints, so integrable endpoint
/// singularities (log, x^-1/2) are tolerated. b < a integrates backwards.
QuadratureResult integrate_adaptive(const RealFunction& fn, double a, double b,
                                    double tol = 1e-10);
QuadratureResult integrate_adaptive(const RealFunction& fn, double a, double b,
                                    const QuadratureOptions& options);

/// Running integral G(t) = G(t0) + ∫_{t0}^{t} g over a fixed set of support
/// nodes. Node values are accumulated panel by panel; evaluation between nodes
/// integrates from the nearest node below, so results are quadrature-exact
/// rather than interpolated.
class CumulativeIntegral {
 public:
  CumulativeIntegral(RealFunction integrand, std::vector<double> nodes,
                     double initial_value = 0.0, double tol = 1e-13);

  double operator()(double t) const;
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> node_values() const noexcept { return values_; }
  double lower() const noexcept { return nodes_.front(); }
  double upper() const noexcept { return nodes_.back(); }

 private:
  RealFunction integrand_;
  std::vector<double> nodes_;
  std::vector<double> values_;
  double tol_;
};

}  // namespace curvq
