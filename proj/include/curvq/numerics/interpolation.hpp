#pragma once

#include <span>
#include <utility>
#include <vector>

namespace curvq {

/// Piecewise cubic Hermite interpolant with Fritsch-Butland slopes (PCHIP).
/// Monotone on every interval where the data are monotone and never leaves
/// the range of the two bracketing node values.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double q) const;
  double derivative(double q) const;
  double lower() const noexcept { return x_.front(); }
  double upper() const noexcept { return x_.back(); }

 private:
  std::size_t interval(double q) const;
  std::vector<double> x_, y_, slope_;
};

/// C2 cubic spline with not-a-knot end conditions.
class CubicSpline {
 public:
  CubicSpline(std::vector<double> x, std::vector<double> y);

  double operator()(double q) const;
  double derivative(double q) const;
  double second_derivative(double q) const;
  double lower() const noexcept { return x_.front(); }
  double upper() const noexcept { return x_.back(); }

 private:
  std::size_t interval(double q) const;
  std::vector<double> x_, y_, m_;  // m_: second derivatives at nodes
};

/// Cubic Hermite interpolation with caller-supplied node derivatives.
class HermiteCubic {
 public:
  HermiteCubic(std::vector<double> x, std::vector<double> y, std::vector<double> dy);

  double operator()(double q) const;
  double derivative(double q) const;
  double lower() const noexcept { return x_.front(); }
  double upper() const noexcept { return x_.back(); }

 private:
  std::size_t interval(double q) const;
  std::vector<double> x_, y_, dy_;
};

/// One-shot monotone interpolation; query outside the table is a DomainError.
double interpolate_monotone(std::span<const std::pair<double, double>> table, double query);

}  // namespace curvq
