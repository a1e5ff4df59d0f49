#include "curvq/numerics/interpolation.hpp"

#include <algorithm>
#include <cmath>

#include "curvq/error.hpp"

namespace curvq {
namespace {

void validate_nodes(const std::vector<double>& x, const std::vector<double>& y, std::size_t min_size,
                    const char* who) {
  if (x.size() != y.size()) throw DomainError(std::string(who) + ": x and y sizes differ");
  if (x.size() < min_size) {
    throw DomainError(std::string(who) + ": need at least " + std::to_string(min_size) + " nodes");
  }
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) throw DomainError(std::string(who) + ": x must be strictly increasing");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw DomainError(std::string(who) + ": table values must be finite");
    }
  }
}

std::size_t locate(const std::vector<double>& x, double q, const char* who) {
  if (!(q >= x.front() && q <= x.back())) {
    throw DomainError(std::string(who) + ": query outside table range");
  }
  auto it = std::upper_bound(x.begin(), x.end(), q);
  std::size_t i = static_cast<std::size_t>(it - x.begin());
  if (i == 0) return 0;
  return std::min(i - 1, x.size() - 2);
}

// Hermite basis on [x0, x0+h] with t in [0, 1].
double hermite_value(double y0, double y1, double d0, double d1, double h, double t) {
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 +
         (t3 - t2) * h * d1;
}

double hermite_derivative(double y0, double y1, double d0, double d1, double h, double t) {
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * y0 + (-6 * t2 + 6 * t) * y1) / h + (3 * t2 - 4 * t + 1) * d0 +
         (3 * t2 - 2 * t) * d1;
}

double pchip_edge(double h0, double h1, double m0, double m1) {
  double d = ((2 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
  if (std::signbit(d) != std::signbit(m0) || m0 == 0.0) {
    d = 0.0;
  } else if (std::signbit(m0) != std::signbit(m1) && std::abs(d) > 3 * std::abs(m0)) {
    d = 3 * m0;
  }
  return d;
}

}  // namespace

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  validate_nodes(x_, y_, 2, "MonotoneCubic");
  const std::size_t n = x_.size();
  slope_.assign(n, 0.0);
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    delta[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  if (n == 2) {
    slope_[0] = slope_[1] = delta[0];
    return;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double a = delta[i - 1], b = delta[i];
    if (a == 0.0 || b == 0.0 || std::signbit(a) != std::signbit(b)) {
      slope_[i] = 0.0;
    } else {
      const double w1 = 2 * h[i] + h[i - 1];
      const double w2 = h[i] + 2 * h[i - 1];
      slope_[i] = (w1 + w2) / (w1 / a + w2 / b);
    }
  }
  slope_[0] = pchip_edge(h[0], h[1], delta[0], delta[1]);
  slope_[n - 1] = pchip_edge(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

std::size_t MonotoneCubic::interval(double q) const { return locate(x_, q, "MonotoneCubic"); }

double MonotoneCubic::operator()(double q) const {
  const std::size_t i = interval(q);
  if (q == x_[i]) return y_[i];
  if (q == x_[i + 1]) return y_[i + 1];
  const double h = x_[i + 1] - x_[i];
  return hermite_value(y_[i], y_[i + 1], slope_[i], slope_[i + 1], h, (q - x_[i]) / h);
}

double MonotoneCubic::derivative(double q) const {
  const std::size_t i = interval(q);
  const double h = x_[i + 1] - x_[i];
  return hermite_derivative(y_[i], y_[i + 1], slope_[i], slope_[i + 1], h, (q - x_[i]) / h);
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  validate_nodes(x_, y_, 4, "CubicSpline");
  const std::size_t n = x_.size();
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    delta[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  // Unknowns M_1..M_{n-2}; M_0 and M_{n-1} eliminated through the
  // not-a-knot conditions (third derivative continuous at x_1 and x_{n-2}).
  const std::size_t m = n - 2;
  std::vector<double> sub(m, 0.0), diag(m, 0.0), sup(m, 0.0), rhs(m, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t i = r + 1;
    sub[r] = h[i - 1];
    diag[r] = 2 * (h[i - 1] + h[i]);
    sup[r] = h[i];
    rhs[r] = 6 * (delta[i] - delta[i - 1]);
  }
  // M_0 = ((h0+h1) M_1 - h0 M_2) / h1
  {
    const double c1 = (h[0] + h[1]) / h[1], c2 = -h[0] / h[1];
    diag[0] += sub[0] * c1;
    if (m > 1) sup[0] += sub[0] * c2;
    sub[0] = 0.0;
  }
  // M_{n-1} = ((h_{n-2}+h_{n-3}) M_{n-2} - h_{n-2} M_{n-3}) / h_{n-3}
  {
    const double hl = h[n - 2], hp = h[n - 3];
    const double c1 = (hl + hp) / hp, c2 = -hl / hp;
    diag[m - 1] += sup[m - 1] * c1;
    if (m > 1) sub[m - 1] += sup[m - 1] * c2;
    sup[m - 1] = 0.0;
  }
  // Thomas algorithm (diagonally dominant apart from the modified end rows).
  for (std::size_t r = 1; r < m; ++r) {
    const double w = sub[r] / diag[r - 1];
    diag[r] -= w * sup[r - 1];
    rhs[r] -= w * rhs[r - 1];
  }
  std::vector<double> inner(m);
  inner[m - 1] = rhs[m - 1] / diag[m - 1];
  for (std::size_t r = m - 1; r-- > 0;) inner[r] = (rhs[r] - sup[r] * inner[r + 1]) / diag[r];

  m_.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) m_[r + 1] = inner[r];
  m_[0] = ((h[0] + h[1]) * m_[1] - h[0] * m_[2]) / h[1];
  m_[n - 1] = ((h[n - 2] + h[n - 3]) * m_[n - 2] - h[n - 2] * m_[n - 3]) / h[n - 3];
}

std::size_t CubicSpline::interval(double q) const { return locate(x_, q, "CubicSpline"); }

double CubicSpline::operator()(double q) const {
  const std::size_t i = interval(q);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - q) / h, b = (q - x_[i]) / h;
  return a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double q) const {
  const std::size_t i = interval(q);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - q) / h, b = (q - x_[i]) / h;
  return (y_[i + 1] - y_[i]) / h + ((1 - 3 * a * a) * m_[i] + (3 * b * b - 1) * m_[i + 1]) * h / 6.0;
}

double CubicSpline::second_derivative(double q) const {
  const std::size_t i = interval(q);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - q) / h, b = (q - x_[i]) / h;
  return a * m_[i] + b * m_[i + 1];
}

HermiteCubic::HermiteCubic(std::vector<double> x, std::vector<double> y, std::vector<double> dy)
    : x_(std::move(x)), y_(std::move(y)), dy_(std::move(dy)) {
  validate_nodes(x_, y_, 2, "HermiteCubic");
  if (dy_.size() != x_.size()) throw DomainError("HermiteCubic: derivative count differs");
}

std::size_t HermiteCubic::interval(double q) const { return locate(x_, q, "HermiteCubic"); }

double HermiteCubic::operator()(double q) const {
  const std::size_t i = interval(q);
  const double h = x_[i + 1] - x_[i];
  return hermite_value(y_[i], y_[i + 1], dy_[i], dy_[i + 1], h, (q - x_[i]) / h);
}

double HermiteCubic::derivative(double q) const {
  const std::size_t i = interval(q);
  const double h = x_[i + 1] - x_[i];
  return hermite_derivative(y_[i], y_[i + 1], dy_[i], dy_[i + 1], h, (q - x_[i]) / h);
}

double interpolate_monotone(std::span<const std::pair<double, double>> table, double query) {
  std::vector<double> x, y;
  x.reserve(table.size());
  y.reserve(table.size());
  for (const auto& [a, b] : table) {
    x.push_back(a);
    y.push_back(b);
  }
  return MonotoneCubic(std::move(x), std::move(y))(query);
}

}  // namespace curvq
