#include "curvq/numerics/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

namespace curvq {
namespace {

// Kronrod 15-point abscissae (positive half; last entry is the centre) and the
// embedded 7-point Gauss weights, as tabulated in QUADPACK qk15.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
  double a, b;
  double value;
  double error;
  double roundoff_floor;
  int depth;
  bool operator<(const Panel& other) const { return error < other.error; }
};

double checked(const RealFunction& fn, double x) {
  const double v = fn(x);
  if (!std::isfinite(v)) {
    throw NumericalError("integrand is not finite at x = " + std::to_string(x));
  }
  return v;
}

Panel gauss_kronrod(const RealFunction& fn, double a, double b, int depth) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked(fn, centre);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double abs_sum = std::abs(kronrod);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = checked(fn, centre - dx);
    f2[j] = checked(fn, centre + dx);
    const double pair = f1[j] + f2[j];
    kronrod += kWgk[j] * pair;
    abs_sum += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double asc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  const double value = kronrod * half;
  const double resabs = abs_sum * std::abs(half);
  const double resasc = asc * std::abs(half);
  double error = std::abs((kronrod - gauss) * half);
  if (resasc != 0.0 && error != 0.0) {
    error = resasc * std::min(1.0, std::pow(200.0 * error / resasc, 1.5));
  }
  const double floor = 50.0 * kEps * resabs;
  error = std::max(error, floor);
  return Panel{a, b, value, error, floor, depth};
}

}  // namespace

QuadratureResult integrate_adaptive(const RealFunction& fn, double a, double b, double tol) {
  QuadratureOptions options;
  options.tol = tol;
  return integrate_adaptive(fn, a, b, options);
}

QuadratureResult integrate_adaptive(const RealFunction& fn, double a, double b,
                                    const QuadratureOptions& options) {
  if (!(options.tol > 0.0)) throw DomainError("integrate_adaptive: tol must be positive");
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("integrate_adaptive: endpoints must be finite");
  }
  if (a == b) return QuadratureResult{0.0, 0.0, 1};
  if (b < a) {
    auto r = integrate_adaptive(fn, b, a, options);
    r.value = -r.value;
    return r;
  }

  std::priority_queue<Panel> active;
  double settled_value = 0.0;
  double settled_error = 0.0;
  double depth_capped_error = 0.0;
  std::size_t evaluations = 15;
  std::size_t subdivisions = 0;
  bool budget_exhausted = false;

  Panel first = gauss_kronrod(fn, a, b, 0);
  double total_value = first.value;
  double total_error = first.error;
  active.push(first);

  auto target = [&] { return std::max(options.tol, options.tol * std::abs(total_value)); };

  while (!active.empty() && total_error > target()) {
    Panel worst = active.top();
    active.pop();
    // Panels at their roundoff floor or at the depth cap cannot improve.
    if (worst.error <= 2.0 * worst.roundoff_floor || worst.depth >= options.max_depth) {
      if (worst.error > 2.0 * worst.roundoff_floor) depth_capped_error += worst.error;
      settled_value += worst.value;
      settled_error += worst.error;
      continue;
    }
    if (subdivisions >= options.max_subdivisions) {
      active.push(worst);
      budget_exhausted = true;
      break;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = gauss_kronrod(fn, worst.a, mid, worst.depth + 1);
    Panel right = gauss_kronrod(fn, mid, worst.b, worst.depth + 1);
    evaluations += 30;
    ++subdivisions;
    total_value += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    active.push(left);
    active.push(right);
  }

  // Re-sum from the panels to shed accumulated update roundoff.
  double value = settled_value;
  double error = settled_error;
  while (!active.empty()) {
    value += active.top().value;
    error += active.top().error;
    active.pop();
  }
  QuadratureResult result{value, error, evaluations};
  const double goal = std::max(options.tol, options.tol * std::abs(value));
  if (budget_exhausted && error > goal) {
    throw QuadratureError("integrate_adaptive: subdivision limit reached before tolerance", result);
  }
  if (depth_capped_error > goal) {
    throw QuadratureError("integrate_adaptive: recursion depth cap reached before tolerance",
                          result);
  }
  return result;
}

CumulativeIntegral::CumulativeIntegral(RealFunction integrand, std::vector<double> nodes,
                                       double initial_value, double tol)
    : integrand_(std::move(integrand)), nodes_(std::move(nodes)), tol_(tol) {
  if (nodes_.size() < 2) throw DomainError("CumulativeIntegral: need at least two nodes");
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1])) {
      throw DomainError("CumulativeIntegral: nodes must be strictly increasing");
    }
  }
  values_.resize(nodes_.size());
  values_[0] = initial_value;
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    values_[i] = values_[i - 1] + integrate_adaptive(integrand_, nodes_[i - 1], nodes_[i], tol_).value;
  }
}

double CumulativeIntegral::operator()(double t) const {
  if (t < nodes_.front() || t > nodes_.back()) {
    throw DomainError("CumulativeIntegral: argument outside support");
  }
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
  std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
  i = (i == 0) ? 0 : i - 1;
  if (i + 1 < nodes_.size() && nodes_[i + 1] - t < t - nodes_[i]) {
    // integrate backwards from the closer node above
    return values_[i + 1] - integrate_adaptive(integrand_, t, nodes_[i + 1], tol_).value;
  }
  if (t == nodes_[i]) return values_[i];
  return values_[i] + integrate_adaptive(integrand_, nodes_[i], t, tol_).value;
}

}  // namespace curvq
