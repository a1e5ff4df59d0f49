#include "curvq/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvq/numerics.hpp"

namespace curvq {
namespace {

constexpr double kArcTol = 1e-13;

}  // namespace

SurfaceProfile::SurfaceProfile(ProfileKind kind, Fn f, Fn df, Fn d2f, double rho_min,
                               double rho_max, std::string label,
                               std::optional<GaussianParameters> gaussian)
    : kind_(kind),
      f_(std::make_shared<const Fn>(std::move(f))),
      df_(std::make_shared<const Fn>(std::move(df))),
      d2f_(std::make_shared<const Fn>(std::move(d2f))),
      rho_min_(rho_min),
      rho_max_(rho_max),
      label_(std::move(label)),
      gaussian_(gaussian) {
  if (!(rho_min >= 0.0) || !(rho_max > rho_min) || !std::isfinite(rho_max)) {
    throw DomainError("SurfaceProfile: domain must satisfy 0 <= rho_min < rho_max < inf");
  }
}

bool SurfaceProfile::contains(double rho) const noexcept {
  const double slack = 1e-12 * std::max(1.0, rho_max_);
  return rho >= rho_min_ - slack && rho <= rho_max_ + slack;
}

void SurfaceProfile::check(double rho) const {
  if (!contains(rho)) {
    throw DomainError("SurfaceProfile '" + label_ + "': rho = " + std::to_string(rho) +
                      " outside [" + std::to_string(rho_min_) + ", " + std::to_string(rho_max_) + "]");
  }
}

double SurfaceProfile::f(double rho) const {
  check(rho);
  return (*f_)(std::clamp(rho, rho_min_, rho_max_));
}

double SurfaceProfile::df(double rho) const {
  check(rho);
  return (*df_)(std::clamp(rho, rho_min_, rho_max_));
}

double SurfaceProfile::d2f(double rho) const {
  check(rho);
  return (*d2f_)(std::clamp(rho, rho_min_, rho_max_));
}

double SurfaceProfile::stretch(double rho) const {
  const double s = df(rho);
  return std::sqrt(1.0 + s * s);
}

double SurfaceProfile::length_scale() const noexcept {
  return gaussian_ ? gaussian_->dispersion : 1.0;
}

SurfaceProfile make_gaussian_bump(double depth, double dispersion, double rho_max) {
  if (!(depth > 0.0) || !(dispersion > 0.0)) {
    throw DomainError("make_gaussian_bump: A0 and sigma0 must be positive");
  }
  if (!(rho_max > 0.0)) throw DomainError("make_gaussian_bump: rho_max must be positive");
  const double a = depth, s2 = dispersion * dispersion;
  auto f = [a, s2](double r) { return -a * std::exp(-r * r / s2); };
  auto df = [a, s2](double r) { return 2.0 * a * r / s2 * std::exp(-r * r / s2); };
  auto d2f = [a, s2](double r) {
    return 2.0 * a / s2 * (1.0 - 2.0 * r * r / s2) * std::exp(-r * r / s2);
  };
  return SurfaceProfile(ProfileKind::analytic_gaussian, f, df, d2f, 0.0, rho_max,
                        "gaussian(A0=" + std::to_string(depth) + ",sigma0=" +
                            std::to_string(dispersion) + ")",
                        GaussianParameters{depth, dispersion});
}

SurfaceProfile make_plane(double rho_max) {
  auto zero = [](double) { return 0.0; };
  return SurfaceProfile(ProfileKind::analytic, zero, zero, zero, 0.0, rho_max, "plane");
}

SurfaceProfile make_analytic_profile(SurfaceProfile::Fn f, SurfaceProfile::Fn df,
                                     SurfaceProfile::Fn d2f, double rho_min, double rho_max,
                                     std::string label) {
  return SurfaceProfile(ProfileKind::analytic, std::move(f), std::move(df), std::move(d2f),
                        rho_min, rho_max, std::move(label));
}

SurfaceProfile make_tabulated_profile(std::span<const std::pair<double, double>> samples) {
  if (samples.size() < 4) throw DomainError("make_tabulated_profile: need at least 4 samples");
  std::vector<double> rho, f;
  for (const auto& [r, v] : samples) {
    rho.push_back(r);
    f.push_back(v);
  }
  for (std::size_t i = 1; i < rho.size(); ++i) {
    if (!(rho[i] > rho[i - 1])) {
      throw DomainError("make_tabulated_profile: rho must be strictly increasing");
    }
  }
  if (rho.front() < 0.0) throw DomainError("make_tabulated_profile: rho must be non-negative");
  const double lo = rho.front(), hi = rho.back();
  auto spline = std::make_shared<const CubicSpline>(std::move(rho), std::move(f));
  return SurfaceProfile(
      ProfileKind::tabulated, [spline](double r) { return (*spline)(r); },
      [spline](double r) { return spline->derivative(r); },
      [spline](double r) { return spline->second_derivative(r); }, lo, hi, "tabulated");
}

SurfaceProfile make_inverse_designed_profile(std::vector<double> rho, std::vector<double> f,
                                             std::vector<double> df) {
  if (rho.size() < 4 || f.size() != rho.size() || df.size() != rho.size()) {
    throw DomainError("make_inverse_designed_profile: need >= 4 matching (rho, f, df) nodes");
  }
  std::vector<double> amp(df.size());
  for (std::size_t i = 0; i < df.size(); ++i) amp[i] = df[i] / std::sqrt(1.0 + df[i] * df[i]);
  const double lo = rho.front(), hi = rho.back();
  auto amplitude = std::make_shared<const CubicSpline>(rho, std::move(amp));
  auto height = std::make_shared<const HermiteCubic>(std::move(rho), std::move(f), std::move(df));
  auto slope = [amplitude](double r) {
    const double a = (*amplitude)(r);
    const double c = 1.0 - a * a;
    if (!(c > 0.0)) throw NumericalError("inverse-designed profile: |A| >= 1 (vertical tangent)");
    return a / std::sqrt(c);
  };
  auto curvature = [amplitude](double r) {
    const double a = (*amplitude)(r);
    const double c = 1.0 - a * a;
    if (!(c > 0.0)) throw NumericalError("inverse-designed profile: |A| >= 1 (vertical tangent)");
    return amplitude->derivative(r) / (c * std::sqrt(c));
  };
  return SurfaceProfile(ProfileKind::inverse_designed, [height](double r) { return (*height)(r); },
                        slope, curvature, lo, hi, "inverse_designed");
}

CurvatureSample curvature_at(const SurfaceProfile& profile, double rho) {
  const double d1 = profile.df(rho);
  const double d2 = profile.d2f(rho);
  const double stretch2 = 1.0 + d1 * d1;
  CurvatureSample s;
  s.rho = rho;
  s.k1 = d2 / (stretch2 * std::sqrt(stretch2));
  if (rho > 0.0) {
    s.k2 = d1 / (rho * std::sqrt(stretch2));
  } else {
    // Umbilic limit on the axis: ḟ/ρ → f̈(0) when ḟ(0) = 0.
    s.k2 = d1 == 0.0 ? d2 : std::copysign(std::numeric_limits<double>::infinity(), d1);
  }
  s.mean = 0.5 * (s.k1 + s.k2);
  s.gauss = s.k1 * s.k2;
  s.metric_det = rho * rho * stretch2;
  return s;
}

double arc_length(const SurfaceProfile& profile, double rho) {
  if (!profile.contains(rho)) throw DomainError("arc_length: rho outside profile domain");
  const double lo = profile.rho_min();
  if (rho <= lo) return lo;
  auto s = [&profile](double r) { return profile.stretch(r); };
  return lo + integrate_adaptive(s, lo, rho, kArcTol).value;
}

double rho_of_x(const SurfaceProfile& profile, double x) {
  const double x_lo = profile.rho_min();
  const double x_hi = arc_length(profile, profile.rho_max());
  const double slack = 1e-12 * std::max(1.0, x_hi);
  if (!(x >= x_lo - slack && x <= x_hi + slack)) {
    throw DomainError("rho_of_x: x outside [x(rho_min), x(rho_max)]");
  }
  x = std::clamp(x, x_lo, x_hi);
  if (x == x_lo) return profile.rho_min();
  if (x == x_hi) return profile.rho_max();
  const double hi = std::min(profile.rho_max(), x);
  auto g = [&](double r) { return arc_length(profile, r) - x; };
  double r = find_root_bracketed(g, profile.rho_min(), hi, 1e-14 * std::max(1.0, x));
  // one Newton polish
  const double s = profile.stretch(r);
  const double polished = r - g(r) / s;
  if (polished >= profile.rho_min() && polished <= profile.rho_max()) r = polished;
  return r;
}

std::vector<double> arc_length_on_grid(const SurfaceProfile& profile, std::span<const double> rho) {
  std::vector<double> x(rho.size());
  if (rho.empty()) return x;
  auto s = [&profile](double r) { return profile.stretch(r); };
  x[0] = arc_length(profile, rho[0]);
  for (std::size_t i = 1; i < rho.size(); ++i) {
    if (!(rho[i] > rho[i - 1])) throw DomainError("arc_length_on_grid: grid must be increasing");
    x[i] = x[i - 1] + integrate_adaptive(s, rho[i - 1], rho[i], kArcTol).value;
  }
  return x;
}

std::vector<double> rho_on_x_grid(const SurfaceProfile& profile, std::span<const double> x) {
  std::vector<double> out(x.size());
  if (x.empty()) return out;
  auto s = [&profile](double r) { return profile.stretch(r); };
  double rho_prev = rho_of_x(profile, x[0]);
  double x_prev = arc_length(profile, rho_prev);
  out[0] = rho_prev;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) throw DomainError("rho_on_x_grid: grid must be increasing");
    const double target = x[i];
    const double upper = std::min(profile.rho_max(), rho_prev + (target - x_prev));
    auto residual = [&](double r) {
      return x_prev + integrate_adaptive(s, rho_prev, r, kArcTol).value - target;
    };
    double r = std::min(upper, rho_prev + (target - x_prev) / s(rho_prev));
    double res = residual(r);
    bool converged = false;
    for (int it = 0; it < 30; ++it) {
      if (std::abs(res) <= 1e-13 * (1.0 + std::abs(target))) {
        converged = true;
        break;
      }
      double next = r - res / s(r);
      if (!(next > rho_prev && next <= upper)) break;
      r = next;
      res = residual(r);
    }
    if (!converged) {
      if (residual(upper) < 0.0) throw DomainError("rho_on_x_grid: x beyond profile domain");
      r = find_root_bracketed(residual, rho_prev, upper, 1e-15 * std::max(1.0, upper));
      res = residual(r);
    }
    out[i] = r;
    x_prev = target + res;
    rho_prev = r;
  }
  return out;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t nodes) {
  if (nodes < 2) throw DomainError("uniform_grid: need at least two nodes");
  std::vector<double> g(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(nodes - 1);
  }
  g.back() = hi;
  return g;
}

}  // namespace curvq
