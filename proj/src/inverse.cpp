#include "curvq/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "curvq/numerics.hpp"
#include "curvq/potential.hpp"
#include "curvq/spectral.hpp"

namespace curvq {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRootTol = 1e-13;

void check_mq(int mq) {
  if (mq < 0) throw DomainError("angular quantum number mq must be >= 0");
}

double centrifugal(int mq) { return static_cast<double>(mq) * mq - 0.25; }

double radicand(const PrescribedPotential& u, int mq, double rho) {
  return u(rho) + centrifugal(mq) / (rho * rho);
}

// Amplitude increment 2∫_a^b of the integrand.
double amplitude_panel(const PrescribedPotential& u, int mq, double a, double b) {
  if (a == b) return 0.0;
  auto g = [&](double r) { return inverse_integrand(u, mq, r); };
  return 2.0 * integrate_adaptive(g, a, b, 1e-14).value;
}

// First ρ above `from` where the radicand turns nonnegative (mq = 0 real boundary).
double real_boundary(const PrescribedPotential& u, int mq) {
  if (u.kind() == PotentialKind::harmonic && mq == 0) return u.length_unit();
  auto g = [&](double r) { return r * r * u(r) + centrifugal(mq); };
  double lo = u.rho_lo() > 0.0 ? u.rho_lo() : 1e-6;
  if (g(lo) >= 0.0) return lo;
  const double hi_lim = std::isfinite(u.rho_hi()) ? u.rho_hi() : 1e8;
  for (double hi = lo * 1.1; hi <= hi_lim * (1.0 + 1e-15); hi = std::min(hi * 1.1, hi_lim)) {
    if (g(hi) >= 0.0) return find_root_bracketed(g, lo, hi, kRootTol * hi);
    lo = hi;
    if (hi == hi_lim) break;
  }
  throw DomainError("strip_bounds: integrand is nowhere real for potential '" + u.label() +
                    "' and mq = " + std::to_string(mq));
}

// Root of amplitude(ref, ρ) = target, stepping geometrically from `start` in `direction`.
double amplitude_crossing(const PrescribedPotential& u, int mq, double ref, double start,
                          double target, int direction) {
  const double factor = direction > 0 ? 1.05 : 1.0 / 1.05;
  const double lim_hi = std::isfinite(u.rho_hi()) ? u.rho_hi() : 1e8;
  const double lim_lo = std::max(u.rho_lo(), 1e-12);
  double a_prev = amplitude(u, mq, ref, start), r_prev = start;
  for (int k = 0; k < 2000; ++k) {
    double r = r_prev * factor;
    r = direction > 0 ? std::min(r, lim_hi) : std::max(r, lim_lo);
    if (r == r_prev) break;
    const double a = a_prev + amplitude_panel(u, mq, r_prev, r);
    if ((a - target) * (a_prev - target) <= 0.0) {
      auto g = [&](double t) { return amplitude(u, mq, ref, t) - target; };
      const double lo = std::min(r, r_prev), hi = std::max(r, r_prev);
      return find_root_bracketed(g, lo, hi, kRootTol * hi);
    }
    a_prev = a;
    r_prev = r;
  }
  throw DomainError("strip_bounds: amplitude never reaches " + std::to_string(target) +
                    " for potential '" + u.label() + "'");
}

double harmonic_zero(double omega, int mq) {
  if (mq == 0) return 1.0 / std::sqrt(2.0 * omega);
  auto g = [&](double r) { return harmonic_amplitude_closed_form(omega, mq, r); };
  double lo = 1.0 / std::sqrt(2.0 * omega), hi = lo;
  while (g(lo) > 0.0) lo *= 0.5;
  while (g(hi) < 0.0) hi *= 2.0;
  return find_root_bracketed(g, lo, hi, kRootTol * hi);
}

}  // namespace

PrescribedPotential::PrescribedPotential(PotentialKind kind, RealFunction u, double lo, double hi,
                                         double omega, std::string label)
    : kind_(kind), u_(std::move(u)), rho_lo_(lo), rho_hi_(hi), omega_(omega),
      label_(std::move(label)) {}

PrescribedPotential PrescribedPotential::free() {
  return PrescribedPotential(PotentialKind::free, [](double) { return 0.0; }, 0.0, kInf, 0.0,
                             "free");
}

PrescribedPotential PrescribedPotential::harmonic(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw DomainError("harmonic potential: omega must be > 0");
  }
  return PrescribedPotential(
      PotentialKind::harmonic, [omega](double r) { return omega * omega * r * r; }, 0.0, kInf,
      omega, "harmonic");
}

PrescribedPotential PrescribedPotential::custom(RealFunction u, double rho_lo, double rho_hi,
                                                std::string label) {
  if (!(rho_lo >= 0.0) || !(rho_hi > rho_lo)) {
    throw DomainError("custom potential: need 0 <= rho_lo < rho_hi");
  }
  return PrescribedPotential(PotentialKind::custom, std::move(u), rho_lo, rho_hi, 0.0,
                             std::move(label));
}

PrescribedPotential PrescribedPotential::tabulated(
    std::span<const std::pair<double, double>> samples) {
  if (samples.size() < 2) throw DomainError("tabulated potential: need at least two samples");
  std::vector<double> r, u;
  for (const auto& [x, y] : samples) {
    if (!(y >= 0.0)) throw DomainError("tabulated potential: U must be >= 0");
    r.push_back(x);
    u.push_back(y);
  }
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (!(r[i] > r[i - 1])) throw DomainError("tabulated potential: rho must be increasing");
  }
  const double lo = r.front(), hi = r.back();
  auto interp = std::make_shared<const MonotoneCubic>(std::move(r), std::move(u));
  return custom([interp](double x) { return std::max(0.0, (*interp)(x)); }, lo, hi, "table");
}

double PrescribedPotential::operator()(double rho) const {
  if (!contains(rho)) {
    throw DomainError("potential '" + label_ + "': rho = " + std::to_string(rho) +
                      " outside its domain");
  }
  return u_(rho);
}

double PrescribedPotential::length_unit() const noexcept {
  return kind_ == PotentialKind::harmonic ? 1.0 / std::sqrt(2.0 * omega_) : 1.0;
}

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::free: return "free";
    case PotentialKind::harmonic: return "harmonic";
    case PotentialKind::custom: return "custom";
  }
  return "unknown";
}

std::string to_string(BoundCriterion criterion) {
  switch (criterion) {
    case BoundCriterion::integrand_real_boundary: return "integrand_real_boundary";
    case BoundCriterion::amplitude_zero: return "amplitude_zero";
    case BoundCriterion::amplitude_one: return "amplitude_one";
  }
  return "unknown";
}

double inverse_integrand(const PrescribedPotential& potential, int mq, double rho) {
  check_mq(mq);
  if (!(rho > 0.0)) throw DomainError("inverse_integrand: rho must be > 0");
  const double q = radicand(potential, mq, rho);
  if (q < 0.0) {
    // roundoff at the real boundary
    if (q > -1e-13 * std::abs(centrifugal(mq)) / (rho * rho)) return 0.0;
    throw DomainError("integrand not real at rho = " + std::to_string(rho));
  }
  return std::sqrt(q);
}

double amplitude(const PrescribedPotential& potential, int mq, double rho_ref, double rho) {
  return amplitude_panel(potential, mq, rho_ref, rho);
}

double harmonic_amplitude_closed_form(double omega, int mq, double rho) {
  check_mq(mq);
  if (!(omega > 0.0)) throw DomainError("harmonic amplitude: omega must be > 0");
  const double w2r4 = omega * omega * rho * rho * rho * rho;
  if (mq == 0) {
    const double t = 4.0 * w2r4 - 1.0;
    if (t < 0.0) {
      if (t > -1e-14) return 0.0;
      throw DomainError("harmonic amplitude (mq=0): rho below 1/sqrt(2 omega)");
    }
    const double s = std::sqrt(t);
    return 0.5 * (s - std::atan(s));
  }
  if (!(rho > 0.0)) throw DomainError("harmonic amplitude: rho must be > 0");
  const double c = centrifugal(mq);
  return std::sqrt(w2r4 + c) - std::sqrt(c) * std::atanh(1.0 / std::sqrt(1.0 + w2r4 / c));
}

StripBounds strip_bounds(const PrescribedPotential& potential, int mq,
                         const StripOptions& options) {
  check_mq(mq);
  StripBounds sb;
  sb.mq = mq;
  sb.potential_kind = potential.kind();
  sb.branch = options.branch;

  if (options.rho_ref) {
    if (!(*options.rho_ref > 0.0)) throw DomainError("strip_bounds: rho_ref must be > 0");
    (void)inverse_integrand(potential, mq, *options.rho_ref);
    sb.rho_ref = *options.rho_ref;
    sb.lower_criterion = BoundCriterion::amplitude_zero;
  } else if (mq == 0) {
    sb.rho_ref = real_boundary(potential, mq);
    sb.lower_criterion = BoundCriterion::integrand_real_boundary;
  } else if (potential.kind() == PotentialKind::harmonic) {
    sb.rho_ref = harmonic_zero(potential.omega(), mq);
    sb.lower_criterion = BoundCriterion::amplitude_zero;
  } else if (potential.kind() == PotentialKind::free) {
    sb.rho_ref = 1.0;
    sb.lower_criterion = BoundCriterion::amplitude_zero;
  } else {
    throw DomainError("strip_bounds: custom potentials with mq >= 1 need an explicit rho_ref");
  }

  if (options.branch == StripBranch::primary) {
    sb.rho_lower = sb.rho_ref;
    sb.rho_upper = amplitude_crossing(potential, mq, sb.rho_ref, sb.rho_ref, 1.0, +1);
    sb.upper_criterion = BoundCriterion::amplitude_one;
  } else {
    if (mq == 0 && sb.lower_criterion == BoundCriterion::integrand_real_boundary) {
      throw DomainError("strip_bounds: no secondary strip below the real boundary for mq = 0");
    }
    sb.rho_upper = sb.rho_ref;
    sb.rho_lower = amplitude_crossing(potential, mq, sb.rho_ref, sb.rho_ref, -1.0, -1);
    sb.upper_criterion = sb.lower_criterion;
    sb.lower_criterion = BoundCriterion::amplitude_one;
  }
  if (potential.kind() == PotentialKind::harmonic && mq == 0 &&
      options.branch == StripBranch::primary) {
    sb.estimate_upper = std::pow(5.0, 0.25) * potential.length_unit();
  }
  return sb;
}

SurfaceProfile InverseDesign::profile() const {
  return make_inverse_designed_profile(rho, f, df);
}

InverseDesign design_profile(const PrescribedPotential& potential, int mq, std::size_t n_nodes,
                             const DesignOptions& options) {
  if (n_nodes < 4) throw DomainError("design_profile: need at least 4 nodes");
  if (!(options.amplitude_cut > 0.0 && options.amplitude_cut < 0.5)) {
    throw DomainError("design_profile: amplitude_cut must lie in (0, 0.5)");
  }
  InverseDesign d;
  d.potential = potential;
  d.mq = mq;
  d.sign = options.sign;
  StripOptions so;
  so.rho_ref = options.rho_ref;
  d.strip = strip_bounds(potential, mq, so);

  const double lo = d.strip.rho_lower, ref = d.strip.rho_ref;
  const double a_cut = 1.0 - options.amplitude_cut;
  auto g = [&](double r) { return amplitude(potential, mq, ref, r) - a_cut; };
  d.rho_cut = find_root_bracketed(g, lo, d.strip.rho_upper, kRootTol * d.strip.rho_upper);

  d.rho = uniform_grid(lo, d.rho_cut, n_nodes);
  const std::size_t n = d.rho.size();
  d.A.resize(n);
  d.f.resize(n);
  d.df.resize(n);
  const double sgn = static_cast<double>(static_cast<int>(options.sign));
  d.A[0] = amplitude(potential, mq, ref, lo);
  for (std::size_t i = 1; i < n; ++i) {
    d.A[i] = d.A[i - 1] + amplitude_panel(potential, mq, d.rho[i - 1], d.rho[i]);
  }
  d.A[n - 1] = std::min(d.A[n - 1], a_cut);
  d.f[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double r0 = d.rho[i - 1], a0 = d.A[i - 1];
    auto slope = [&](double r) {
      const double a = std::min(a0 + amplitude_panel(potential, mq, r0, r), a_cut);
      return std::abs(a) / std::sqrt(1.0 - a * a);
    };
    d.f[i] = d.f[i - 1] + sgn * integrate_adaptive(slope, r0, d.rho[i], 1e-13).value;
  }
  for (std::size_t i = 0; i < n; ++i) {
    d.df[i] = sgn * std::abs(d.A[i]) / std::sqrt(1.0 - d.A[i] * d.A[i]);
  }
  const double a_prime = 2.0 * inverse_integrand(potential, mq, d.rho_cut);
  d.tail_bound = std::sqrt(1.0 - a_cut * a_cut) / a_prime;
  return d;
}

double round_trip_error(const InverseDesign& design, double amplitude_cap) {
  if (design.rho.size() < 12) throw DomainError("round_trip_error: need >= 10 interior nodes");
  const SurfaceProfile p = design.profile();
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < design.rho.size(); ++i) {
    if (std::abs(design.A[i]) > amplitude_cap) continue;
    const double r = design.rho[i];
    const double u = design.potential(r);
    const double w = effective_potential(p, design.mq, r);
    worst = std::max(worst, std::abs(w + u) / std::max(1.0, std::abs(u)));
  }
  return worst;
}

std::vector<Figure3Point> free_profile_m0_figure3(std::span<const double> grid) {
  auto slope = [](double t) {
    const double l = std::log(t);
    return std::abs(l) / std::sqrt(1.0 + l * l);
  };
  std::vector<Figure3Point> out;
  out.reserve(grid.size());
  double prev = 1.0, f = 0.0;
  for (double t : grid) {
    if (!(t >= 1.0)) throw DomainError("free_profile_m0_figure3: grid values must be >= 1");
    if (!out.empty() && !(t > prev)) {
      throw DomainError("free_profile_m0_figure3: grid must be increasing");
    }
    f += integrate_adaptive(slope, prev, t, 1e-13).value;
    out.push_back({t, f, slope(t)});
    prev = t;
  }
  return out;
}

BoxEnergies box_energies_on_free_strip(int mq, double rho0, int n) {
  if (mq < 1) throw DomainError("box_energies_on_free_strip: mq must be >= 1");
  if (!(rho0 > 0.0)) throw DomainError("box_energies_on_free_strip: rho0 must be > 0");
  if (n < 1) throw DomainError("box_energies_on_free_strip: n must be >= 1");
  constexpr double pi = std::numbers::pi;
  const double a = std::sqrt(4.0 * mq * mq - 1.0);
  const double nn = static_cast<double>(n) * n;
  BoxEnergies e;
  const double gap = std::expm1(1.0 / a);
  e.formula = 4.0 * pi * pi * nn / (rho0 * rho0 * gap * gap);

  // A = sin θ on the strip: x-length = (ρ0/a)∫₀^{π/2} exp(sin θ / a) dθ
  e.strip_length =
      rho0 / a *
      integrate_adaptive([a](double t) { return std::exp(std::sin(t) / a); }, 0.0, pi / 2, 1e-14)
          .value;
  e.arc_box = pi * pi * nn / (e.strip_length * e.strip_length);

  DesignOptions opt;
  opt.rho_ref = rho0;
  opt.amplitude_cut = 1e-8;
  const InverseDesign d = design_profile(PrescribedPotential::free(), mq, 4000, opt);
  const SurfaceProfile p = d.profile();
  const double x_lo = p.rho_min(), x_hi = arc_length(p, p.rho_max());
  e.solver_length = x_hi - x_lo;
  XSolverOptions xo;
  xo.inner = InnerBoundary::dirichlet;
  xo.keep_positive = true;
  const SpectralSolution s =
      solve_bound_states_x(p, mq, x_lo, x_hi, 4000, static_cast<std::size_t>(n), xo);
  e.solver = s.eigenvalues.at(static_cast<std::size_t>(n) - 1);
  return e;
}

}  // namespace curvq
