#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "curvq/error.hpp"

namespace curvq {

enum class ProfileKind { analytic_gaussian, tabulated, inverse_designed, analytic };

struct GaussianParameters {
  double depth;       ///< A0 > 0
  double dispersion;  ///< σ0 > 0
};

/// Generator z = f(ρ) of a surface of revolution in Monge form, with its first
/// and second derivatives on a closed radial domain. Immutable; cheap to copy.
class SurfaceProfile {
 public:
  using Fn = std::function<double(double)>;

  SurfaceProfile(ProfileKind kind, Fn f, Fn df, Fn d2f, double rho_min, double rho_max,
                 std::string label, std::optional<GaussianParameters> gaussian = std::nullopt);

  double f(double rho) const;
  double df(double rho) const;
  double d2f(double rho) const;
  /// √(1+ḟ²), the arc-length density dx/dρ.
  double stretch(double rho) const;

  double rho_min() const noexcept { return rho_min_; }
  double rho_max() const noexcept { return rho_max_; }
  bool contains(double rho) const noexcept;
  ProfileKind kind() const noexcept { return kind_; }
  const std::string& label() const noexcept { return label_; }
  const std::optional<GaussianParameters>& gaussian() const noexcept { return gaussian_; }
  /// σ0 for Gaussian bumps, 1 otherwise.
  double length_scale() const noexcept;

 private:
  void check(double rho) const;

  ProfileKind kind_;
  std::shared_ptr<const Fn> f_, df_, d2f_;
  double rho_min_, rho_max_;
  std::string label_;
  std::optional<GaussianParameters> gaussian_;
};

struct CurvatureSample {
  double rho = 0.0;
  double k1 = 0.0;          ///< meridional principal curvature
  double k2 = 0.0;          ///< azimuthal principal curvature
  double mean = 0.0;        ///< (k1+k2)/2
  double gauss = 0.0;       ///< k1 k2
  double metric_det = 0.0;  ///< g = ρ²(1+ḟ²)
};

/// f(ρ) = -A0 exp(-ρ²/σ0²) on [0, rho_max], with closed-form derivatives.
SurfaceProfile make_gaussian_bump(double depth, double dispersion, double rho_max);

/// f ≡ 0 on [0, rho_max].
SurfaceProfile make_plane(double rho_max);

SurfaceProfile make_analytic_profile(SurfaceProfile::Fn f, SurfaceProfile::Fn df,
                                     SurfaceProfile::Fn d2f, double rho_min, double rho_max,
                                     std::string label);

/// Cubic-spline profile through (ρ, f) samples; derivatives are the spline's.
SurfaceProfile make_tabulated_profile(std::span<const std::pair<double, double>> samples);

/// Profile from an inverse design: f is Hermite-interpolated with the stored
/// slopes; the slope is carried through 𝒜 = ḟ/√(1+ḟ²), which stays smooth up
/// to a vertical tangent, and f̈ = 𝒜'(1+ḟ²)^{3/2}.
SurfaceProfile make_inverse_designed_profile(std::vector<double> rho, std::vector<double> f,
                                             std::vector<double> df);

CurvatureSample curvature_at(const SurfaceProfile& profile, double rho);

/// x(ρ) = ρ_min + ∫_{ρ_min}^{ρ} √(1+ḟ²) dρ'  (ρ_min = 0 for axis-attached profiles).
double arc_length(const SurfaceProfile& profile, double rho);

/// Inverse of arc_length. DomainError when x lies outside [x(ρ_min), x(ρ_max)].
double rho_of_x(const SurfaceProfile& profile, double x);

/// arc_length on an increasing ρ grid, accumulated panel by panel.
std::vector<double> arc_length_on_grid(const SurfaceProfile& profile, std::span<const double> rho);

/// rho_of_x on an increasing x grid (Newton from the previous node).
std::vector<double> rho_on_x_grid(const SurfaceProfile& profile, std::span<const double> x);

/// Default export grid: `nodes` uniform samples over the profile domain.
std::vector<double> uniform_grid(double lo, double hi, std::size_t nodes);

}  // namespace curvq
