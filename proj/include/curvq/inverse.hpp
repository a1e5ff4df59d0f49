#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "curvq/geometry.hpp"
#include "curvq/numerics/quadrature.hpp"

namespace curvq {

enum class PotentialKind { free, harmonic, custom };

/// Nonnegative potential U(ρ) whose negative the effective potential should realise.
class PrescribedPotential {
 public:
  static PrescribedPotential free();
  static PrescribedPotential harmonic(double omega);  ///< U = ω²ρ²
  static PrescribedPotential custom(RealFunction u, double rho_lo, double rho_hi,
                                    std::string label = "custom");
  /// Monotone-cubic interpolation of (ρ, U) samples; U must be >= 0.
  static PrescribedPotential tabulated(std::span<const std::pair<double, double>> samples);

  double operator()(double rho) const;
  PotentialKind kind() const noexcept { return kind_; }
  double omega() const noexcept { return omega_; }
  double rho_lo() const noexcept { return rho_lo_; }
  double rho_hi() const noexcept { return rho_hi_; }
  bool contains(double rho) const noexcept { return rho >= rho_lo_ && rho <= rho_hi_; }
  const std::string& label() const noexcept { return label_; }
  /// 1/√(2ω) for the oscillator, 1 otherwise.
  double length_unit() const noexcept;

 private:
  PrescribedPotential(PotentialKind kind, RealFunction u, double lo, double hi, double omega,
                      std::string label);

  PotentialKind kind_;
  RealFunction u_;
  double rho_lo_, rho_hi_;
  double omega_ = 0.0;
  std::string label_;
};

std::string to_string(PotentialKind kind);

enum class BoundCriterion { integrand_real_boundary, amplitude_zero, amplitude_one };

std::string to_string(BoundCriterion criterion);

enum class StripBranch {
  primary,    ///< 𝒜 ∈ (0, 1)
  secondary,  ///< 𝒜 ∈ (-1, 0), below the amplitude zero (mq ≥ 1 only)
};

struct StripBounds {
  double rho_lower = 0.0;
  double rho_upper = 0.0;
  BoundCriterion lower_criterion = BoundCriterion::amplitude_zero;
  BoundCriterion upper_criterion = BoundCriterion::amplitude_one;
  double rho_ref = 0.0;  ///< amplitude reference point (𝒜 = 0)
  int mq = 0;
  PotentialKind potential_kind = PotentialKind::free;
  StripBranch branch = StripBranch::primary;
  /// Oscillator, mq = 0: the small-ε estimate 5^{1/4}/√(2ω) of the upper bound.
  std::optional<double> estimate_upper;
};

struct StripOptions {
  std::optional<double> rho_ref;  ///< required for custom mq ≥ 1; free defaults to 1
  StripBranch branch = StripBranch::primary;
};

/// √(U(ρ) + (mq² - 1/4)/ρ²); DomainError "integrand not real" on a negative radicand.
double inverse_integrand(const PrescribedPotential& potential, int mq, double rho);

/// 𝒜(ρ) = 2∫_{rho_ref}^{ρ} inverse_integrand.
double amplitude(const PrescribedPotential& potential, int mq, double rho_ref, double rho);

/// Closed-form oscillator amplitude with its zero as reference.
///   mq = 0:  ½(s - arctan s),  s = √(4ω²ρ⁴ - 1)   (ρ ≥ 1/√(2ω))
///   mq ≥ 1:  √(ω²ρ⁴ + c) - √c·artanh[(1 + ω²ρ⁴/c)^{-1/2}],  c = mq² - 1/4
double harmonic_amplitude_closed_form(double omega, int mq, double rho);

StripBounds strip_bounds(const PrescribedPotential& potential, int mq,
                         const StripOptions& options = {});

enum class ProfileSign { plus = 1, minus = -1 };

struct DesignOptions {
  std::optional<double> rho_ref;
  ProfileSign sign = ProfileSign::plus;
  double amplitude_cut = 1e-6;  ///< nodes stop at 𝒜 = 1 - amplitude_cut
};

struct InverseDesign {
  PrescribedPotential potential = PrescribedPotential::free();
  int mq = 0;
  StripBounds strip;
  ProfileSign sign = ProfileSign::plus;
  double rho_cut = 0.0;    ///< last node, 𝒜(rho_cut) = 1 - amplitude_cut
  double tail_bound = 0.0; ///< bound on the omitted |f(rho_upper) - f(rho_cut)|
  std::vector<double> rho, A, f, df;

  SurfaceProfile profile() const;
};

/// Tabulates 𝒜, f = sign·∫|𝒜|/√(1-𝒜²) and df on n_nodes uniform nodes from
/// rho_lower to the amplitude cut; f(rho_lower) = 0.
InverseDesign design_profile(const PrescribedPotential& potential, int mq, std::size_t n_nodes,
                             const DesignOptions& options = {});

/// max |W_mq + U| / max(1, |U|) over interior nodes with |𝒜| ≤ amplitude_cap.
double round_trip_error(const InverseDesign& design, double amplitude_cap = 0.99);

struct Figure3Point {
  double rho = 0.0;    ///< ρ/ρ0
  double f = 0.0;      ///< f/ρ0
  double slope = 0.0;  ///< |ln ρ'| / √(1 + ln²ρ')
};

/// Zero-angular-momentum free surface with ρ1 = ρ0; tends to the cone f → ρ.
std::vector<Figure3Point> free_profile_m0_figure3(std::span<const double> rho_over_rho0);

struct BoxEnergies {
  double formula = 0.0;    ///< 4π²n²/(ρ0²(e^{(4mq²-1)^{-1/2}} - 1)²)
  double arc_box = 0.0;    ///< π²n²/L², L the strip's exact x-length
  double solver = 0.0;     ///< x-space Dirichlet solve on the designed strip
  double strip_length = 0.0;
  double solver_length = 0.0;  ///< x-length actually discretised
};

BoxEnergies box_energies_on_free_strip(int mq, double rho0, int n);

}  // namespace curvq
