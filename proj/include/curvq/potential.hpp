#pragma once

#include <span>
#include <string>
#include <vector>

#include "curvq/geometry.hpp"

namespace curvq {

struct PotentialNode {
  double x = 0.0;
  double rho = 0.0;
  double w = 0.0;
};

struct EffectivePotentialTable {
  int mq = 0;
  std::vector<PotentialNode> nodes;
  std::string profile_ref;
};

/// V_s = -(k1-k2)²/4 (ħ = 1, 2m = 1). Zero on the axis of a smooth bump.
double surface_potential(const SurfaceProfile& profile, double rho);

/// W_mq = -k1²/4 + (mq² - 1/4)/ρ². DomainError at ρ = 0.
double effective_potential(const SurfaceProfile& profile, int mq, double rho);

EffectivePotentialTable effective_potential_table(const SurfaceProfile& profile, int mq,
                                                  std::span<const double> rho_grid);

/// Log-spaced grid on [1e-3·length_scale, rho_max] (rho_max defaults to the profile's).
std::vector<double> default_potential_grid(const SurfaceProfile& profile, std::size_t nodes = 1000,
                                           double rho_max = 0.0);

/// W₀(x) = -1/(4x²) - A0²/σ0⁴, the axis approximation for the Gaussian bump.
double near_origin_w0(double depth, double dispersion, double x);

/// k1² ρ² > 4mq² - 1, equivalently W_mq(ρ) < 0.
bool binding_condition(const SurfaceProfile& profile, int mq, double rho);

}  // namespace curvq
