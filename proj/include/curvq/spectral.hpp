#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "curvq/geometry.hpp"

namespace curvq {

enum class InnerBoundary {
  regular_axis,  ///< regular solution: ψ' = 0 on the axis (ρ-space) or F'/F = (mq+½)/x_min
  dirichlet,     ///< ψ = 0 (ρ-space axis) or F(x_min) = 0
};

struct BoundaryDescription {
  InnerBoundary inner = InnerBoundary::regular_axis;
  double inner_position = 0.0;  ///< ρ = 0 for the ρ-space solver, x_min for the x-space solver
  double outer_position = 0.0;  ///< Dirichlet end (ρ_max or x_max)
};

struct Eigenstate {
  double eigenvalue = 0.0;
  std::vector<double> F;    ///< F(x) = √ρ ψ
  std::vector<double> psi;  ///< ψ(ρ)
};

/// Radial eigenproblem result on a node set shared by all states. Quadrature
/// weights are those of the discretisation, so 2π Σ F² weight_x = 1 and
/// 2π Σ ψ² √g weight_rho = 1 hold to rounding for every normalized state.
struct SpectralSolution {
  int mq = 0;
  std::string solver;  ///< "rho" or "x"
  std::vector<double> eigenvalues;
  std::vector<Eigenstate> states;
  std::vector<double> x, rho;
  std::vector<double> stretch;     ///< √(1+ḟ²) per node
  std::vector<double> weight_x;    ///< dx weights
  std::vector<double> weight_rho;  ///< dρ weights
  BoundaryDescription boundary;
  bool normalized = false;
  std::size_t nodes_used = 0;
  int expansions = 0;      ///< ρ-space domain doublings performed
  bool converged = true;   ///< domain expansion met its tolerance (or was not requested)

  std::size_t size() const noexcept { return eigenvalues.size(); }
  bool empty() const noexcept { return eigenvalues.empty(); }
};

/// Eigenvalues in (-threshold, 0) are box artifacts, not bound states.
inline constexpr double kBoundStateThreshold = 1e-8;

struct RhoSolverOptions {
  bool expand_domain = true;    ///< double ρ_max and nodes until E0 moves < tolerance
  int max_expansions = 5;
  double tolerance = 0.01;
  bool keep_positive = false;   ///< return the lowest n_states regardless of sign
};

/// Self-adjoint finite-volume discretisation of
///   -(1/√g) d/dρ(ρ/√(1+ḟ²) dψ/dρ) + (mq²/ρ² + V_s) ψ = E ψ,   √g = ρ√(1+ḟ²),
/// regular axis for mq = 0, ψ(0) = 0 for mq ≥ 1, ψ(ρ_max) = 0.
/// Empty eigenvalue list when no bound state exists on the final domain.
SpectralSolution solve_bound_states_rho(const SurfaceProfile& profile, int mq, double rho_max,
                                        std::size_t n_nodes, std::size_t n_states,
                                        const RhoSolverOptions& options = {});

struct XSolverOptions {
  std::optional<InnerBoundary> inner;  ///< default: regular for mq = 0, Dirichlet otherwise
  bool keep_positive = false;
};

/// -F'' + W_mq F = k² F on [x_min, x_max], outer Dirichlet. The grid is
/// geometric near x_min when the cutoff is small, uniform elsewhere.
SpectralSolution solve_bound_states_x(const SurfaceProfile& profile, int mq, double x_min,
                                      double x_max, std::size_t n_nodes, std::size_t n_states,
                                      const XSolverOptions& options = {});

struct AnsatzWavefunction {
  double k_prime = 0.0;
  double S0 = 0.0;
  double norm2 = 0.0;   ///< N²
  double energy = 0.0;  ///< -(k'² + A0²/σ0⁴)
  std::vector<double> x, rho, stretch;
  std::vector<std::complex<double>> F;
  std::vector<double> density;  ///< |F|²√(1+ḟ²) = |ψ|²√g
};

/// F₀(x) = e^{iS0}/√(2πN²) · √x K₀(k'x) · exp(-∫₀ˣ S₁'),  S₁' = √(A0²/σ0⁴ - k1²/4).
/// N² is fixed so that 2π∫|F₀|² dx = 1 over [0, x_last] of the grid.
AnsatzWavefunction ansatz_wavefunction(const SurfaceProfile& profile, double k_prime, double S0,
                                       std::span<const double> x_grid);

/// x = 0, then half the nodes log-spaced on [1e-6·σ0, σ0], the rest uniform to x_max
/// (default 10·σ0).
std::vector<double> default_ansatz_grid(const SurfaceProfile& profile, std::size_t nodes = 2000,
                                        double x_max = 0.0);

/// 2π∫|F₀|² dx over [0, x_last] by adaptive quadrature (independent of the grid).
double ansatz_norm(const SurfaceProfile& profile, double k_prime, double x_last,
                   double norm2);

/// Real representative (global phase removed) as a single-state solution with
/// trapezoidal weights; a node at x = 0, where ψ diverges like ln ρ, is dropped.
SpectralSolution to_solution(const AnsatzWavefunction& ansatz);

struct ContinuumWkb {
  std::vector<double> x, rho, Q;
  std::vector<std::complex<double>> F;
};

/// F = exp(±i∫Q dx)/√Q, Q = √(k1²/4 + 1/(4x²) + k²); phase measured from the first node.
ContinuumWkb continuum_wkb(const SurfaceProfile& profile, double k, std::span<const double> x_grid,
                           int sign = +1);

struct ContinuumBessel {
  std::vector<double> x, j_family, y_family;  ///< √x J_mq(kx), √x Y_mq(kx)
};

ContinuumBessel continuum_bessel(int mq, double k, std::span<const double> x_grid);

struct DensityTable {
  std::vector<double> rho, density, weight;  ///< 2π Σ density·weight = 1
};

DensityTable probability_density(const SpectralSolution& solution, std::size_t state_index);

struct CurrentNode {
  double rho = 0.0;
  double j_phi = 0.0;
  double j_rho = 0.0;
  double circulation = 0.0;  ///< 2πρ j_phi = 4π mq |ψ|²
};

struct ProbabilityCurrent {
  int mq = 0;
  std::vector<CurrentNode> nodes;
  double j_z = 0.0;
};

/// J = 2 (mq|ψ|²/ρ, Re[ψ* ψ'/(i√(1+ḟ²))], 0) in units ħ = 1, 2m = 1.
ProbabilityCurrent probability_current(int mq, std::span<const double> rho,
                                       std::span<const std::complex<double>> psi,
                                       std::span<const std::complex<double>> dpsi,
                                       std::span<const double> stretch);

ProbabilityCurrent probability_current(const SpectralSolution& solution, std::size_t state_index);

}  // namespace curvq
