#include "curvq/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "curvq/numerics.hpp"
#include "curvq/potential.hpp"

namespace curvq {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_mq(int mq) {
  if (mq < 0) throw DomainError("angular quantum number mq must be >= 0");
}

struct Discretisation {
  TridiagonalOperator op;   // M^{-1/2} K M^{-1/2}
  std::vector<double> mass;  // M (diagonal)
};

std::vector<EigenPair> lowest_states(const TridiagonalOperator& op, std::size_t n_states,
                                     bool keep_positive) {
  std::size_t count = std::min(n_states, op.size());
  if (!keep_positive) count = std::min(count, op.count_below(-kBoundStateThreshold));
  if (count == 0) return {};
  auto pairs = eigen_tridiagonal_lowest(op, count);
  if (!keep_positive) {
    std::erase_if(pairs, [](const EigenPair& p) { return !(p.eigenvalue < -kBoundStateThreshold); });
  }
  return pairs;
}

Discretisation symmetrise(const std::vector<double>& k_diag, const std::vector<double>& k_off,
                          std::vector<double> mass) {
  Discretisation d;
  const std::size_t n = k_diag.size();
  d.op.diagonal.resize(n);
  d.op.off_diagonal.resize(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) d.op.diagonal[i] = k_diag[i] / mass[i];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    d.op.off_diagonal[i] = k_off[i] / std::sqrt(mass[i] * mass[i + 1]);
  }
  d.mass = std::move(mass);
  return d;
}

SpectralSolution solve_rho_once(const SurfaceProfile& profile, int mq, double rho_max,
                                std::size_t n, std::size_t n_states, bool keep_positive) {
  const double h = rho_max / static_cast<double>(n);
  const bool cell_centered = (mq == 0);
  const double m2 = static_cast<double>(mq) * mq;
  auto flux = [&profile](double r) { return r / profile.stretch(r); };

  // unknown positions
  std::vector<double> r;
  if (cell_centered) {
    r.resize(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = (static_cast<double>(i) + 0.5) * h;
  } else {
    r.resize(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) r[i] = static_cast<double>(i + 1) * h;
  }
  const std::size_t u = r.size();
  std::vector<double> diag(u), off(u > 0 ? u - 1 : 0), mass(u), s(u);
  for (std::size_t i = 0; i < u; ++i) {
    s[i] = profile.stretch(r[i]);
    const double w = r[i] * s[i];
    const double left = cell_centered ? (i == 0 ? 0.0 : flux(r[i] - 0.5 * h)) : flux(r[i] - 0.5 * h);
    double right = flux(r[i] + 0.5 * h);
    if (cell_centered && i + 1 == u) right *= 2.0;  // Dirichlet face at half-cell distance
    const double pot = (mq == 0 ? 0.0 : m2 / (r[i] * r[i])) + surface_potential(profile, r[i]);
    diag[i] = (left + right) / h + h * w * pot;
    mass[i] = h * w;
    if (i + 1 < u) off[i] = -flux(r[i] + 0.5 * h) / h;
  }
  Discretisation d = symmetrise(diag, off, mass);
  auto pairs = lowest_states(d.op, n_states, keep_positive);

  SpectralSolution sol;
  sol.mq = mq;
  sol.solver = "rho";
  sol.boundary = {cell_centered ? InnerBoundary::regular_axis : InnerBoundary::dirichlet, 0.0,
                  rho_max};
  sol.nodes_used = u;
  sol.rho.reserve(u + 2);
  sol.rho.push_back(0.0);
  sol.rho.insert(sol.rho.end(), r.begin(), r.end());
  sol.rho.push_back(rho_max);
  sol.stretch.reserve(u + 2);
  sol.stretch.push_back(profile.stretch(0.0));
  sol.stretch.insert(sol.stretch.end(), s.begin(), s.end());
  sol.stretch.push_back(profile.stretch(rho_max));
  sol.weight_rho.assign(u + 2, h);
  sol.weight_rho.front() = sol.weight_rho.back() = 0.0;
  sol.weight_x.resize(u + 2);
  for (std::size_t i = 0; i < u + 2; ++i) sol.weight_x[i] = sol.weight_rho[i] * sol.stretch[i];
  sol.x = arc_length_on_grid(profile, sol.rho);

  const double inv_sqrt_2pi = 1.0 / std::sqrt(kTwoPi);
  for (const auto& p : pairs) {
    Eigenstate st;
    st.eigenvalue = p.eigenvalue;
    st.psi.assign(u + 2, 0.0);
    for (std::size_t i = 0; i < u; ++i) {
      st.psi[i + 1] = p.eigenvector[i] / std::sqrt(d.mass[i]) * inv_sqrt_2pi;
    }
    if (cell_centered) st.psi[0] = st.psi[1];  // ψ'(0) = 0
    st.F.resize(u + 2);
    for (std::size_t i = 0; i < u + 2; ++i) st.F[i] = std::sqrt(sol.rho[i]) * st.psi[i];
    sol.eigenvalues.push_back(p.eigenvalue);
    sol.states.push_back(std::move(st));
  }
  sol.normalized = true;
  return sol;
}

std::vector<double> x_solver_grid(double x_min, double x_max, std::size_t n, double scale) {
  const double length = x_max - x_min;
  const double x_b = x_min + std::min(0.1 * length, scale);
  if (!(x_min < 0.05 * x_b) || n < 50) return uniform_grid(x_min, x_max, n);
  const std::size_t n_geo = n / 5;
  std::vector<double> g;
  g.reserve(n);
  const double ratio = std::log(x_b / x_min);
  for (std::size_t i = 0; i < n_geo; ++i) {
    g.push_back(x_min * std::exp(ratio * static_cast<double>(i) / static_cast<double>(n_geo - 1)));
  }
  g.back() = x_b;
  const std::size_t n_uni = n - n_geo + 1;
  for (std::size_t i = 1; i < n_uni; ++i) {
    g.push_back(x_b + (x_max - x_b) * static_cast<double>(i) / static_cast<double>(n_uni - 1));
  }
  g.back() = x_max;
  return g;
}

std::vector<double> trapezoid_weights(const std::vector<double>& t) {
  std::vector<double> w(t.size(), 0.0);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double h = 0.5 * (t[i + 1] - t[i]);
    w[i] += h;
    w[i + 1] += h;
  }
  return w;
}

// S₁' for the Gaussian bump; tiny negative radicands from rounding are clamped.
double s1_prime(const SurfaceProfile& profile, double rho) {
  const auto& g = *profile.gaussian();
  const double s2 = g.dispersion * g.dispersion;
  const double c = g.depth * g.depth / (s2 * s2);
  const double k1 = curvature_at(profile, rho).k1;
  const double rad = c - 0.25 * k1 * k1;
  if (rad < 0.0) {
    if (rad > -1e-10 * c) return 0.0;
    throw DomainError("ansatz_wavefunction: S1' radicand negative at rho = " + std::to_string(rho));
  }
  return std::sqrt(rad);
}

void check_gaussian(const SurfaceProfile& profile) {
  if (!profile.gaussian()) throw DomainError("ansatz requires a Gaussian-bump profile");
}

}  // namespace

SpectralSolution solve_bound_states_rho(const SurfaceProfile& profile, int mq, double rho_max,
                                        std::size_t n_nodes, std::size_t n_states,
                                        const RhoSolverOptions& options) {
  check_mq(mq);
  if (n_nodes < 500) throw DomainError("solve_bound_states_rho: n_nodes must be >= 500");
  if (n_states < 1) throw DomainError("solve_bound_states_rho: n_states must be >= 1");
  if (profile.rho_min() != 0.0) {
    throw DomainError("solve_bound_states_rho: profile must be attached to the axis");
  }
  if (!(rho_max >= 10.0 * profile.length_scale())) {
    throw DomainError("solve_bound_states_rho: rho_max must be >= 10 sigma_scale");
  }
  if (!profile.contains(rho_max)) {
    throw DomainError("solve_bound_states_rho: rho_max outside profile domain");
  }
  const bool expand = options.expand_domain && !options.keep_positive;
  SpectralSolution prev = solve_rho_once(profile, mq, rho_max, n_nodes, n_states,
                                         options.keep_positive);
  if (!expand) return prev;

  prev.converged = false;
  double r = rho_max;
  std::size_t n = n_nodes;
  for (int k = 1; k <= options.max_expansions; ++k) {
    if (!profile.contains(2.0 * r)) break;
    r *= 2.0;
    n *= 2;
    SpectralSolution cur = solve_rho_once(profile, mq, r, n, n_states, false);
    cur.expansions = k;
    cur.converged = false;
    if (prev.empty() && cur.empty()) {
      cur.converged = true;
      return cur;
    }
    if (!prev.empty() && !cur.empty()) {
      const double e0 = cur.eigenvalues.front();
      if (std::abs(e0 - prev.eigenvalues.front()) < options.tolerance * std::abs(e0)) {
        cur.converged = true;
        return cur;
      }
    }
    prev = std::move(cur);
  }
  return prev;
}

SpectralSolution solve_bound_states_x(const SurfaceProfile& profile, int mq, double x_min,
                                      double x_max, std::size_t n_nodes, std::size_t n_states,
                                      const XSolverOptions& options) {
  check_mq(mq);
  if (n_nodes < 3) throw DomainError("solve_bound_states_x: need at least 3 nodes");
  if (n_states < 1) throw DomainError("solve_bound_states_x: n_states must be >= 1");
  if (!(x_min > 0.0) || !(x_max > x_min)) {
    throw DomainError("solve_bound_states_x: need 0 < x_min < x_max");
  }
  const InnerBoundary inner =
      options.inner.value_or(mq == 0 ? InnerBoundary::regular_axis : InnerBoundary::dirichlet);

  const std::vector<double> x = x_solver_grid(x_min, x_max, n_nodes, profile.length_scale());
  const std::vector<double> rho = rho_on_x_grid(profile, x);
  const std::size_t n = x.size();
  const std::size_t first = inner == InnerBoundary::regular_axis ? 0 : 1;
  const std::size_t last = n - 2;  // outer node fixed at zero
  const std::size_t u = last - first + 1;

  std::vector<double> diag(u), off(u > 0 ? u - 1 : 0), mass(u);
  for (std::size_t k = 0; k < u; ++k) {
    const std::size_t i = first + k;
    const double w = effective_potential(profile, mq, rho[i]);
    const double hr = x[i + 1] - x[i];
    if (i == 0) {
      const double beta = (static_cast<double>(mq) + 0.5) / x_min;
      mass[k] = 0.5 * hr;
      diag[k] = 1.0 / hr + beta + w * mass[k];
    } else {
      const double hl = x[i] - x[i - 1];
      mass[k] = 0.5 * (hl + hr);
      diag[k] = 1.0 / hl + 1.0 / hr + w * mass[k];
    }
    if (k + 1 < u) off[k] = -1.0 / hr;
  }
  Discretisation d = symmetrise(diag, off, mass);
  auto pairs = lowest_states(d.op, n_states, options.keep_positive);

  SpectralSolution sol;
  sol.mq = mq;
  sol.solver = "x";
  sol.boundary = {inner, x_min, x_max};
  sol.nodes_used = u;
  sol.x = x;
  sol.rho = rho;
  sol.stretch.resize(n);
  sol.weight_x.assign(n, 0.0);
  sol.weight_rho.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) sol.stretch[i] = profile.stretch(rho[i]);
  for (std::size_t k = 0; k < u; ++k) {
    sol.weight_x[first + k] = d.mass[k];
    sol.weight_rho[first + k] = d.mass[k] / sol.stretch[first + k];
  }
  const double inv_sqrt_2pi = 1.0 / std::sqrt(kTwoPi);
  for (const auto& p : pairs) {
    Eigenstate st;
    st.eigenvalue = p.eigenvalue;
    st.F.assign(n, 0.0);
    st.psi.assign(n, 0.0);
    for (std::size_t k = 0; k < u; ++k) {
      st.F[first + k] = p.eigenvector[k] / std::sqrt(d.mass[k]) * inv_sqrt_2pi;
    }
    for (std::size_t i = 0; i < n; ++i) st.psi[i] = st.F[i] / std::sqrt(rho[i]);
    sol.eigenvalues.push_back(p.eigenvalue);
    sol.states.push_back(std::move(st));
  }
  sol.normalized = true;
  return sol;
}

AnsatzWavefunction ansatz_wavefunction(const SurfaceProfile& profile, double k_prime, double S0,
                                       std::span<const double> x_grid) {
  check_gaussian(profile);
  if (!(k_prime > 0.0)) throw DomainError("ansatz_wavefunction: k' must be > 0");
  if (!std::isfinite(S0)) throw DomainError("ansatz_wavefunction: S0 must be finite");
  if (x_grid.size() < 2) throw DomainError("ansatz_wavefunction: need at least two grid nodes");
  if (x_grid[0] < 0.0) throw DomainError("ansatz_wavefunction: grid must be >= 0");
  for (std::size_t i = 1; i < x_grid.size(); ++i) {
    if (!(x_grid[i] > x_grid[i - 1])) {
      throw DomainError("ansatz_wavefunction: grid must be strictly increasing");
    }
  }

  AnsatzWavefunction a;
  a.k_prime = k_prime;
  a.S0 = S0;
  {
    const auto& g = *profile.gaussian();
    const double s2 = g.dispersion * g.dispersion;
    a.energy = -(k_prime * k_prime + g.depth * g.depth / (s2 * s2));
  }
  a.x.assign(x_grid.begin(), x_grid.end());
  a.rho = rho_on_x_grid(profile, a.x);
  a.stretch.resize(a.x.size());
  for (std::size_t i = 0; i < a.x.size(); ++i) {
    a.stretch[i] = profile.stretch(a.rho[i]);
    (void)s1_prime(profile, a.rho[i]);  // validity of the ansatz at every node
  }

  std::vector<double> support;
  if (a.rho.front() > 0.0) support.push_back(0.0);
  support.insert(support.end(), a.rho.begin(), a.rho.end());
  CumulativeIntegral x_of_rho([&profile](double r) { return profile.stretch(r); }, support);
  CumulativeIntegral phi([&profile](double r) { return s1_prime(profile, r) * profile.stretch(r); },
                         support);

  auto amp2 = [&](double r) {
    const double x = x_of_rho(r);
    if (!(x > 0.0)) return 0.0;
    const double k0 = bessel_k(0, k_prime * x);
    return x * k0 * k0 * std::exp(-2.0 * phi(r)) * profile.stretch(r);
  };
  QuadratureOptions qo;
  qo.tol = 1e-14;
  qo.max_subdivisions = 20000;
  a.norm2 = integrate_adaptive(amp2, 0.0, a.rho.back(), qo).value;
  if (!(a.norm2 > 0.0)) throw NumericalError("ansatz_wavefunction: vanishing norm");

  const std::complex<double> phase = std::polar(1.0 / std::sqrt(kTwoPi * a.norm2), S0);
  a.F.resize(a.x.size());
  a.density.resize(a.x.size());
  std::size_t j = a.rho.front() > 0.0 ? 1 : 0;
  for (std::size_t i = 0; i < a.x.size(); ++i, ++j) {
    const double x = a.x[i];
    double u = 0.0;
    if (x > 0.0) u = std::sqrt(x) * bessel_k(0, k_prime * x) * std::exp(-phi.node_values()[j]);
    a.F[i] = phase * u;
    a.density[i] = std::norm(a.F[i]) * a.stretch[i];
  }
  return a;
}

std::vector<double> default_ansatz_grid(const SurfaceProfile& profile, std::size_t nodes,
                                        double x_max) {
  if (nodes < 20) throw DomainError("default_ansatz_grid: need at least 20 nodes");
  const double scale = profile.length_scale();
  const double hi = x_max > 0.0 ? x_max : 10.0 * scale;
  const double lo = 1e-6 * scale, knee = std::min(scale, 0.1 * hi);
  const std::size_t n_log = nodes / 2;
  std::vector<double> g{0.0};
  const double ratio = std::log(knee / lo);
  for (std::size_t i = 0; i < n_log; ++i) {
    g.push_back(lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(n_log)));
  }
  const std::size_t n_uni = nodes - 1 - n_log;
  for (std::size_t i = 0; i < n_uni; ++i) {
    g.push_back(knee + (hi - knee) * static_cast<double>(i) / static_cast<double>(n_uni - 1));
  }
  g.back() = hi;
  return g;
}

double ansatz_norm(const SurfaceProfile& profile, double k_prime, double x_last, double norm2) {
  check_gaussian(profile);
  auto phi = [&profile](double rho) {
    if (rho <= 0.0) return 0.0;
    return integrate_adaptive(
               [&profile](double r) { return s1_prime(profile, r) * profile.stretch(r); }, 0.0,
               rho, 1e-14)
        .value;
  };
  auto density_x = [&](double x) {
    const double rho = rho_of_x(profile, x);
    const double k0 = bessel_k(0, k_prime * x);
    return x * k0 * k0 * std::exp(-2.0 * phi(rho));
  };
  QuadratureOptions qo;
  qo.tol = 1e-13;
  qo.max_subdivisions = 20000;
  return integrate_adaptive(density_x, 0.0, x_last, qo).value / norm2;
}

SpectralSolution to_solution(const AnsatzWavefunction& a) {
  const std::size_t skip = (!a.x.empty() && a.rho.front() == 0.0) ? 1 : 0;
  if (a.x.size() < skip + 2) throw DomainError("to_solution: ansatz grid too short");
  SpectralSolution sol;
  sol.mq = 0;
  sol.solver = "ansatz";
  sol.x.assign(a.x.begin() + skip, a.x.end());
  sol.rho.assign(a.rho.begin() + skip, a.rho.end());
  sol.stretch.assign(a.stretch.begin() + skip, a.stretch.end());
  sol.weight_x = trapezoid_weights(sol.x);
  sol.weight_rho = trapezoid_weights(sol.rho);
  sol.boundary = {InnerBoundary::regular_axis, a.x.front(), a.x.back()};
  sol.nodes_used = sol.x.size();
  Eigenstate st;
  st.eigenvalue = a.energy;
  const std::complex<double> unphase = std::polar(1.0, -a.S0);
  for (std::size_t i = skip; i < a.x.size(); ++i) {
    st.F.push_back((a.F[i] * unphase).real());
    st.psi.push_back(st.F.back() / std::sqrt(a.rho[i]));
  }
  sol.eigenvalues.push_back(st.eigenvalue);
  sol.states.push_back(std::move(st));
  sol.normalized = true;
  return sol;
}

ContinuumWkb continuum_wkb(const SurfaceProfile& profile, double k, std::span<const double> x_grid,
                           int sign) {
  if (!(k > 0.0)) throw DomainError("continuum_wkb: k must be > 0");
  if (sign != 1 && sign != -1) throw DomainError("continuum_wkb: sign must be +1 or -1");
  ContinuumWkb out;
  if (x_grid.empty()) return out;
  if (!(x_grid[0] > 0.0)) throw DomainError("continuum_wkb: grid values must be > 0");
  out.x.assign(x_grid.begin(), x_grid.end());
  out.rho = rho_on_x_grid(profile, out.x);
  const std::size_t n = out.x.size();
  auto q_of = [&](double x, double rho) {
    const double k1 = curvature_at(profile, rho).k1;
    return std::sqrt(0.25 * k1 * k1 + 0.25 / (x * x) + k * k);
  };
  out.Q.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.Q[i] = q_of(out.x[i], out.rho[i]);
  out.F.resize(n);
  out.F[0] = 1.0 / std::sqrt(out.Q[0]);
  if (n == 1) return out;
  std::vector<double> drho(n);
  for (std::size_t i = 0; i < n; ++i) drho[i] = 1.0 / profile.stretch(out.rho[i]);
  const HermiteCubic rho_of(out.x, out.rho, drho);
  double phase = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    phase += integrate_adaptive([&](double x) { return q_of(x, rho_of(x)); }, out.x[i - 1],
                                out.x[i], 1e-13)
                 .value;
    out.F[i] = std::polar(1.0 / std::sqrt(out.Q[i]), sign * phase);
  }
  return out;
}

ContinuumBessel continuum_bessel(int mq, double k, std::span<const double> x_grid) {
  check_mq(mq);
  if (!(k > 0.0)) throw DomainError("continuum_bessel: k must be > 0");
  ContinuumBessel out;
  out.x.assign(x_grid.begin(), x_grid.end());
  for (double x : out.x) {
    if (x < 0.0) throw DomainError("continuum_bessel: grid values must be >= 0");
    const double r = std::sqrt(x);
    out.j_family.push_back(r * bessel_j(mq, k * x));
    out.y_family.push_back(x > 0.0 ? r * bessel_y(mq, k * x)
                                   : -std::numeric_limits<double>::infinity());
  }
  return out;
}

DensityTable probability_density(const SpectralSolution& solution, std::size_t state_index) {
  if (state_index >= solution.states.size()) {
    throw DomainError("probability_density: state index out of range");
  }
  const auto& st = solution.states[state_index];
  DensityTable t;
  t.rho = solution.rho;
  t.weight = solution.weight_rho;
  t.density.resize(t.rho.size());
  // |ψ|²√g = |F|²√(1+ḟ²), finite on the axis
  for (std::size_t i = 0; i < t.rho.size(); ++i) {
    t.density[i] = st.F[i] * st.F[i] * solution.stretch[i];
  }
  return t;
}

ProbabilityCurrent probability_current(int mq, std::span<const double> rho,
                                       std::span<const std::complex<double>> psi,
                                       std::span<const std::complex<double>> dpsi,
                                       std::span<const double> stretch) {
  check_mq(mq);
  const std::size_t n = rho.size();
  if (psi.size() != n || dpsi.size() != n || stretch.size() != n) {
    throw DomainError("probability_current: inconsistent input lengths");
  }
  ProbabilityCurrent c;
  c.mq = mq;
  c.nodes.resize(n);
  const std::complex<double> i_unit(0.0, 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double p2 = std::norm(psi[k]);
    CurrentNode& node = c.nodes[k];
    node.rho = rho[k];
    if (mq == 0 || p2 == 0.0) {
      node.j_phi = 0.0;
    } else {
      node.j_phi = 2.0 * mq * p2 / rho[k];
    }
    node.j_rho = 2.0 * (std::conj(psi[k]) * dpsi[k] / (i_unit * stretch[k])).real();
    node.circulation = 2.0 * kTwoPi * mq * p2;
  }
  return c;
}

ProbabilityCurrent probability_current(const SpectralSolution& solution, std::size_t state_index) {
  if (state_index >= solution.states.size()) {
    throw DomainError("probability_current: state index out of range");
  }
  const auto& st = solution.states[state_index];
  const auto& r = solution.rho;
  const std::size_t n = r.size();
  std::vector<std::complex<double>> psi(n), dpsi(n);
  for (std::size_t i = 0; i < n; ++i) psi[i] = st.psi[i];
  for (std::size_t i = 0; i < n && n > 1; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1, hi = i + 1 == n ? i : i + 1;
    const double d = (st.psi[hi] - st.psi[lo]) / (r[hi] - r[lo]);
    dpsi[i] = std::isfinite(d) ? d : 0.0;
  }
  return probability_current(solution.mq, r, psi, dpsi, solution.stretch);
}

}  // namespace curvq
