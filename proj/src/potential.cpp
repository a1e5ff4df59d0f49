#include "curvq/potential.hpp"

#include <cmath>

namespace curvq {
namespace {

void check_mq(int mq) {
  if (mq < 0) throw DomainError("angular quantum number mq must be >= 0");
}

}  // namespace

double surface_potential(const SurfaceProfile& profile, double rho) {
  const CurvatureSample c = curvature_at(profile, rho);
  const double d = c.k1 - c.k2;
  return -0.25 * d * d;
}

double effective_potential(const SurfaceProfile& profile, int mq, double rho) {
  check_mq(mq);
  if (!(rho > 0.0)) throw DomainError("effective_potential: rho must be > 0 (axis is singular)");
  const double k1 = curvature_at(profile, rho).k1;
  const double m2 = static_cast<double>(mq) * mq;
  return -0.25 * k1 * k1 + (m2 - 0.25) / (rho * rho);
}

EffectivePotentialTable effective_potential_table(const SurfaceProfile& profile, int mq,
                                                  std::span<const double> rho_grid) {
  check_mq(mq);
  EffectivePotentialTable table;
  table.mq = mq;
  table.profile_ref = profile.label();
  if (rho_grid.empty()) return table;
  for (std::size_t i = 0; i < rho_grid.size(); ++i) {
    if (!(rho_grid[i] > 0.0)) throw DomainError("effective_potential_table: grid must be > 0");
    if (i > 0 && !(rho_grid[i] > rho_grid[i - 1])) {
      throw DomainError("effective_potential_table: grid must be strictly increasing");
    }
  }
  const std::vector<double> x = arc_length_on_grid(profile, rho_grid);
  table.nodes.reserve(rho_grid.size());
  for (std::size_t i = 0; i < rho_grid.size(); ++i) {
    table.nodes.push_back({x[i], rho_grid[i], effective_potential(profile, mq, rho_grid[i])});
  }
  return table;
}

std::vector<double> default_potential_grid(const SurfaceProfile& profile, std::size_t nodes,
                                           double rho_max) {
  if (nodes < 2) throw DomainError("default_potential_grid: need at least two nodes");
  const double hi = rho_max > 0.0 ? rho_max : profile.rho_max();
  const double lo = std::max(1e-3 * profile.length_scale(), profile.rho_min());
  if (!(hi > lo) || !profile.contains(hi)) {
    throw DomainError("default_potential_grid: rho_max outside profile domain");
  }
  std::vector<double> g(nodes);
  const double ratio = std::log(hi / lo);
  for (std::size_t i = 0; i < nodes; ++i) {
    g[i] = lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(nodes - 1));
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

double near_origin_w0(double depth, double dispersion, double x) {
  if (!(x > 0.0)) throw DomainError("near_origin_w0: x must be > 0");
  if (!(dispersion > 0.0)) throw DomainError("near_origin_w0: sigma0 must be > 0");
  const double s2 = dispersion * dispersion;
  return -0.25 / (x * x) - depth * depth / (s2 * s2);
}

bool binding_condition(const SurfaceProfile& profile, int mq, double rho) {
  check_mq(mq);
  if (!(rho > 0.0)) throw DomainError("binding_condition: rho must be > 0");
  const double k1 = curvature_at(profile, rho).k1;
  const double m2 = static_cast<double>(mq) * mq;
  return k1 * k1 * rho * rho > 4.0 * m2 - 1.0;
}

}  // namespace curvq
