#include "curvq/numerics/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "curvq/error.hpp"

namespace curvq {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void validate(const TridiagonalOperator& op) {
  if (op.diagonal.size() < 1 || op.off_diagonal.size() + 1 != op.diagonal.size()) {
    throw DomainError("TridiagonalOperator: off-diagonal must have length n-1");
  }
}

// LU factorisation with partial pivoting of (T - shift I), LAPACK dgttrf layout.
struct ShiftedLU {
  std::vector<double> dl, d, du, du2;
  std::vector<std::uint8_t> swapped;

  ShiftedLU(const TridiagonalOperator& op, double shift, double perturbation) {
    const std::size_t n = op.size();
    d.resize(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = op.diagonal[i] - shift;
    dl = op.off_diagonal;
    du = op.off_diagonal;
    du2.assign(n > 2 ? n - 2 : 0, 0.0);
    swapped.assign(n > 1 ? n - 1 : 0, 0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::abs(d[i]) >= std::abs(dl[i])) {
        if (d[i] == 0.0) d[i] = perturbation;
        const double fact = dl[i] / d[i];
        dl[i] = fact;
        d[i + 1] -= fact * du[i];
      } else {
        const double fact = d[i] / dl[i];
        d[i] = dl[i];
        dl[i] = fact;
        const double temp = du[i];
        du[i] = d[i + 1];
        d[i + 1] = temp - fact * d[i + 1];
        if (i + 2 < n) {
          du2[i] = du[i + 1];
          du[i + 1] = -fact * du[i + 1];
        }
        swapped[i] = 1;
      }
    }
    if (d[n - 1] == 0.0) d[n - 1] = perturbation;
  }

  void solve(std::vector<double>& b) const {
    const std::size_t n = d.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (swapped[i]) std::swap(b[i], b[i + 1]);
      b[i + 1] -= dl[i] * b[i];
    }
    b[n - 1] /= d[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t k = n >= 2 ? n - 2 : 0; k-- > 0;) {
      b[k] = (b[k] - du[k] * b[k + 1] - du2[k] * b[k + 2]) / d[k];
    }
  }
};

double norm2(const std::vector<double>& v) {
  // scaled to avoid overflow after inverse-iteration growth
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x / scale) * (x / scale);
  return scale * std::sqrt(s);
}

void normalise(std::vector<double>& v) {
  const double nrm = norm2(v);
  if (nrm == 0.0 || !std::isfinite(nrm)) throw NumericalError("inverse iteration broke down");
  for (double& x : v) x /= nrm;
}

void orthogonalise(std::vector<double>& v, const std::vector<EigenPair>& against) {
  for (const auto& p : against) {
    double dot = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) dot += v[i] * p.eigenvector[i];
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= dot * p.eigenvector[i];
  }
}

}  // namespace

double TridiagonalOperator::norm() const {
  const std::size_t n = size();
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(diagonal[i]);
    if (i > 0) row += std::abs(off_diagonal[i - 1]);
    if (i + 1 < n) row += std::abs(off_diagonal[i]);
    best = std::max(best, row);
  }
  return best;
}

std::size_t TridiagonalOperator::count_below(double shift) const {
  const std::size_t n = size();
  double pivmin = 1.0;
  for (double e : off_diagonal) pivmin = std::max(pivmin, e * e);
  pivmin *= std::numeric_limits<double>::min();
  std::size_t count = 0;
  double q = diagonal[0] - shift;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < n; ++i) {
    const double e = off_diagonal[i - 1];
    q = (diagonal[i] - shift) - e * e / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

std::vector<double> TridiagonalOperator::apply(const std::vector<double>& v) const {
  const std::size_t n = size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = diagonal[i] * v[i];
    if (i > 0) s += off_diagonal[i - 1] * v[i - 1];
    if (i + 1 < n) s += off_diagonal[i] * v[i + 1];
    out[i] = s;
  }
  return out;
}

std::vector<EigenPair> eigen_tridiagonal_lowest(const TridiagonalOperator& op, std::size_t count) {
  validate(op);
  const std::size_t n = op.size();
  if (count < 1 || count > n) throw DomainError("eigen_tridiagonal_lowest: count must be in [1, n]");

  // Gershgorin enclosure of the spectrum.
  double lower = std::numeric_limits<double>::infinity();
  double upper = -lower;
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(op.off_diagonal[i - 1]);
    if (i + 1 < n) radius += std::abs(op.off_diagonal[i]);
    lower = std::min(lower, op.diagonal[i] - radius);
    upper = std::max(upper, op.diagonal[i] + radius);
  }
  const double tnorm = std::max(op.norm(), std::numeric_limits<double>::min());
  lower -= 2.0 * kEps * tnorm;
  upper += 2.0 * kEps * tnorm;

  std::vector<double> values(count);
  double floor = lower;
  for (std::size_t k = 0; k < count; ++k) {
    double lo = floor, hi = upper;
    for (int it = 0; it < 400; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (hi - lo <= 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) + kEps * kEps * tnorm) break;
      if (op.count_below(mid) > k) hi = mid; else lo = mid;
    }
    values[k] = 0.5 * (lo + hi);
    floor = lo;
  }

  std::vector<EigenPair> pairs;
  pairs.reserve(count);
  const double perturbation = kEps * tnorm;
  const double cluster = 1e-3 * tnorm;
  for (std::size_t k = 0; k < count; ++k) {
    const double lambda = values[k];
    std::vector<EigenPair> close;
    for (const auto& p : pairs) {
      if (std::abs(p.eigenvalue - lambda) < cluster) close.push_back(p);
    }
    ShiftedLU lu(op, lambda, perturbation);
    std::vector<double> v(n);
    std::uint64_t state = 0x9E3779B97F4A7C15ULL + 7919ULL * k;
    for (auto& x : v) {
      state = state * 6364136223846793005ULL + 1442695040888963407ULL;
      x = static_cast<double>(state >> 11) * (1.0 / 9007199254740992.0) - 0.5;
    }
    normalise(v);
    for (int it = 0; it < 8; ++it) {
      orthogonalise(v, close);
      lu.solve(v);
      orthogonalise(v, close);
      normalise(v);
      if (it >= 1) {
        auto av = op.apply(v);
        double res = 0.0;
        for (std::size_t i = 0; i < n; ++i) res = std::max(res, std::abs(av[i] - lambda * v[i]));
        if (res <= 1e-12 * tnorm) break;
      }
    }
    const double vmax = std::abs(*std::max_element(v.begin(), v.end(), [](double a, double b) {
      return std::abs(a) < std::abs(b);
    }));
    for (double x : v) {
      if (std::abs(x) > 1e-6 * vmax) {
        if (x < 0.0) for (double& y : v) y = -y;
        break;
      }
    }
    pairs.push_back(EigenPair{lambda, std::move(v)});
  }
  return pairs;
}

}  // namespace curvq
