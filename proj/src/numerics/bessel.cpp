#include "curvq/numerics/bessel.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "curvq/error.hpp"

namespace curvq {
namespace {

using real = long double;

constexpr real kPi = 3.141592653589793238462643383279502884L;
constexpr real kEulerGamma = 0.577215664901532860606512090082402431L;
constexpr real kSeriesEps = 1e-22L;

// Regime switches. The Hankel series for J/Y is accurate to ~e^{-2x}, so it
// needs x >= 20 for 1e-10; below that the long-double power series loses at
// most ~1e7 * 1e-19 to cancellation.
constexpr real kJYAsymptotic = 20.0L;
constexpr real kKAsymptotic = 12.0L;
constexpr real kIAsymptotic = 50.0L;

real factorial(int n) {
  real f = 1.0L;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Σ_k sign^k (x/2)^{2k+n} / (k! (k+n)!), J_n (sign -1) or I_n (sign +1).
real power_series_ji(int n, real x, real sign) {
  const real half = x / 2.0L;
  const real q = half * half;
  real term = std::pow(half, static_cast<real>(n)) / factorial(n);
  real sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= sign * q / (static_cast<real>(k) * static_cast<real>(k + n));
    sum += term;
    if (std::abs(term) <= kSeriesEps * std::abs(sum) && static_cast<real>(k) > half) break;
  }
  return sum;
}

real digamma_int(int m) {  // ψ(m) for integer m >= 1
  real s = -kEulerGamma;
  for (int k = 1; k < m; ++k) s += 1.0L / k;
  return s;
}

// Y_n series, orders 0 and 1 (A&S 9.1.11).
real y_series(int n, real x) {
  const real half = x / 2.0L;
  const real q = half * half;
  real finite = 0.0L;
  if (n == 1) finite = -1.0L / (kPi * half);  // -(x/2)^{-1} (0!)/π
  real term = std::pow(half, static_cast<real>(n)) / factorial(n);  // (x/2)^n/(k!(n+k)!) at k=0
  real sum = term * (digamma_int(1) + digamma_int(n + 1));
  real psi_a = digamma_int(1), psi_b = digamma_int(n + 1);
  for (int k = 1; k < 500; ++k) {
    term *= -q / (static_cast<real>(k) * static_cast<real>(k + n));
    psi_a += 1.0L / k;
    psi_b += 1.0L / (k + n);
    const real contrib = term * (psi_a + psi_b);
    sum += contrib;
    if (std::abs(contrib) <= kSeriesEps * std::abs(sum) && static_cast<real>(k) > half) break;
  }
  return finite + (2.0L / kPi) * std::log(half) * power_series_ji(n, x, -1.0L) - sum / kPi;
}

// Hankel asymptotic expansion, returns {J_nu, Y_nu}.
void hankel(int nu, real x, real& j, real& y) {
  const real mu = 4.0L * nu * nu;
  real p = 1.0L, q = 0.0L;
  real term = 1.0L;
  real last = std::numeric_limits<real>::infinity();
  for (int k = 1; k < 200; ++k) {
    const real odd = 2.0L * k - 1.0L;
    term *= (mu - odd * odd) / (static_cast<real>(k) * 8.0L * x);
    if (std::abs(term) >= last) break;  // optimal truncation
    last = std::abs(term);
    const int r = k % 4;
    if (r == 1) q += term;
    else if (r == 2) p -= term;
    else if (r == 3) q -= term;
    else p += term;
    if (last < 1e-24L) break;
  }
  const real chi = x - (nu / 2.0L + 0.25L) * kPi;
  const real amp = std::sqrt(2.0L / (kPi * x));
  j = amp * (p * std::cos(chi) - q * std::sin(chi));
  y = amp * (p * std::sin(chi) + q * std::cos(chi));
}

real j_low(int n, real x) {
  if (x < kJYAsymptotic) return power_series_ji(n, x, -1.0L);
  real j, y;
  hankel(n, x, j, y);
  return j;
}

real y_low(int n, real x) {
  if (x < kJYAsymptotic) return y_series(n, x);
  real j, y;
  hankel(n, x, j, y);
  return y;
}

real bessel_j_impl(int n, real x) {
  if (x == 0.0L) return n == 0 ? 1.0L : 0.0L;
  if (n <= 1 || x < kJYAsymptotic || static_cast<real>(n) >= x) {
    if (n <= 1 || x < kJYAsymptotic) return j_low(n, x);
    return power_series_ji(n, x, -1.0L);
  }
  // forward recurrence is stable for n < x
  real jm = j_low(0, x), j = j_low(1, x);
  for (int k = 1; k < n; ++k) {
    const real next = 2.0L * k / x * j - jm;
    jm = j;
    j = next;
  }
  return j;
}

real bessel_y_impl(int n, real x) {
  real ym = y_low(0, x);
  if (n == 0) return ym;
  real y = y_low(1, x);
  for (int k = 1; k < n; ++k) {
    const real next = 2.0L * k / x * y - ym;
    ym = y;
    y = next;
  }
  return y;
}

// e^x / sqrt(2πx) Σ (-1)^k a_k(ν) / x^k
real i_asymptotic(int nu, real x) {
  const real mu = 4.0L * nu * nu;
  real sum = 1.0L, term = 1.0L, last = std::numeric_limits<real>::infinity();
  for (int k = 1; k < 200; ++k) {
    const real odd = 2.0L * k - 1.0L;
    term *= -(mu - odd * odd) / (static_cast<real>(k) * 8.0L * x);
    if (std::abs(term) >= last) break;
    last = std::abs(term);
    sum += term;
    if (last < 1e-24L) break;
  }
  return std::exp(x) / std::sqrt(2.0L * kPi * x) * sum;
}

// sqrt(π/2x) e^{-x} Σ a_k(ν) / x^k
real k_asymptotic(int nu, real x) {
  const real mu = 4.0L * nu * nu;
  real sum = 1.0L, term = 1.0L, last = std::numeric_limits<real>::infinity();
  for (int k = 1; k < 200; ++k) {
    const real odd = 2.0L * k - 1.0L;
    term *= (mu - odd * odd) / (static_cast<real>(k) * 8.0L * x);
    if (std::abs(term) >= last) break;
    last = std::abs(term);
    sum += term;
    if (last < 1e-24L) break;
  }
  return std::sqrt(kPi / (2.0L * x)) * std::exp(-x) * sum;
}

real bessel_i_impl(int n, real x) {
  if (x == 0.0L) return n == 0 ? 1.0L : 0.0L;
  if (x <= kIAsymptotic || static_cast<real>(n * n) > x) return power_series_ji(n, x, 1.0L);
  return i_asymptotic(n, x);
}

// K_0, K_1 power series (A&S 9.6.13, 9.6.11).
real k_series(int n, real x) {
  const real half = x / 2.0L;
  const real q = half * half;
  const real log_half = std::log(half);
  if (n == 0) {
    real term = 1.0L, sum = 0.0L, harmonic = 0.0L;
    for (int k = 1; k < 500; ++k) {
      term *= q / (static_cast<real>(k) * k);
      harmonic += 1.0L / k;
      sum += term * harmonic;
      if (term * harmonic <= kSeriesEps * std::abs(sum)) break;
    }
    return -(log_half + kEulerGamma) * power_series_ji(0, x, 1.0L) + sum;
  }
  // n == 1
  real term = 1.0L;  // (x²/4)^k / (k!(k+1)!)
  real psi_a = digamma_int(1), psi_b = digamma_int(2);
  real sum = term * (psi_a + psi_b);
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<real>(k) * (k + 1));
    psi_a += 1.0L / k;
    psi_b += 1.0L / (k + 1);
    const real contrib = term * (psi_a + psi_b);
    sum += contrib;
    if (std::abs(contrib) <= kSeriesEps * std::abs(sum)) break;
  }
  return 1.0L / x + log_half * power_series_ji(1, x, 1.0L) - (x / 4.0L) * sum;
}

real k_low(int n, real x) { return x < kKAsymptotic ? k_series(n, x) : k_asymptotic(n, x); }

real bessel_k_impl(int n, real x) {
  real km = k_low(0, x);
  if (n == 0) return km;
  real k = k_low(1, x);
  for (int m = 1; m < n; ++m) {
    const real next = km + 2.0L * m / x * k;
    km = k;
    k = next;
  }
  return k;
}

}  // namespace

double bessel(BesselKind kind, int order, double x) {
  if (order < 0) throw DomainError("bessel: order must be non-negative");
  if (std::isnan(x)) throw DomainError("bessel: argument is NaN");
  const real lx = x;
  switch (kind) {
    case BesselKind::J:
      if (x < 0.0) throw DomainError("bessel J: x must be >= 0");
      return static_cast<double>(bessel_j_impl(order, lx));
    case BesselKind::Y:
      if (!(x > 0.0)) throw DomainError("bessel Y: x must be > 0");
      return static_cast<double>(bessel_y_impl(order, lx));
    case BesselKind::I:
      if (x < 0.0) throw DomainError("bessel I: x must be >= 0");
      return static_cast<double>(bessel_i_impl(order, lx));
    case BesselKind::K:
      if (!(x > 0.0)) throw DomainError("bessel K: x must be > 0");
      return static_cast<double>(bessel_k_impl(order, lx));
  }
  throw DomainError("bessel: unknown kind");
}

}  // namespace curvq
