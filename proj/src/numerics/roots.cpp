#include "curvq/numerics/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace curvq {
namespace {

double evaluate(const RealFunction& fn, double x) {
  const double v = fn(x);
  if (std::isnan(v)) throw NumericalError("find_root_bracketed: function returned NaN");
  return v;
}

bool same_sign(double u, double v) { return std::signbit(u) == std::signbit(v); }

}  // namespace

RootBracket find_root_bracket(const RealFunction& fn, double lo, double hi, double tol,
                              int max_iterations) {
  if (!(tol > 0.0)) throw DomainError("find_root_bracketed: tol must be positive");
  if (!(lo <= hi)) std::swap(lo, hi);
  constexpr double eps = std::numeric_limits<double>::epsilon();

  double a = lo, b = hi;
  double fa = evaluate(fn, a), fb = evaluate(fn, b);
  if (fa == 0.0) return RootBracket{a, a, a, 0};
  if (fb == 0.0) return RootBracket{b, b, b, 0};
  if (same_sign(fa, fb)) throw DomainError("find_root_bracketed: no sign change in bracket");

  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int it = 1; it <= max_iterations; ++it) {
    if (same_sign(fb, fc)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = std::max(0.5 * tol, 2.0 * eps * std::abs(b));
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol1 || fb == 0.0) {
      const double lower = fb == 0.0 ? b : std::min(b, c);
      const double upper = fb == 0.0 ? b : std::max(b, c);
      return RootBracket{b, lower, upper, it};
    }
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q; else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : (m > 0.0 ? tol1 : -tol1);
    fb = evaluate(fn, b);
  }
  throw NumericalError("find_root_bracketed: iteration limit reached");
}

double find_root_bracketed(const RealFunction& fn, double lo, double hi, double tol) {
  return find_root_bracket(fn, lo, hi, tol).root;
}

}  // namespace curvq
