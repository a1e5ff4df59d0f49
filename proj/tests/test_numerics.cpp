#include <cmath>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "doctest.h"

#include "curvq/inverse.hpp"
#include "curvq/numerics.hpp"

using namespace curvq;

namespace {

struct BesselOracle {
  char kind;
  int order;
  double x;
  double value;
};

const BesselOracle kBessel[] = {
#include "oracles/bessel_table.inc"
};

BesselKind kind_of(char c) {
  switch (c) {
    case 'J': return BesselKind::J;
    case 'Y': return BesselKind::Y;
    case 'I': return BesselKind::I;
    default: return BesselKind::K;
  }
}

// Discretised -d²/dx² + V on (a, b) with Dirichlet ends, n interior nodes.
TridiagonalOperator dirichlet_operator(double a, double b, std::size_t n, double (*v)(double)) {
  const double h = (b - a) / static_cast<double>(n + 1);
  TridiagonalOperator op;
  op.diagonal.resize(n);
  op.off_diagonal.assign(n - 1, -1.0 / (h * h));
  for (std::size_t i = 0; i < n; ++i) {
    op.diagonal[i] = 2.0 / (h * h) + v(a + static_cast<double>(i + 1) * h);
  }
  return op;
}

}  // namespace

TEST_CASE("integrate_adaptive: polynomial and trigonometric integrals") {
  const auto sq = integrate_adaptive([](double x) { return x * x; }, 0.0, 1.0, 1e-12);
  CHECK(sq.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(sq.error_estimate <= 1e-12);
  const auto s = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  CHECK(std::abs(s.value - 2.0) < 1e-10);
}

TEST_CASE("integrate_adaptive: Gaussian-bump arc length") {
  const auto r = integrate_adaptive(
      [](double t) { return std::sqrt(1.0 + 4.0 * t * t * std::exp(-2.0 * t * t)); }, 0.0, 1.0,
      1e-13);
  // mpmath quad, 40 digits
  CHECK(std::abs(r.value - 1.204441070873552) < 1e-12);
}

TEST_CASE("integrate_adaptive: reversed limits, empty interval, endpoint singularity") {
  auto f = [](double x) { return std::exp(x); };
  CHECK(integrate_adaptive(f, 1.0, 0.0).value == doctest::Approx(-(std::exp(1.0) - 1.0)));
  CHECK(integrate_adaptive(f, 0.5, 0.5).value == 0.0);
  const auto r = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-9);
  CHECK(std::abs(r.value - 2.0) < 1e-8);
  const auto l = integrate_adaptive([](double x) { return std::log(x); }, 0.0, 1.0, 1e-11);
  CHECK(std::abs(l.value + 1.0) < 1e-10);
}

TEST_CASE("integrate_adaptive: exhausted budget throws with the partial result") {
  QuadratureOptions o;
  o.tol = 1e-15;
  o.max_subdivisions = 3;
  try {
    integrate_adaptive([](double x) { return std::sin(50.0 * x) / (x + 1e-3); }, 0.0, 10.0, o);
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(e.partial().evaluations > 0);
    CHECK(std::isfinite(e.partial().value));
  }
}

TEST_CASE("integrate_adaptive: linearity on random smooth integrands") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const double tol = 1e-10;
  for (int trial = 0; trial < 20; ++trial) {
    const double a = u(rng), b = u(rng), p = u(rng), q = u(rng);
    auto f = [p](double x) { return std::exp(p * x) * std::cos(x); };
    auto g = [q](double x) { return 1.0 / (1.0 + q * q * x * x); };
    const double lhs =
        integrate_adaptive([&](double x) { return a * f(x) + b * g(x); }, -1.0, 2.0, tol).value;
    const double rhs = a * integrate_adaptive(f, -1.0, 2.0, tol).value +
                       b * integrate_adaptive(g, -1.0, 2.0, tol).value;
    CHECK(std::abs(lhs - rhs) <= 10.0 * tol * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("CumulativeIntegral agrees with direct quadrature between nodes") {
  CumulativeIntegral c([](double x) { return std::cos(x); }, {0.0, 0.5, 1.0, 2.0, 3.0});
  CHECK(c.node_values().back() == doctest::Approx(std::sin(3.0)).epsilon(1e-12));
  CHECK(c(1.7) == doctest::Approx(std::sin(1.7)).epsilon(1e-12));
  CHECK(c(0.0) == 0.0);
  CHECK_THROWS_AS(c(3.5), DomainError);
}

TEST_CASE("find_root_bracketed: examples") {
  CHECK(find_root_bracketed([](double x) { return x * x - 2.0; }, 1.0, 2.0) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(find_root_bracketed([](double x) { return std::log(x); }, 0.5, 2.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
  const double z = find_root_bracketed(
      [](double r) { return harmonic_amplitude_closed_form(0.5, 1, r); }, 1.0, 1.3);
  CHECK(std::abs(z - 1.071) < 0.002);
  CHECK_THROWS_AS(find_root_bracketed([](double x) { return x * x + 1.0; }, -1.0, 1.0),
                  DomainError);
}

TEST_CASE("find_root_bracket: root inside the initial bracket, width within tol") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int trial = 0; trial < 50; ++trial) {
    const double c = u(rng);
    const double tol = 1e-9;
    auto f = [c](double x) { return std::tanh(20.0 * (x - c)) + 0.1 * (x - c); };
    const RootBracket b = find_root_bracket(f, 0.0, 1.0, tol);
    CHECK(b.lower >= 0.0);
    CHECK(b.upper <= 1.0);
    CHECK(b.root >= b.lower);
    CHECK(b.root <= b.upper);
    CHECK(b.upper - b.lower <= tol);
    CHECK(std::abs(b.root - c) < 1e-8);
  }
}

TEST_CASE("eigen_tridiagonal_lowest: diagonal matrix") {
  TridiagonalOperator op{{1.0, 2.0, 3.0}, {0.0, 0.0}};
  const auto p = eigen_tridiagonal_lowest(op, 2);
  REQUIRE(p.size() == 2);
  CHECK(p[0].eigenvalue == doctest::Approx(1.0));
  CHECK(p[1].eigenvalue == doctest::Approx(2.0));
}

TEST_CASE("eigen_tridiagonal_lowest: particle in a box") {
  const auto op = dirichlet_operator(0.0, 1.0, 1999, [](double) { return 0.0; });
  const auto p = eigen_tridiagonal_lowest(op, 3);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  for (int n = 1; n <= 3; ++n) {
    CHECK(std::abs(p[n - 1].eigenvalue / (pi2 * n * n) - 1.0) < 1e-3);
  }
}

TEST_CASE("eigen_tridiagonal_lowest: Poschl-Teller well and residuals") {
  const auto op = dirichlet_operator(-20.0, 20.0, 4000,
                                     [](double x) { return -2.0 / std::pow(std::cosh(x), 2); });
  const auto p = eigen_tridiagonal_lowest(op, 4);
  CHECK(std::abs(p[0].eigenvalue + 1.0) < 1e-3);
  CHECK(p[1].eigenvalue > 0.0);
  for (const auto& e : p) {
    const auto av = op.apply(e.eigenvector);
    double r = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < av.size(); ++i) {
      r = std::max(r, std::abs(av[i] - e.eigenvalue * e.eigenvector[i]));
      norm += e.eigenvector[i] * e.eigenvector[i];
    }
    CHECK(r <= 1e-8 * op.norm());
    CHECK(std::abs(norm - 1.0) < 1e-12);
  }
  for (std::size_t i = 1; i < p.size(); ++i) CHECK(p[i].eigenvalue >= p[i - 1].eigenvalue);
}

TEST_CASE("eigen_tridiagonal_lowest: Sturm count brackets the returned eigenvalues") {
  const auto op = dirichlet_operator(0.0, 1.0, 300, [](double x) { return 50.0 * x; });
  const auto p = eigen_tridiagonal_lowest(op, 5);
  for (std::size_t k = 0; k < p.size(); ++k) {
    CHECK(op.count_below(p[k].eigenvalue - 1e-6) == k);
    CHECK(op.count_below(p[k].eigenvalue + 1e-6) == k + 1);
  }
}

TEST_CASE("bessel: trivial values") {
  CHECK(bessel(BesselKind::J, 0, 0.0) == 1.0);
  CHECK(bessel(BesselKind::I, 0, 0.0) == 1.0);
  CHECK(bessel(BesselKind::J, 1, 0.0) == 0.0);
  CHECK(std::abs(bessel(BesselKind::K, 0, 1.0) - 0.42102443824070833) < 1e-12);
}

TEST_CASE("bessel: high-precision oracle table") {
  for (const auto& o : kBessel) {
    const double v = bessel(kind_of(o.kind), o.order, o.x);
    const double err = std::abs(v - o.value);
    INFO(o.kind << o.order << "(" << o.x << ") = " << v << " vs " << o.value);
    CHECK(err <= 1e-10 * std::max(1.0, std::abs(o.value)));
  }
}

TEST_CASE("bessel: Wronskian identities") {
  for (double x : {0.01, 0.3, 1.0, 4.2, 8.0, 12.5, 19.9, 20.1, 35.0, 50.0}) {
    const double jy = bessel_j(1, x) * bessel_y(0, x) - bessel_j(0, x) * bessel_y(1, x);
    CHECK(std::abs(jy * x * std::numbers::pi / 2.0 - 1.0) < 1e-9);
    const double ik = bessel_i(0, x) * bessel_k(1, x) + bessel_i(1, x) * bessel_k(0, x);
    CHECK(std::abs(ik * x - 1.0) < 1e-9);
    const double jy3 = bessel_j(3, x) * bessel_y(2, x) - bessel_j(2, x) * bessel_y(3, x);
    CHECK(std::abs(jy3 * x * std::numbers::pi / 2.0 - 1.0) < 1e-9);
  }
}

TEST_CASE("bessel: domain errors") {
  CHECK_THROWS_AS(bessel_y(0, 0.0), DomainError);
  CHECK_THROWS_AS(bessel_k(1, -1.0), DomainError);
  CHECK_THROWS_AS(bessel_j(-1, 1.0), DomainError);
  CHECK_THROWS_AS(bessel_i(0, std::nan("")), DomainError);
}

TEST_CASE("interpolate_monotone: examples") {
  const std::vector<std::pair<double, double>> lin{{0.0, 0.0}, {1.0, 1.0}};
  CHECK(interpolate_monotone(lin, 0.5) == doctest::Approx(0.5));
  CHECK_THROWS_AS(interpolate_monotone(lin, 1.5), DomainError);

  std::vector<std::pair<double, double>> arc;
  for (int i = 0; i <= 200; ++i) {
    const double rho = 0.01 * i;
    const double x = integrate_adaptive(
                         [](double t) { return std::sqrt(1.0 + 4.0 * t * t * std::exp(-2.0 * t * t)); },
                         0.0, rho, 1e-13)
                         .value;
    arc.emplace_back(x, rho);
  }
  CHECK(std::abs(interpolate_monotone(arc, 1.2048) - 1.0) < 1e-3);
  CHECK(interpolate_monotone(arc, arc[37].first) == arc[37].second);
}

TEST_CASE("MonotoneCubic preserves monotone data") {
  std::vector<double> x{0.0, 1.0, 2.0, 3.0, 4.0}, y{0.0, 0.1, 0.1, 2.0, 2.1};
  MonotoneCubic m(x, y);
  double prev = -1.0;
  for (int i = 0; i <= 400; ++i) {
    const double v = m(0.01 * i);
    CHECK(v >= prev - 1e-15);
    prev = v;
  }
  CHECK(m(1.5) == doctest::Approx(0.1));
}
