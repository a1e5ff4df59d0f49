#include <cmath>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "doctest.h"

#include "curvq/inverse.hpp"
#include "curvq/numerics.hpp"
#include "curvq/potential.hpp"

using namespace curvq;

namespace {

struct AmplitudeOracle {
  int mq;
  double rho, value;
};

const AmplitudeOracle kAmplitude[] = {
#include "oracles/amplitude_table.inc"
};

// mpmath roots of the closed form, omega = 1/2
constexpr double kLower[] = {1.0, 1.0714034136097892, 1.6021217887376536, 1.9801118515361712};
constexpr double kUpper[] = {1.8503213603778188, 1.6015916275415797, 1.9565494947574438,
                             2.2650777910974903};

const PrescribedPotential kOsc = PrescribedPotential::harmonic(0.5);

}  // namespace

TEST_CASE("inverse_integrand: examples and errors") {
  const auto free = PrescribedPotential::free();
  for (double r : {0.5, 1.0, 3.0}) {
    CHECK(inverse_integrand(free, 1, r) == doctest::Approx(std::sqrt(0.75) / r).epsilon(1e-15));
  }
  CHECK(inverse_integrand(kOsc, 0, 1.0) == 0.0);
  CHECK_THROWS_AS(inverse_integrand(free, 0, 1.0), DomainError);
  CHECK_THROWS_AS(inverse_integrand(kOsc, 0, 0.9), DomainError);
  CHECK(inverse_integrand(kOsc, 2, 1.3) ==
        doctest::Approx(std::sqrt(0.25 * 1.3 * 1.3 + 3.75 / (1.3 * 1.3))));
}

TEST_CASE("amplitude: free motion is sqrt(3) ln rho, zero at the reference") {
  const auto free = PrescribedPotential::free();
  for (double r : {1.0, 1.2, 1.5, 1.78}) {
    CHECK(std::abs(amplitude(free, 1, 1.0, r) - std::sqrt(3.0) * std::log(r)) < 1e-12);
  }
  for (double ref : {0.3, 1.0, 4.0}) CHECK(amplitude(free, 2, ref, ref) == 0.0);
  CHECK(std::abs(amplitude(kOsc, 1, kLower[1], 1.602) - 1.0) < 2e-3);
  double prev = -1.0;
  for (double r = 1.1; r < 1.6; r += 0.05) {
    const double a = amplitude(kOsc, 1, kLower[1], r);
    CHECK(a > prev);
    prev = a;
  }
}

TEST_CASE("harmonic_amplitude_closed_form: examples") {
  CHECK(std::abs(harmonic_amplitude_closed_form(0.5, 1, 1.071)) < 2e-3);
  CHECK(std::abs(harmonic_amplitude_closed_form(0.5, 2, 1.957) - 1.0) < 3e-3);
  CHECK(std::abs(harmonic_amplitude_closed_form(0.5, 0, 1.0)) < 1e-15);
  CHECK_THROWS_AS(harmonic_amplitude_closed_form(0.5, 0, 0.99), DomainError);
}

TEST_CASE("amplitude: mpmath quadrature table") {
  for (const auto& o : kAmplitude) {
    CAPTURE(o.mq);
    CAPTURE(o.rho);
    const double ref = o.mq == 0 ? 1.0 : kLower[o.mq];
    CHECK(std::abs(amplitude(kOsc, o.mq, ref, o.rho) - o.value) < 1e-10);
    CHECK(std::abs(harmonic_amplitude_closed_form(0.5, o.mq, o.rho) - o.value) < 1e-10);
  }
}

TEST_CASE("amplitude: quadrature equals the closed form at 50 random strip points") {
  std::mt19937_64 rng(20261014);
  for (int mq = 0; mq <= 3; ++mq) {
    const auto s = strip_bounds(kOsc, mq);
    std::uniform_real_distribution<double> pick(s.rho_lower, s.rho_upper);
    for (int i = 0; i < 50; ++i) {
      const double r = pick(rng);
      const double q = amplitude(kOsc, mq, s.rho_ref, r);
      CHECK(std::abs(q - harmonic_amplitude_closed_form(0.5, mq, r)) < 1e-8);
    }
  }
}

TEST_CASE("strip_bounds: oscillator mq = 1, 2, 3 reproduce the closed-form roots") {
  for (int mq = 1; mq <= 3; ++mq) {
    const auto s = strip_bounds(kOsc, mq);
    CHECK(std::abs(s.rho_lower - kLower[mq]) < 1e-9);
    CHECK(std::abs(s.rho_upper - kUpper[mq]) < 1e-9);
    CHECK(s.lower_criterion == BoundCriterion::amplitude_zero);
    CHECK(s.upper_criterion == BoundCriterion::amplitude_one);
    CHECK(s.mq == mq);
    CHECK(s.potential_kind == PotentialKind::harmonic);
    CHECK(!s.estimate_upper);
  }
  const double published[][2] = {{1.071, 1.602}, {1.602, 1.957}, {1.980, 2.265}};
  for (int mq = 1; mq <= 3; ++mq) {
    const auto s = strip_bounds(kOsc, mq);
    CHECK(std::abs(s.rho_lower - published[mq - 1][0]) < 3e-3);
    CHECK(std::abs(s.rho_upper - published[mq - 1][1]) < 3e-3);
  }
}

TEST_CASE("strip_bounds: oscillator scaling with omega") {
  for (double w : {0.125, 2.0, 8.0}) {
    const auto p = PrescribedPotential::harmonic(w);
    const double u = p.length_unit();
    CHECK(u == doctest::Approx(1.0 / std::sqrt(2.0 * w)));
    for (int mq = 1; mq <= 3; ++mq) {
      const auto s = strip_bounds(p, mq);
      CHECK(std::abs(s.rho_lower / u - kLower[mq]) < 1e-8);
      CHECK(std::abs(s.rho_upper / u - kUpper[mq]) < 1e-8);
    }
  }
}

TEST_CASE("strip_bounds: oscillator mq = 0 uses the vanishing radicand") {
  const auto s = strip_bounds(kOsc, 0);
  CHECK(s.rho_lower == 1.0);
  CHECK(s.lower_criterion == BoundCriterion::integrand_real_boundary);
  CHECK(std::abs(s.rho_upper - kUpper[0]) < 1e-9);
  REQUIRE(s.estimate_upper);
  CHECK(*s.estimate_upper == doctest::Approx(std::pow(5.0, 0.25)));
}

TEST_CASE("strip_bounds: free motion ratios") {
  const auto free = PrescribedPotential::free();
  const auto s1 = strip_bounds(free, 1);
  CHECK(s1.rho_lower == 1.0);
  CHECK(std::abs(s1.rho_upper - std::exp(1.0 / std::sqrt(3.0))) < 1e-10);
  StripOptions o;
  o.rho_ref = 2.5;
  const auto s2 = strip_bounds(free, 2, o);
  CHECK(s2.rho_lower == 2.5);
  CHECK(std::abs(s2.rho_upper / s2.rho_lower - std::exp(1.0 / std::sqrt(15.0))) < 1e-10);
  CHECK_THROWS_AS(strip_bounds(free, 0), DomainError);
}

TEST_CASE("strip_bounds: secondary strip sits below the amplitude zero") {
  StripOptions o;
  o.branch = StripBranch::secondary;
  const auto s = strip_bounds(kOsc, 1, o);
  CHECK(s.branch == StripBranch::secondary);
  CHECK(std::abs(s.rho_lower - 0.62962579507632986) < 1e-9);
  CHECK(std::abs(s.rho_upper - kLower[1]) < 1e-9);
  CHECK(std::abs(harmonic_amplitude_closed_form(0.5, 1, s.rho_lower) + 1.0) < 1e-9);
  CHECK_THROWS_AS(strip_bounds(kOsc, 0, o), DomainError);
}

TEST_CASE("strip_bounds: width obeys the mean-value estimate") {
  const auto custom = PrescribedPotential::custom([](double r) { return 1.0 + r; }, 0.0, 50.0);
  StripOptions co;
  co.rho_ref = 1.0;
  const std::vector<std::pair<PrescribedPotential, int>> cases{
      {kOsc, 0}, {kOsc, 1}, {kOsc, 2}, {kOsc, 3}, {PrescribedPotential::free(), 1},
      {PrescribedPotential::free(), 2}, {PrescribedPotential::harmonic(3.0), 2}};
  for (const auto& [pot, mq] : cases) {
    const auto s = strip_bounds(pot, mq);
    double worst = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double r = s.rho_lower + (s.rho_upper - s.rho_lower) * i / 2000.0;
      const double g2 = pot(r) + (mq * mq - 0.25) / (r * r);
      if (g2 > 0.0) worst = std::max(worst, 1.0 / std::sqrt(g2));
      else worst = INFINITY;
    }
    CHECK(s.rho_upper - s.rho_lower <= 0.5 * worst);
  }
  const auto sc = strip_bounds(custom, 1, co);
  CHECK(sc.rho_lower == 1.0);
  CHECK(std::abs(amplitude(custom, 1, 1.0, sc.rho_upper) - 1.0) < 1e-10);
}

TEST_CASE("prescribed potentials: tabulated and custom") {
  std::vector<std::pair<double, double>> samples;
  for (int i = 0; i <= 40; ++i) {
    const double r = 0.1 * i;
    samples.emplace_back(r, 0.25 * r * r);
  }
  const auto t = PrescribedPotential::tabulated(samples);
  CHECK(t.kind() == PotentialKind::custom);
  CHECK(t(1.5) == doctest::Approx(0.25 * 2.25).epsilon(1e-3));
  CHECK(t.contains(3.9));
  CHECK(!t.contains(4.1));
  samples[3].second = -1.0;
  CHECK_THROWS_AS(PrescribedPotential::tabulated(samples), DomainError);
  CHECK_THROWS_AS(PrescribedPotential::harmonic(0.0), DomainError);
  CHECK(to_string(PotentialKind::harmonic) == "harmonic");
}

TEST_CASE("design_profile: oscillator mq = 1 is real and increasing") {
  const auto d = design_profile(kOsc, 1, 1000);
  REQUIRE(d.rho.size() == 1000);
  CHECK(d.rho.front() == doctest::Approx(kLower[1]));
  CHECK(d.rho.back() < kUpper[1]);
  CHECK(d.f.front() == 0.0);
  CHECK(d.df.front() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(d.A.back() - (1.0 - 1e-6)) < 1e-9);
  for (std::size_t i = 1; i < d.rho.size(); ++i) {
    CHECK(d.f[i] > d.f[i - 1]);
    CHECK(std::abs(d.A[i]) < 1.0);
    CHECK(std::isfinite(d.f[i]));
  }
  CHECK(d.tail_bound > 0.0);
  CHECK(d.tail_bound < 1e-2);
}

TEST_CASE("design_profile: free mq = 1 slope matches the closed form") {
  const auto d = design_profile(PrescribedPotential::free(), 1, 500);
  for (std::size_t i = 0; i < d.rho.size(); ++i) {
    const double l = std::sqrt(3.0) * std::log(d.rho[i]);
    CHECK(std::abs(d.df[i] - l / std::sqrt(1.0 - l * l)) < 1e-9 * std::max(1.0, d.df[i]));
  }
}

TEST_CASE("round_trip_error: tolerances") {
  CHECK(round_trip_error(design_profile(PrescribedPotential::free(), 1, 2000)) <= 1e-6);
  CHECK(round_trip_error(design_profile(kOsc, 1, 2000)) <= 1e-4);
  CHECK(round_trip_error(design_profile(kOsc, 2, 2000)) <= 1e-4);
  CHECK(round_trip_error(design_profile(PrescribedPotential::harmonic(2.0), 3, 2000)) <= 1e-4);
}

TEST_CASE("round_trip_error: profile sign flip leaves W unchanged") {
  DesignOptions minus;
  minus.sign = ProfileSign::minus;
  for (int mq : {1, 2}) {
    const auto a = design_profile(kOsc, mq, 1500);
    const auto b = design_profile(kOsc, mq, 1500, minus);
    for (std::size_t i = 0; i < a.f.size(); ++i) CHECK(b.f[i] == -a.f[i]);
    CHECK(std::abs(round_trip_error(a) - round_trip_error(b)) <= 1e-12);
  }
}

TEST_CASE("round_trip_error: W equals -U on the designed surface") {
  const auto d = design_profile(kOsc, 2, 2000);
  const auto p = d.profile();
  for (std::size_t i = 100; i + 100 < d.rho.size(); i += 97) {
    if (d.A[i] > 0.99) continue;
    const double r = d.rho[i];
    CHECK(std::abs(effective_potential(p, 2, r) + kOsc(r)) <= 1e-4 * std::max(1.0, kOsc(r)));
  }
}

TEST_CASE("free_profile_m0_figure3: cusp, e^3 slope and cone limit") {
  std::vector<double> grid;
  for (int i = 0; i <= 400; ++i) grid.push_back(std::exp(0.05 * i));
  const auto pts = free_profile_m0_figure3(grid);
  REQUIRE(pts.size() == grid.size());
  CHECK(pts[0].f == 0.0);
  CHECK(pts[0].slope == 0.0);
  CHECK(std::abs(pts[60].rho - std::exp(3.0)) < 1e-12);
  CHECK(std::abs(pts[60].slope - 3.0 / std::sqrt(10.0)) < 1e-12);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    CHECK(pts[i].slope > pts[i - 1].slope);
    CHECK(pts[i].slope < 1.0);
    CHECK(pts[i].f > pts[i - 1].f);
  }
  CHECK(1.0 - pts.back().slope < 1e-2);
  CHECK_THROWS_AS(free_profile_m0_figure3(std::vector<double>{0.5}), DomainError);
}

TEST_CASE("box_energies_on_free_strip: formula, scaling and solver pair") {
  const auto e = box_energies_on_free_strip(1, 1.0, 1);
  CHECK(std::abs(e.formula - 64.671145563705730) < 1e-9);
  CHECK(box_energies_on_free_strip(1, 2.0, 1).formula == doctest::Approx(e.formula / 4.0));
  CHECK(box_energies_on_free_strip(1, 1.0, 2).formula == doctest::Approx(4.0 * e.formula));
  CHECK(std::abs(e.solver / e.arc_box - 1.0) < 1e-3);
  CHECK(std::abs(e.solver_length / e.strip_length - 1.0) < 2e-4);
  const auto e3 = box_energies_on_free_strip(2, 1.0, 3);
  CHECK(std::abs(e3.solver / e3.arc_box - 1.0) < 1e-3);
  CHECK_THROWS_AS(box_energies_on_free_strip(0, 1.0, 1), DomainError);
}
