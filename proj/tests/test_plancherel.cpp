#include "nilsphere/errors.hpp"
#include "nilsphere/plancherel.hpp"
#include "nilsphere/spherical.hpp"
#include "nilsphere/quadrature.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace nilsphere;

namespace {

constexpr double kPi = std::numbers::pi;

GroupFn gaussian2(double sx, double sa) {
  return [sx, sa](const GroupPoint& n) {
    const double a = n.a.coords()[0];
    return Complex(std::exp(-0.5 * (n.x.coords().squaredNorm() / (sx * sx) + a * a / (sa * sa))), 0.0);
  };
}

RadialMeasure measure_for(double sx, double sa) {
  RadialMeasure m = RadialMeasure::for_p(2);
  m.polar.rho_max = 8.0 * sx;
  m.polar.a_max = 8.0 * sa;
  m.tensor.scale_x = sx;
  m.tensor.scale_a = sa;
  return m;
}

}  // namespace

TEST_CASE("eta densities") {
  CHECK(eta_density(std::vector<double>{1.7}, 2) == 1.0);
  CHECK(eta_density(std::vector<double>{1.7}, 3) == doctest::Approx(1.7 * 1.7));
  CHECK(eta_density(std::vector<double>{2.0, 1.0}, 4) == doctest::Approx(9.0));
  CHECK(eta_density(std::vector<double>{2.0, 1.0}, 5) == doctest::Approx(9.0 * 4.0));
  CHECK(eta_density(std::vector<double>{2.0, 2.0}, 4) == 0.0);
  CHECK(eta_density(std::vector<double>{2.0, 0.0}, 5) == 0.0);
  CHECK(eta_prime_density(std::vector<double>{2.0, 1.0}, 4) == doctest::Approx(18.0));
  CHECK(eta_prime_density(std::vector<double>{1.5}, 2) == doctest::Approx(1.5));
  CHECK_THROWS_AS(eta_density(std::vector<double>{1.0, 2.0}, 4), DomainError);
  CHECK_THROWS_AS(eta_density(std::vector<double>{1.0}, 4), DimensionError);
  // Vandermonde positivity off the boundary.
  Rng rng(1);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> l{3.0 * rng.uniform(), 3.0 * rng.uniform(), 3.0 * rng.uniform()};
    std::sort(l.rbegin(), l.rend());
    CHECK(eta_density(l, 6) > 0.0);
    CHECK(eta_density(l, 7) > 0.0);
  }
}

TEST_CASE("constants") {
  CHECK(plancherel_constant(2) == doctest::Approx(1.0));
  CHECK(plancherel_constant(3) == doctest::Approx(2.0 * std::pow(2.0 * kPi, -3.0)));
  CHECK(plancherel_constant(4) == doctest::Approx(std::pow(2.0 * kPi, -4.0)));
  CHECK(*polar_constant_reference(2) == 2.0);
  CHECK(*polar_constant_reference(3) == doctest::Approx(4.0 * kPi));
  CHECK(!polar_constant_reference(4));
  CHECK(!RadialMeasure::for_p(2).r_grid);
  CHECK(RadialMeasure::for_p(3).r_grid);
}

TEST_CASE("ZGaussian integral") {
  ZGaussian g{{1.0, 2.0, 0.5}, 0.9};
  const QuadratureRule& gh = gauss_hermite(40);
  double s = 0.0;
  for (std::size_t i = 0; i < gh.nodes.size(); ++i)
    for (std::size_t j = 0; j < gh.nodes.size(); ++j)
      for (std::size_t k = 0; k < gh.nodes.size(); ++k) {
        const std::vector<double> c{gh.nodes[i], gh.nodes[j], gh.nodes[k]};
        const double w = gh.weights[i] * gh.weights[j] * gh.weights[k] *
                         std::exp(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
        s += w * g(c);
      }
  CHECK(s == doctest::Approx(g.integral()).epsilon(1e-10));
}

TEST_CASE("polar calibration at p = 2 is exact") {
  const CalibrationResult r = calibrate_c(2, 0, 0);
  CHECK(std::abs(r.c - 2.0) <= 1e-8);
  CHECK(r.std_error == 0.0);
  CHECK(r.deterministic);
  for (const PolarFit& h : r.held_out) CHECK(std::abs(h.ratio - 1.0) <= 1e-8);
}

TEST_CASE("polar calibration at p = 3") {
  const CalibrationResult r = calibrate_c(3, 17, 200000);
  CHECK(std::abs(r.c / (4.0 * kPi) - 1.0) <= 0.01);
  CHECK(r.std_error > 0.0);
  CHECK(std::abs(r.c - 4.0 * kPi) <= 4.0 * r.std_error);
  CHECK(r.held_out.size() == 5);
  for (const PolarFit& h : r.held_out) CHECK(std::abs(h.ratio - 1.0) <= 3.0 * h.ratio_se);

  // Width independence.
  const auto one = calibrate_c(3, 17, 100000, {ZGaussian{{1.0, 2.0, 0.5}, 0.8}});
  const auto two = calibrate_c(3, 17, 100000, {ZGaussian{{1.0, 2.0, 0.5}, 1.3}});
  CHECK(std::abs(one.c - two.c) <= 2.0 * std::hypot(one.std_error, two.std_error));
}

TEST_CASE("isotropic Gaussians are K-invariant and calibrate exactly") {
  const auto a = calibrate_c(3, 3, 1000, {ZGaussian::isotropic(3, 0.8)});
  const auto b = calibrate_c(3, 4, 1000, {ZGaussian::isotropic(3, 1.3)});
  CHECK(std::abs(a.c / (4.0 * kPi) - 1.0) <= 1e-10);
  CHECK(std::abs(b.c / (4.0 * kPi) - 1.0) <= 1e-10);
  CHECK(a.std_error <= 1e-12 * a.c);
}

TEST_CASE("polar calibration at p = 4 passes its held-out check") {
  const CalibrationResult r = calibrate_c(4, 23, 40000);
  CHECK(r.c > 0.0);
  for (const PolarFit& h : r.held_out) CHECK(std::abs(h.ratio - 1.0) <= 3.0 * h.ratio_se);
}

TEST_CASE("calibration argument errors") {
  CHECK_THROWS_AS(calibrate_c(3, 1, 1), DomainError);
  CHECK_THROWS_AS(calibrate_c(7, 1, 100), DomainError);
  CHECK_THROWS_AS(calibrate_c(3, 1, 100, {}), DomainError);
  CHECK_THROWS_AS(calibrate_c(3, 1, 100, {ZGaussian::isotropic(6, 1.0)}), DimensionError);
}

TEST_CASE("spherical_coefficient basics") {
  const SphericalIndex idx(0.0, LambdaSpec(2, {1.0}), {0}, GroupKind::O);
  GroupFn zero = [](const GroupPoint&) { return Complex(0.0, 0.0); };
  CHECK(std::abs(spherical_coefficient(zero, idx, TensorGrid{})) == 0.0);
  const GroupFn g1 = gaussian2(1.0, 1.0), g2 = gaussian2(0.7, 1.4);
  GroupFn mix = [&](const GroupPoint& n) { return 2.0 * g1(n) - Complex(0.0, 3.0) * g2(n); };
  const Complex a = spherical_coefficient(g1, idx, TensorGrid{});
  const Complex b = spherical_coefficient(g2, idx, TensorGrid{});
  CHECK(std::abs(spherical_coefficient(mix, idx, TensorGrid{}) - (2.0 * a - Complex(0.0, 3.0) * b)) <= 1e-12);
}

TEST_CASE("spherical_coefficient against an independent Monte Carlo") {
  // With n ~ N(0, I) in (x1, x2, a), psi(n)/pdf(n) = (2 pi)^{3/2}.
  const SphericalIndex idx(0.0, LambdaSpec(2, {1.0}), {0}, GroupKind::O);
  const GroupFn psi = gaussian2(1.0, 1.0);
  const Complex quad = spherical_coefficient(psi, idx, TensorGrid{});
  Rng rng(5);
  const std::size_t n = 200000;
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double> c{rng.normal(), rng.normal(), rng.normal()};
    const double v = std::pow(2.0 * kPi, 1.5) * phi_p2_closed_form(idx, GroupPoint::from_coords(2, c)).real();
    const double d = v - mean;
    mean += d / (i + 1.0);
    m2 += d * (v - mean);
  }
  const double se = std::sqrt(m2 / (n - 1.0) / n);
  CHECK(std::abs(quad.imag()) <= 1e-12);
  CHECK(std::abs(quad.real() - mean) <= 3.0 * se);
}

TEST_CASE("polar coefficients match the tensor coefficients") {
  const GroupFn psi = gaussian2(0.9, 1.2);
  const PolarCoefficients pc(psi, PolarGrid{});
  for (double lambda : {0.3, 1.0, 2.5}) {
    const auto all = pc(lambda, 6);
    for (int l = 0; l < 6; ++l) {
      const SphericalIndex idx(0.0, LambdaSpec(2, {lambda}), {l}, GroupKind::O);
      const Complex t = spherical_coefficient(psi, idx, TensorGrid{64, 0.9, 1.2});
      CHECK(std::abs(all[static_cast<std::size_t>(l)] - t) <= 1e-8);
    }
  }
}

TEST_CASE("l2_norm_squared") {
  CHECK(l2_norm_squared(gaussian2(1.0, 1.0), 2, TensorGrid{}) == doctest::Approx(std::pow(kPi, 1.5)).epsilon(1e-12));
  CHECK(l2_norm_squared(gaussian2(0.5, 2.0), 2, TensorGrid{48, 0.5, 2.0}) ==
        doctest::Approx(std::pow(kPi, 1.5) * 0.25 * 2.0).epsilon(1e-12));
}

TEST_CASE("radial Plancherel check") {
  GroupFn zero = [](const GroupPoint&) { return Complex(0.0, 0.0); };
  const PlancherelResult z = radial_plancherel_check(zero, RadialMeasure::for_p(2));
  CHECK(z.lhs == 0.0);
  CHECK(z.rhs == 0.0);
  CHECK(!z.ratio);

  GroupFn flat = [](const GroupPoint&) { return Complex(1.0, 0.0); };
  CHECK_THROWS_AS(radial_plancherel_check(flat, RadialMeasure::for_p(2)), DomainError);

  std::vector<double> ratios;
  for (auto [sx, sa] : {std::pair{1.0, 1.0}, std::pair{0.8, 1.5}, std::pair{1.3, 0.6}}) {
    const PlancherelResult r = radial_plancherel_check(gaussian2(sx, sa), measure_for(sx, sa));
    REQUIRE(r.ratio);
    ratios.push_back(*r.ratio);
    REQUIRE(r.measured_c_p);
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  CHECK(*hi / *lo - 1.0 <= 0.01);
}

TEST_CASE("radial Plancherel dilation covariance") {
  const double s = 1.5;
  const PlancherelResult base = radial_plancherel_check(gaussian2(1.0, 1.0), measure_for(1.0, 1.0));
  const PlancherelResult dil = radial_plancherel_check(gaussian2(1.0 / s, 1.0 / (s * s)), measure_for(1.0 / s, 1.0 / (s * s)));
  const double jac = std::pow(s, -4.0);
  CHECK(std::abs(dil.lhs / (jac * base.lhs) - 1.0) <= 0.01);
  CHECK(std::abs(dil.rhs / (jac * base.rhs) - 1.0) <= 0.01);
}
