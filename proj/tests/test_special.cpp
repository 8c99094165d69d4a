#include "nilsphere/errors.hpp"
#include "nilsphere/quadrature.hpp"
#include "nilsphere/special.hpp"

#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <numbers>
#include <vector>

using namespace nilsphere;

TEST_CASE("laguerre_norm examples") {
  for (int n = 0; n <= 12; ++n)
    for (double a : {-0.5, 0.0, 1.0, 2.5}) CHECK(laguerre_norm(n, a, 0.0) == 1.0);
  for (double x : {0.0, 0.3, 7.0, 40.0}) CHECK(laguerre_norm(0, 1.5, x) == doctest::Approx(std::exp(-0.5 * x)).epsilon(1e-15));
  CHECK(laguerre_norm(1, 0.0, 2.0) == doctest::Approx(-0.36787944117144233).epsilon(1e-15));
  CHECK_THROWS_AS(laguerre_norm(1, -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(laguerre_norm(-1, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(laguerre_norm(1, 0.0, -1.0), DomainError);
}

TEST_CASE("laguerre_norm matches the closed form L_2") {
  for (double a : {0.0, 1.0, 3.0})
    for (double x : {0.1, 1.0, 5.0, 12.0}) {
      const double l2 = 0.5 * (x * x - 2.0 * (a + 2.0) * x + (a + 1.0) * (a + 2.0));
      const double c = 0.5 * (a + 1.0) * (a + 2.0);
      CHECK(laguerre_norm(2, a, x) == doctest::Approx(l2 * std::exp(-0.5 * x) / c).epsilon(1e-13));
    }
}

TEST_CASE("laguerre_norm is continuous across the direct-recurrence limit") {
  for (int n : {1, 5, 40, 300}) {
    const double below = laguerre_norm(n, 1.0, kLaguerreDirectLimit);
    const double above = laguerre_norm(n, 1.0, std::nextafter(kLaguerreDirectLimit, 1e9));
    CHECK(std::abs(below - above) <= 1e-12 * (1e-300 + std::abs(below)) + 1e-300);
  }
}

TEST_CASE("laguerre_norm is bounded by 1 for integer alpha") {
  for (int a = 0; a <= 3; ++a)
    for (int n = 0; n <= 20; ++n)
      for (double x = 0.0; x <= 200.0; x += 0.25) CHECK(std::abs(laguerre_norm(n, a, x)) <= 1.0 + 1e-12);
}

TEST_CASE("Laguerre orthogonality by Gauss-Laguerre") {
  for (double a : {0.0, 1.0, 2.0}) {
    const QuadratureRule rule = gauss_laguerre(40, a);
    for (int n = 0; n <= 10; ++n)
      for (int m = 0; m <= 10; ++m) {
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
          s += rule.weights[i] * laguerre_poly(n, a, rule.nodes[i]) * laguerre_poly(m, a, rule.nodes[i]);
        const double norm = std::exp(std::lgamma(n + a + 1.0) - std::lgamma(n + 1.0));
        if (n == m)
          CHECK(std::abs(s / norm - 1.0) <= 1e-8);
        else
          CHECK(std::abs(s) <= 1e-8 * norm);
      }
  }
}

TEST_CASE("bessel_reduced examples") {
  for (double a : {-0.5, 0.0, 0.5, 1.0, 3.5}) CHECK(bessel_reduced(a, 0.0) == 1.0);
  for (double z = 0.0; z <= 50.0; z += 0.125) {
    CHECK(std::abs(bessel_reduced(-0.5, z) - std::cos(z)) <= 1e-12);
    const double sinc = z == 0.0 ? 1.0 : std::sin(z) / z;
    CHECK(std::abs(bessel_reduced(0.5, z) - sinc) <= 1e-12);
  }
  CHECK_THROWS_AS(bessel_reduced(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(bessel_reduced(0.0, -1.0), DomainError);
}

TEST_CASE("bessel_reduced against Boost J and across the series cutoff") {
  for (double a : {0.0, 1.0, 1.5, 4.0})
    for (double z : {0.5, 3.0, 7.9, 8.1, 20.0, 300.0}) {
      const double ref = std::tgamma(a + 1.0) * std::pow(0.5 * z, -a) * boost::math::cyl_bessel_j(a, z);
      CHECK(std::abs(bessel_reduced(a, z) - ref) <= 1e-12);
    }
  for (double a : {0.0, 0.5, 2.0}) {
    const double z = kBesselSeriesCutoff;
    CHECK(std::abs(bessel_reduced_series(a, z) - bessel_reduced(a, std::nextafter(z, 100.0))) <= 1e-12);
  }
  for (double z = 0.0; z <= 100.0; z += 0.5) CHECK(std::abs(bessel_reduced(0.0, z)) <= 1.0);
}

TEST_CASE("hermite_fn examples") {
  for (double x : {-2.0, 0.0, 0.7}) CHECK(hermite_fn(0, x) == doctest::Approx(std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x)));
  CHECK(hermite_fn(1, 0.0) == 0.0);
  CHECK(hermite_fn(2, 1.3) == doctest::Approx(hermite_scaled(2, 1.3) * std::exp(-0.5 * 1.69)).epsilon(1e-15));
  const double h3 = (8.0 * 1.1 * 1.1 * 1.1 - 12.0 * 1.1) / std::sqrt(8.0 * 6.0 * std::sqrt(std::numbers::pi));
  CHECK(hermite_fn(3, 1.1) == doctest::Approx(h3 * std::exp(-0.5 * 1.21)).epsilon(1e-14));
}

TEST_CASE("Hermite orthonormality by Gauss-Hermite") {
  const QuadratureRule& rule = gauss_hermite(80);
  for (int j = 0; j <= 12; ++j)
    for (int k = 0; k <= 12; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        s += rule.weights[i] * hermite_scaled(j, rule.nodes[i]) * hermite_scaled(k, rule.nodes[i]);
      CHECK(std::abs(s - (j == k ? 1.0 : 0.0)) <= 1e-10);
    }
}

TEST_CASE("Hermite ODE residual") {
  const double h = 1e-2;
  for (int k = 0; k <= 10; ++k)
    for (double x = -4.0; x <= 4.0; x += 0.1) {
      const double f = hermite_fn(k, x);
      const double d2 = (-hermite_fn(k, x + 2 * h) + 16.0 * hermite_fn(k, x + h) - 30.0 * f +
                         16.0 * hermite_fn(k, x - h) - hermite_fn(k, x - 2 * h)) /
                        (12.0 * h * h);
      CHECK(std::abs(d2 + (2.0 * k + 1.0 - x * x) * f) <= 1e-5 * (1.0 + std::abs(f)));
    }
}

TEST_CASE("hermite_multi is a product") {
  const std::vector<int> alpha{2, 0, 1};
  const std::vector<double> y{0.3, -1.0, 2.0};
  CHECK(hermite_multi(alpha, y) == doctest::Approx(hermite_fn(2, 0.3) * hermite_fn(0, -1.0) * hermite_fn(1, 2.0)));
}

TEST_CASE("gamma_fn and binomial_norm") {
  CHECK(gamma_fn(5.0) == 24.0);
  CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-15));
  CHECK(gamma_fn(3.5) == doctest::Approx(3.3233509704478426).epsilon(1e-15));
  CHECK(binomial_norm(3, 2.0) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(binomial_norm(0, 7.3) == 1.0);
}

TEST_CASE("quadrature rules") {
  const QuadratureRule& gh = gauss_hermite(64);
  double s = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
    s += gh.weights[i];
    s2 += gh.weights[i] * gh.nodes[i] * gh.nodes[i];
  }
  CHECK(s == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
  CHECK(s2 == doctest::Approx(0.5 * std::sqrt(std::numbers::pi)).epsilon(1e-13));
  const QuadratureRule gl = gauss_legendre_on(10, 0.0, 2.0);
  double c = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) c += gl.weights[i] * std::pow(gl.nodes[i], 7);
  CHECK(c == doctest::Approx(32.0).epsilon(1e-14));
  const AdaptiveResult ar = adaptive_gauss_legendre([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-12);
  CHECK(ar.value == doctest::Approx(2.0 / 3.0).epsilon(1e-11));
}
