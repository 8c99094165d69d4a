#include "nilsphere/special.hpp"

#include "nilsphere/errors.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <numbers>
#include <string>

namespace nilsphere {

double gamma_fn(double x) {
  const double twice = 2.0 * x;
  if (x > 0.0 && x <= 170.0 && twice == std::floor(twice)) {
    if (x == std::floor(x)) {
      double f = 1.0;
      for (int k = 2; k < static_cast<int>(x); ++k) f *= k;
      return f;
    }
    // Gamma(k + 1/2) = sqrt(pi) prod_{i=1}^{k} (i - 1/2)
    double g = std::sqrt(std::numbers::pi);
    for (double v = 0.5; v < x; v += 1.0) g *= v;
    return g;
  }
  if (x > 0.0) return std::exp(std::lgamma(x));
  return std::tgamma(x);
}

double binomial_norm(int n, double alpha) {
  double c = 1.0;
  for (int k = 1; k <= n; ++k) c *= (k + alpha) / k;
  return c;
}

double laguerre_poly(int n, double alpha, double x) {
  if (n < 0) throw DomainError("laguerre_poly: n must be >= 0");
  if (!(alpha > -1.0)) throw DomainError("laguerre_poly: alpha must be > -1");
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double laguerre_norm(int n, double alpha, double x) {
  if (n < 0) throw DomainError("laguerre_norm: n must be >= 0");
  if (!(alpha > -1.0)) throw DomainError("laguerre_norm: alpha must be > -1");
  if (!(x >= 0.0)) throw DomainError("laguerre_norm: x must be >= 0");
  if (x == 0.0) return 1.0;
  if (x <= kLaguerreDirectLimit) {
    // Recurrence on L_k e^{-x/2}, which stays bounded by C^k_{k+alpha}.
    const double e = std::exp(-0.5 * x);
    double prev = e;
    if (n == 0) return prev;
    double cur = (1.0 + alpha - x) * e;
    for (int k = 1; k < n; ++k) {
      const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
      prev = cur;
      cur = next;
    }
    return cur / binomial_norm(n, alpha);
  }
  // Large x: carry the scale separately to avoid underflow of e^{-x/2}.
  double log_scale = -0.5 * x;
  double prev = 1.0;
  double cur = 1.0 + alpha - x;
  if (n == 0) return std::exp(log_scale);
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
    if (std::abs(cur) > 1e150) {
      cur *= 1e-150;
      prev *= 1e-150;
      log_scale += 150.0 * std::numbers::ln10;
    }
  }
  const double mag = std::abs(cur);
  if (mag == 0.0) return 0.0;
  return std::copysign(std::exp(std::log(mag) + log_scale - std::log(binomial_norm(n, alpha))), cur);
}

double bessel_reduced_series(double alpha, double z) {
  if (!(alpha > -1.0)) throw DomainError("bessel_reduced: alpha must be > -1");
  if (!(z >= 0.0)) throw DomainError("bessel_reduced: z must be >= 0");
  const double q = -0.25 * z * z;
  double term = 1.0;
  double sum = 1.0;
  double comp = 0.0;
  double largest = 1.0;
  for (int k = 1; k <= kBesselSeriesMaxTerms; ++k) {
    term *= q / (k * (k + alpha));
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
    largest = std::max(largest, std::abs(term));
    // Terms decrease monotonically once k (k + alpha) > z^2 / 4.
    if (k * (k + alpha) > -q && std::abs(term) <= 1e-18 * largest) return sum + comp;
  }
  throw BudgetError("bessel_reduced: series did not converge within " + std::to_string(kBesselSeriesMaxTerms) +
                    " terms (z = " + std::to_string(z) + ")");
}

double bessel_reduced(double alpha, double z) {
  if (!(alpha > -1.0)) throw DomainError("bessel_reduced: alpha must be > -1");
  if (!(z >= 0.0)) throw DomainError("bessel_reduced: z must be >= 0");
  if (z <= kBesselSeriesCutoff) return bessel_reduced_series(alpha, z);
  if (alpha == -0.5) return std::cos(z);
  if (alpha == 0.5) return std::sin(z) / z;
  const double j = boost::math::cyl_bessel_j(alpha, z);
  return j * std::exp(std::lgamma(alpha + 1.0) - alpha * std::log(0.5 * z));
}

double hermite_scaled(int k, double x) {
  if (k < 0) throw DomainError("hermite: k must be >= 0");
  double prev = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
  if (k == 0) return prev;
  double cur = std::numbers::sqrt2 * x * prev;
  for (int i = 1; i < k; ++i) {
    const double next = x * std::sqrt(2.0 / (i + 1.0)) * cur - std::sqrt(static_cast<double>(i) / (i + 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite_fn(int k, double x) {
  const double g = std::exp(-0.5 * x * x);
  if (g == 0.0) return 0.0;
  return hermite_scaled(k, x) * g;
}

double hermite_multi(std::span<const int> alpha, std::span<const double> y) {
  if (alpha.size() != y.size()) throw DimensionError("hermite_multi: dimension mismatch");
  double v = 1.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) v *= hermite_fn(alpha[i], y[i]);
  return v;
}

}  // namespace nilsphere
