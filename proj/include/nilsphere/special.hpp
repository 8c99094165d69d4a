#pragma once

// Scalar special functions: normalized Laguerre functions, reduced Bessel
// functions and L^2-orthonormal Hermite functions.

#include <span>

namespace nilsphere {

/// Term cap for the reduced Bessel power series.
inline constexpr int kBesselSeriesMaxTerms = 400;
/// Above this argument the series loses too many digits to cancellation and
/// bessel_reduced switches to Boost.Math's J_alpha.
inline constexpr double kBesselSeriesCutoff = 8.0;
/// laguerre_norm iterates on L_n e^{-x/2} directly below this argument and
/// with a running exponent above it.
inline constexpr double kLaguerreDirectLimit = 600.0;

/// Gamma function with exact paths for integers and half-integers.
double gamma_fn(double x);

/// C^n_{n+alpha} = Gamma(n + alpha + 1) / (n! Gamma(alpha + 1)), as a product.
double binomial_norm(int n, double alpha);

/// The Laguerre polynomial L_n^alpha(x) (three-term recurrence in n).
double laguerre_poly(int n, double alpha, double x);

/// L_n^alpha(x) e^{-x/2} / C^n_{n+alpha}; equals 1 at x = 0.
/// Throws DomainError for alpha <= -1, n < 0 or x < 0.
double laguerre_norm(int n, double alpha, double x);

/// Gamma(alpha+1) (z/2)^{-alpha} J_alpha(z), the entire function with value 1
/// at z = 0. Throws DomainError for alpha <= -1 or z < 0.
double bessel_reduced(double alpha, double z);

/// The series sum_k (-1)^k (z/2)^{2k} / (k! (alpha+1)_k), Neumaier-compensated.
/// Throws BudgetError when kBesselSeriesMaxTerms terms do not converge.
double bessel_reduced_series(double alpha, double z);

/// L^2(R)-orthonormal Hermite function h_k(x) = (2^k k! sqrt(pi))^{-1/2} e^{-x^2/2} H_k(x).
double hermite_fn(int k, double x);

/// h_k(x) e^{x^2/2}: the orthonormal Hermite polynomial for the weight e^{-x^2}.
double hermite_scaled(int k, double x);

/// Product of h_{alpha_i}(y_i).
double hermite_multi(std::span<const int> alpha, std::span<const double> y);

}  // namespace nilsphere
