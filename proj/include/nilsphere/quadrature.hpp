#pragma once

// Gaussian quadrature rules. Rules are computed once per node count and
// cached; the returned references stay valid for the life of the program.

#include <functional>
#include <vector>

namespace nilsphere {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Hermite rule for the weight e^{-x^2} on R (Newton on the orthonormal
/// recurrence, so tiny tail weights keep full relative accuracy).
const QuadratureRule& gauss_hermite(int n);

/// Gauss-Legendre rule on [-1, 1].
const QuadratureRule& gauss_legendre(int n);

/// Gauss-Laguerre rule for the weight x^alpha e^{-x} on [0, inf).
QuadratureRule gauss_laguerre(int n, double alpha);

/// Gauss-Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre_on(int n, double a, double b);

struct AdaptiveResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels = 0;
};

/// Adaptive Gauss-Legendre on [a, b]: a panel is accepted when its n-point
/// and 2n-point estimates agree to max(abs_tol, rel_tol |total|); otherwise it
/// is bisected, down to max_depth.
AdaptiveResult adaptive_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                                       double rel_tol = 1e-9, double abs_tol = 0.0, int n = 16,
                                       int max_depth = 20);

}  // namespace nilsphere
