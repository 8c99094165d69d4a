#pragma once

// Polar measures on the space of skew matrices, the calibration of the polar
// constant c, spherical coefficients of radial functions, and the radial
// Plancherel check at p = 2.
//
// Haar measure on N_p is Lebesgue measure dX dA in exponential coordinates
// with respect to the orthonormal bases X_i of V and X_{i,j} of Z. All
// constants below are relative to that choice.

#include "nilsphere/canonical.hpp"
#include "nilsphere/haar.hpp"
#include "nilsphere/lie.hpp"
#include "nilsphere/sublaplacian.hpp"

#include <optional>
#include <span>
#include <vector>

namespace nilsphere {

/// Density of eta without the constant c: prod_{j<k} (l_j^2 - l_k^2)^2, times
/// prod_i l_i^2 when p is odd. Returns 0 on the boundary (ties or zeros).
/// Throws DomainError unless lambda is nonincreasing with floor(p/2) entries >= 0.
double eta_density(std::span<const double> lambda, int p);

/// eta_density times prod_i lambda_i.
double eta_prime_density(std::span<const double> lambda, int p);

/// The normalising constant c(p) of the Plancherel measure as stated in the
/// literature formula: (2 pi)^{-p(p-1)/2 + p'} for even p and
/// 2 (2 pi)^{-p(p-1)/2 + p' - 1} for odd p.
double plancherel_constant(int p);

/// Closed-form polar constant where it is known (p = 2: 2, p = 3: 4 pi).
std::optional<double> polar_constant_reference(int p);

/// A centred Gaussian on A_p, g(A) = exp(-1/2 sum_{i<j} w_ij a_ij^2 / s^2)
/// in the coordinates of the orthonormal basis X_{i,j}.
struct ZGaussian {
  std::vector<double> weights;  ///< one per X_{i,j}, lexicographic
  double width = 1.0;

  static ZGaussian isotropic(int p, double width);
  double operator()(std::span<const double> coords) const;
  /// Exact integral over A_p.
  double integral() const;
};

struct PolarFit {
  double lhs = 0.0;      ///< integral over A_p by tensor Gauss-Hermite
  double rhs = 0.0;      ///< K-average of the Lambda-integral, without c
  double rhs_se = 0.0;
  double ratio = 0.0;    ///< lhs / (c rhs)
  double ratio_se = 0.0;
};

struct CalibrationResult {
  int p = 0;
  double c = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  bool deterministic = false;
  std::vector<PolarFit> fit;
  std::vector<PolarFit> held_out;
};

/// Default fitting family: isotropic and anisotropic Gaussians.
std::vector<ZGaussian> calibration_family(int p);
/// Default held-out family (five functions not used in the fit).
std::vector<ZGaussian> held_out_family(int p);

/// Least-squares estimate c = sum L_j R_j / sum R_j^2 over the family, where
/// L_j is the tensor Gauss-Hermite integral of g_j over A_p and R_j the
/// Lambda-quadrature of g_j(k.D2(Lambda)) d eta averaged over K (exact rule for
/// p = 2, Monte Carlo otherwise). The standard error is propagated linearly
/// from the per-sample covariance. Throws BudgetError if the relative SE
/// exceeds 5%.
CalibrationResult calibrate_c(int p, std::uint64_t seed, std::size_t n_samples,
                              const std::vector<ZGaussian>& family, const std::vector<ZGaussian>& held_out = {});
CalibrationResult calibrate_c(int p, std::uint64_t seed, std::size_t n_samples);

/// Tensor Gauss-Hermite grid over exponential coordinates: nodes per axis,
/// with separate scales for the V and Z axes.
struct TensorGrid {
  int nodes = 48;
  double scale_x = 1.0;
  double scale_a = 1.0;
};

/// Polar grid for radial functions at p = 2: Gauss-Legendre in rho = |X| on
/// [0, rho_max] and in a on [0, a_max] (the function is even in a).
struct PolarGrid {
  int rho_nodes = 200;
  double rho_max = 12.0;
  int a_nodes = 400;
  double a_max = 12.0;
};

/// int_N psi(n) conj(phi(n)) dn on a tensor grid. phi comes from the closed
/// form at p = 2 and from `phi` with `integ` otherwise. Throws BudgetError when
/// the grid times the per-point cost exceeds the budget.
Complex spherical_coefficient(const GroupFn& psi, const SphericalIndex& idx, const TensorGrid& grid,
                              const std::optional<Integrator>& integ = std::nullopt);

/// All coefficients <psi, phi^{0,(lambda),l}>, l = 0..count-1, at p = 2 for an
/// O_2-invariant psi, on a polar grid.
class PolarCoefficients {
 public:
  PolarCoefficients(const GroupFn& psi, const PolarGrid& grid);
  std::vector<Complex> operator()(double lambda, std::size_t count) const;

 private:
  PolarGrid grid_;
  std::vector<double> rho_, rho_w_, a_, a_w_;
  std::vector<Complex> table_;  ///< psi(rho_i, a_j), row-major in rho
};

/// ||psi||^2 = int |psi|^2 dX dA on a tensor Gauss-Hermite grid.
double l2_norm_squared(const GroupFn& psi, int p, const TensorGrid& grid);

struct RadialMeasure {
  int p = 2;
  double c_polar = 2.0;
  double c_p = 1.0;
  PolarGrid polar;
  TensorGrid tensor;
  /// l-sum stops once a term falls below this fraction of the partial sum.
  double l_tail = 1e-6;
  std::size_t l_max = 1u << 18;
  /// On [0, lambda_min] the integrand is replaced by its value at lambda_min
  /// (it has a finite limit at 0 but needs ever more l terms there).
  double lambda_min = 1e-3;
  /// Lambda_max: first lambda on a 0.25 grid beyond which two consecutive
  /// integrand values fall below lambda_tail times the running maximum.
  double lambda_tail = 1e-13;
  /// Relative tolerance of the adaptive Lambda-integration; the truncated
  /// l-sum makes the integrand only piecewise smooth at the 1e-6 level.
  double rel_tol = 1e-7;
  int max_depth = 12;
  /// Present iff p is odd (tau is Lebesgue measure in r then).
  std::optional<PolarGrid> r_grid;

  static RadialMeasure for_p(int p);
};

struct PlancherelResult {
  double lhs = 0.0;
  double rhs = 0.0;
  std::optional<double> ratio;  ///< absent when lhs = rhs = 0
  double lambda_max = 0.0;
  std::size_t max_l_terms = 0;
  /// c(p) lhs / rhs: the value of c(p) that would make the identity exact.
  std::optional<double> measured_c_p;
  bool agrees_with_c_p = false;  ///< measured within 1% of c(p)
};

/// lhs = ||psi||^2; rhs = c(p) sum_l int |<psi, phi^{0,(lambda),l}>|^2 d eta'(lambda)
/// with d eta' = c_polar lambda d lambda. p = 2 only. Throws DomainError when psi
/// does not decay to the edges of the grids.
PlancherelResult radial_plancherel_check(const GroupFn& psi, const RadialMeasure& measure);

}  // namespace nilsphere
