#pragma once

// The Schrodinger-type representation Pi_{r,Lambda} of N_p on L^2(R^{p0}),
// its Hermite basis, and the matrix-element route to spherical functions.
//
// Sign convention. With [X, Y] = Y X^T - X Y^T the representation is
//
//   (Pi(n) f)(y) = exp(i [<D2(Lambda), A> + r x_p
//                         - sum_j (lambda_j/2 x_{2j} x_{2j-1} + sqrt(lambda_j) x_{2j} y_j)])
//                  f(y_1 + sqrt(lambda_1) x_1, ..., y_{p0} + sqrt(lambda_{p0}) x_{2 p0 - 1}),
//
// which satisfies Pi(n1) Pi(n2) = Pi(n1 n2). With a plus sign in front of the
// sum it does not.

#include "nilsphere/canonical.hpp"
#include "nilsphere/haar.hpp"
#include "nilsphere/lie.hpp"

#include <functional>
#include <span>
#include <vector>

namespace nilsphere {

/// Nodes per axis for matrix elements.
inline constexpr int kDefaultHermiteNodes = 64;
/// Largest p0 handled by matrix_element.
inline constexpr int kMaxMatrixElementP0 = 3;
/// Largest tensor grid (total nodes) for tensor_inner.
inline constexpr std::size_t kMaxTensorNodes = 4'000'000;

/// p0 entries, grouped into p1 blocks by an OrbitProfile.
using MultiIndex = std::vector<int>;

/// All alpha with block sums l_j, blocks in order, lexicographic (largest
/// first entry first) within the Cartesian product.
std::vector<MultiIndex> enumerate_El(std::span<const int> l, const OrbitProfile& profile);

/// prod_i h_{alpha_i}(y_i).
double zeta_eval(const MultiIndex& alpha, std::span<const double> y);

using StateFn = std::function<Complex(std::span<const double>)>;

/// Pi_{r,Lambda}(n) f, evaluated pointwise. Throws DomainError when Lambda = 0.
StateFn pi_apply(double r, const LambdaSpec& lambda, const GroupPoint& n, StateFn f);

/// <f, g> = int f conj(g) over R^dim by tensor Gauss-Hermite with
/// weight-compensated nodes. Throws BudgetError beyond kMaxTensorNodes.
Complex tensor_inner(const StateFn& f, const StateFn& g, int dim, int nodes = kDefaultHermiteNodes);

/// <Pi(n) zeta_alpha, zeta_alpha>, factorised into one-dimensional
/// Gauss-Hermite integrals centred between the shifted and unshifted
/// Hermite functions. Throws BudgetError for p0 > kMaxMatrixElementP0.
Complex matrix_element(double r, const LambdaSpec& lambda, const MultiIndex& alpha, const GroupPoint& n,
                       int nodes = kDefaultHermiteNodes);

/// out[i] = matrix_element(r, Lambda, alpha, k_i . n) for a batch of K samples.
BatchIntegrand matrix_element_integrand(const SphericalIndex& idx, const MultiIndex& alpha, const GroupPoint& n,
                                        int nodes = kDefaultHermiteNodes);

/// K-average of matrix_element over k.n, for alpha in E_l (default: the first
/// element of enumerate_El). Requires Lambda != 0 and group kind O.
MCEstimate phi_via_rep(const SphericalIndex& idx, const GroupPoint& n, const Integrator& integ,
                       int nodes = kDefaultHermiteNodes, std::optional<MultiIndex> alpha = std::nullopt);

/// sum_j mu_j (2 l_j + m_j) + r^2.
double sublap_eigenvalue(const SphericalIndex& idx);

}  // namespace nilsphere
