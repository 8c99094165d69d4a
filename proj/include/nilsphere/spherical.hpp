#pragma once

// Bounded spherical functions of (N_p, O_p) and (N_p, SO_p): the integrand
// Theta, its K-average phi, the Bessel family, and the Heisenberg spherical
// functions on H^{p0}.

#include "nilsphere/canonical.hpp"
#include "nilsphere/haar.hpp"
#include "nilsphere/lie.hpp"

#include <span>

namespace nilsphere {

/// e^{i r x_p} e^{i <D2^eps(Lambda), A>} prod_j L~_{l_j}^{m_j-1}(mu_j/2 |pr_j X|^2).
/// Throws DomainError when Lambda = 0.
Complex theta(const SphericalIndex& idx, const GroupPoint& n);

/// out[i] = theta(idx, k_i . n) for a batch of K samples.
BatchIntegrand theta_integrand(const SphericalIndex& idx, const GroupPoint& n);

/// J~_{(p-2)/2}(r |X|).
double phi_bessel(double r, const GroupPoint& n);

/// K-average of theta(idx, k.n). Lambda = 0 dispatches to phi_bessel (exact,
/// zero standard error).
MCEstimate phi(const SphericalIndex& idx, const GroupPoint& n, const Integrator& integ);

/// Closed form at p = 2 (r = 0): cos(lambda a) L~_l^0(lambda |X|^2 / 2) for O_2,
/// e^{-i eps lambda a} L~_l^0(...) for SO_2, where A = a X_{1,2}.
Complex phi_p2_closed_form(const SphericalIndex& idx, const GroupPoint& n);

/// omega_{lambda,l}(z, t) = e^{i lambda t} prod_j L~_{l_j}^{m_j-1}(|lambda|/2 sum_{block j} |z_i|^2).
Complex heis_spherical_laguerre(double lambda, std::span<const int> l, std::span<const int> m,
                                std::span<const Complex> z, double t);

/// omega_mu(z, t) = prod_j J~_{m_j-1}(mu_j (sum_{block j} |z_i|^2)^{1/2}).
double heis_spherical_bessel(std::span<const double> mu, std::span<const int> m, std::span<const Complex> z,
                             double t);

struct Residual {
  double value = 0.0;
  double std_error = 0.0;
};

/// |int_K phi(n1 . k.n2) dk - phi(n1) phi(n2)|. The outer average uses `outer`;
/// each phi uses `inner` (a MonteCarlo inner integrator is reseeded per outer
/// sample so the outer spread carries the inner noise).
Residual functional_equation_residual(const SphericalIndex& idx, const GroupPoint& n1, const GroupPoint& n2,
                                      const Integrator& outer, const Integrator& inner);

}  // namespace nilsphere
