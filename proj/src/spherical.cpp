#include "nilsphere/spherical.hpp"

#include "nilsphere/errors.hpp"
#include "nilsphere/kernels.hpp"
#include "nilsphere/special.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace nilsphere {
namespace {

void check_point(const SphericalIndex& idx, const GroupPoint& n) {
  if (n.dim() != idx.p()) throw DimensionError("spherical: point dimension does not match p");
}

void check_integrator(const SphericalIndex& idx, const Integrator& integ) {
  if (integrator_dim(integ) != idx.p()) throw DimensionError("spherical: integrator dimension does not match p");
  if (integrator_kind(integ) != idx.kind()) throw DomainError("spherical: integrator group kind does not match index");
}

// Per-block Laguerre product evaluated from |pr_j X|^2.
struct LaguerreBlocks {
  const OrbitProfile* prof;
  const std::vector<int>* l;

  double eval(std::span<const double> pr) const {
    double v = 1.0;
    for (int j = 0; j < prof->p1; ++j) {
      const std::size_t js = static_cast<std::size_t>(j);
      v *= laguerre_norm((*l)[js], prof->m[js] - 1.0, 0.5 * prof->mu[js] * pr[js]);
    }
    return v;
  }
};

}  // namespace

Complex theta(const SphericalIndex& idx, const GroupPoint& n) {
  if (idx.bessel_family()) throw DomainError("theta: Lambda = 0 belongs to the Bessel family");
  check_point(idx, n);
  const int p = idx.p();
  const double phase = idx.r() * n.x[p - 1] + z_inner(d2_matrix(idx.lambda(), idx.epsilon()), n.a);
  const auto pr = pr_norms(n.x, idx.profile());
  const double lag = LaguerreBlocks{&idx.profile(), &idx.l()}.eval(pr);
  return std::polar(lag, phase);
}

BatchIntegrand theta_integrand(const SphericalIndex& idx, const GroupPoint& n) {
  if (idx.bessel_family()) throw DomainError("theta: Lambda = 0 belongs to the Bessel family");
  check_point(idx, n);
  const int p = idx.p();
  const OrbitProfile prof = idx.profile();
  // Signed lambda per 2x2 block: <D2^eps, M> = sum_i s_i M(2i, 2i+1) for skew M.
  std::vector<double> signed_lambda(static_cast<std::size_t>(p / 2));
  for (int i = 0; i < p / 2; ++i) {
    signed_lambda[static_cast<std::size_t>(i)] = idx.lambda()[i];
    if (idx.epsilon() && i == p / 2 - 1) signed_lambda[static_cast<std::size_t>(i)] *= *idx.epsilon();
  }
  return [p, prof, l = idx.l(), r = idx.r(), signed_lambda, x = n.x.coords(), a = n.a.matrix()](
             const double* ks, std::size_t count, Complex* out) {
    const std::size_t pp = static_cast<std::size_t>(p * p);
    const int blocks = static_cast<int>(signed_lambda.size());
    std::vector<double> phase(count);
    std::vector<double> pr(count * static_cast<std::size_t>(prof.p1));
    Vector kx(p);
    Matrix ka(p, p);
    for (std::size_t s = 0; s < count; ++s) {
      Eigen::Map<const Matrix> k(ks + s * pp, p, p);
      kx.noalias() = k * x;
      double ph = r * kx[p - 1];
      ka.noalias() = k * a;
      for (int i = 0; i < blocks; ++i) {
        const double lam = signed_lambda[static_cast<std::size_t>(i)];
        if (lam == 0.0) continue;
        // (k a k^T)(2i, 2i+1) = (k a)_{row 2i} . k_{row 2i+1}
        ph += lam * ka.row(2 * i).dot(k.row(2 * i + 1));
      }
      phase[s] = ph;
      for (int j = 0; j < prof.p1; ++j) {
        double v = 0.0;
        for (int i = prof.m_cum[static_cast<std::size_t>(j)]; i < prof.m_cum[static_cast<std::size_t>(j) + 1]; ++i)
          v += kx[2 * i] * kx[2 * i] + kx[2 * i + 1] * kx[2 * i + 1];
        pr[static_cast<std::size_t>(j) * count + s] = v;
      }
    }
    std::vector<double> lag(count, 1.0), u(count), tmp(count);
    for (int j = 0; j < prof.p1; ++j) {
      const std::size_t js = static_cast<std::size_t>(j);
      for (std::size_t s = 0; s < count; ++s) u[s] = 0.5 * prof.mu[js] * pr[js * count + s];
      kernels::laguerre_norm_batch(l[js], prof.m[js] - 1.0, u, tmp);
      for (std::size_t s = 0; s < count; ++s) lag[s] *= tmp[s];
    }
    for (std::size_t s = 0; s < count; ++s) out[s] = std::polar(lag[s], phase[s]);
  };
}

double phi_bessel(double r, const GroupPoint& n) {
  if (!(r >= 0.0)) throw DomainError("phi_bessel: r must be >= 0");
  const int p = n.dim();
  return bessel_reduced(0.5 * (p - 2), r * n.x.norm());
}

MCEstimate phi(const SphericalIndex& idx, const GroupPoint& n, const Integrator& integ) {
  check_point(idx, n);
  if (idx.bessel_family()) {
    MCEstimate est;
    est.value = phi_bessel(idx.r(), n);
    return est;
  }
  check_integrator(idx, integ);
  return k_average(theta_integrand(idx, n), integ);
}

Complex phi_p2_closed_form(const SphericalIndex& idx, const GroupPoint& n) {
  if (idx.p() != 2 || idx.bessel_family()) throw DomainError("phi_p2_closed_form: requires p = 2 and Lambda != 0");
  check_point(idx, n);
  const double lambda = idx.lambda()[0];
  const double a = n.a.matrix()(1, 0);
  const double lag = laguerre_norm(idx.l()[0], 0.0, 0.5 * lambda * n.x.coords().squaredNorm());
  if (idx.kind() == GroupKind::O) return {std::cos(lambda * a) * lag, 0.0};
  return std::polar(lag, -static_cast<double>(*idx.epsilon()) * lambda * a);
}

namespace {

std::vector<double> block_sums(std::span<const int> m, std::span<const Complex> z) {
  std::size_t total = 0;
  for (int mj : m) {
    if (mj < 1) throw DomainError("heis_spherical: multiplicities must be >= 1");
    total += static_cast<std::size_t>(mj);
  }
  if (total != z.size()) throw DimensionError("heis_spherical: sum of multiplicities must equal the length of z");
  std::vector<double> sums;
  std::size_t i = 0;
  for (int mj : m) {
    double s = 0.0;
    for (int q = 0; q < mj; ++q, ++i) s += std::norm(z[i]);
    sums.push_back(s);
  }
  return sums;
}

}  // namespace

Complex heis_spherical_laguerre(double lambda, std::span<const int> l, std::span<const int> m,
                                std::span<const Complex> z, double t) {
  if (lambda == 0.0) throw DomainError("heis_spherical_laguerre: lambda must be nonzero");
  if (l.size() != m.size()) throw DimensionError("heis_spherical_laguerre: l and m lengths differ");
  const auto sums = block_sums(m, z);
  double v = 1.0;
  for (std::size_t j = 0; j < sums.size(); ++j) v *= laguerre_norm(l[j], m[j] - 1.0, 0.5 * std::abs(lambda) * sums[j]);
  return std::polar(v, lambda * t);
}

double heis_spherical_bessel(std::span<const double> mu, std::span<const int> m, std::span<const Complex> z,
                             double /*t*/) {
  if (mu.size() != m.size()) throw DimensionError("heis_spherical_bessel: mu and m lengths differ");
  const auto sums = block_sums(m, z);
  double v = 1.0;
  for (std::size_t j = 0; j < sums.size(); ++j) {
    if (!(mu[j] > 0.0)) throw DomainError("heis_spherical_bessel: mu must be positive");
    v *= bessel_reduced(m[j] - 1.0, mu[j] * std::sqrt(sums[j]));
  }
  return v;
}

Residual functional_equation_residual(const SphericalIndex& idx, const GroupPoint& n1, const GroupPoint& n2,
                                      const Integrator& outer, const Integrator& inner) {
  check_point(idx, n1);
  check_point(idx, n2);
  const int p = idx.p();
  const MCEstimate f1 = phi(idx, n1, inner);
  const MCEstimate f2 = phi(idx, n2, inner);
  auto integrand = [&](const double* ks, std::size_t count, Complex* out) {
    const std::size_t pp = static_cast<std::size_t>(p * p);
    for (std::size_t s = 0; s < count; ++s) {
      Eigen::Map<const Matrix> k(ks + s * pp, p, p);
      const GroupPoint m = group_mul(n1, k_action(k, n2));
      Integrator in = inner;
      if (auto* mc = std::get_if<MonteCarlo>(&in))
        mc->seed = splitmix64(mc->seed ^ std::bit_cast<std::uint64_t>(ks[s * pp]) ^
                              splitmix64(std::bit_cast<std::uint64_t>(ks[s * pp + pp - 1])));
      out[s] = phi(idx, m, in).value;
    }
  };
  const MCEstimate lhs = k_average(BatchIntegrand(integrand), outer);
  Residual res;
  res.value = std::abs(lhs.value - f1.value * f2.value);
  const double rhs_se = std::abs(f2.value) * f1.std_error + std::abs(f1.value) * f2.std_error;
  res.std_error = std::sqrt(lhs.std_error * lhs.std_error + rhs_se * rhs_se);
  return res;
}

}  // namespace nilsphere
