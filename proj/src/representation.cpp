#include "nilsphere/representation.hpp"

#include "nilsphere/errors.hpp"
#include "nilsphere/kernels.hpp"
#include "nilsphere/quadrature.hpp"
#include "nilsphere/special.hpp"

#include <algorithm>
#include <cmath>

namespace nilsphere {
namespace {

void compositions(int total, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int first = total; first >= 0; --first) {
    cur.push_back(first);
    compositions(total - first, parts - 1, cur, out);
    cur.pop_back();
  }
}

void require_nonzero(const LambdaSpec& lambda) {
  if (lambda.is_zero()) throw DomainError("representation: Lambda must be nonzero");
}

// int e^{i c y} h_k(y + s) h_k(y) dy with y = t - s/2, so both Hermite factors
// share the Gaussian e^{-t^2 - s^2/4}.
struct Overlap {
  const QuadratureRule* rule;
  std::vector<double> args, vals;

  explicit Overlap(const QuadratureRule& r) : rule(&r), args(2 * r.nodes.size()), vals(2 * r.nodes.size()) {}

  Complex operator()(int k, double s, double c) {
    const std::size_t n = rule->nodes.size();
    for (std::size_t q = 0; q < n; ++q) {
      args[q] = rule->nodes[q] + 0.5 * s;
      args[n + q] = rule->nodes[q] - 0.5 * s;
    }
    kernels::hermite_scaled_batch(k, args, vals);
    double re = 0.0, im = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
      const double v = rule->weights[q] * vals[q] * vals[n + q];
      const double ang = c * rule->nodes[q];
      re += v * std::cos(ang);
      im += v * std::sin(ang);
    }
    return std::polar(std::exp(-0.25 * s * s), -0.5 * c * s) * Complex(re, im);
  }
};

// Matrix element from the already-transformed point (x, central phase).
Complex element_core(const LambdaSpec& lambda, int p0, const MultiIndex& alpha, const double* x, double phase,
                     Overlap& overlap) {
  Complex v = std::polar(1.0, phase);
  for (int i = 0; i < p0; ++i) {
    const double sl = std::sqrt(lambda[i]);
    const double xo = x[2 * i], xe = x[2 * i + 1];
    const Complex o = overlap(alpha[static_cast<std::size_t>(i)], sl * xo, -sl * xe);
    v *= std::polar(1.0, -0.5 * lambda[i] * xe * xo) * o;
  }
  return v;
}

void check_alpha(const MultiIndex& alpha, int p0) {
  if (static_cast<int>(alpha.size()) != p0) throw DimensionError("representation: alpha must have p0 entries");
  for (int a : alpha)
    if (a < 0) throw DomainError("representation: alpha entries must be >= 0");
}

}  // namespace

std::vector<MultiIndex> enumerate_El(std::span<const int> l, const OrbitProfile& profile) {
  if (static_cast<int>(l.size()) != profile.p1) throw DimensionError("enumerate_El: l must have p1 entries");
  std::vector<MultiIndex> result{MultiIndex{}};
  for (int j = 0; j < profile.p1; ++j) {
    const std::size_t js = static_cast<std::size_t>(j);
    if (l[js] < 0) throw DomainError("enumerate_El: l entries must be >= 0");
    std::vector<std::vector<int>> block;
    std::vector<int> cur;
    compositions(l[js], profile.m[js], cur, block);
    std::vector<MultiIndex> next;
    for (const auto& head : result)
      for (const auto& tail : block) {
        MultiIndex a = head;
        a.insert(a.end(), tail.begin(), tail.end());
        next.push_back(std::move(a));
      }
    result = std::move(next);
  }
  return result;
}

double zeta_eval(const MultiIndex& alpha, std::span<const double> y) { return hermite_multi(alpha, y); }

StateFn pi_apply(double r, const LambdaSpec& lambda, const GroupPoint& n, StateFn f) {
  require_nonzero(lambda);
  if (n.dim() != lambda.p()) throw DimensionError("pi_apply: point dimension does not match p");
  const OrbitProfile prof = orbit_profile(lambda);
  const int p = lambda.p();
  const double central = z_inner(d2_matrix(lambda), n.a) + r * n.x[p - 1];
  std::vector<double> sl(static_cast<std::size_t>(prof.p0)), xo(sl.size()), xe(sl.size());
  double fixed = central;
  for (int i = 0; i < prof.p0; ++i) {
    const std::size_t is = static_cast<std::size_t>(i);
    sl[is] = std::sqrt(lambda[i]);
    xo[is] = n.x[2 * i];
    xe[is] = n.x[2 * i + 1];
    fixed -= 0.5 * lambda[i] * xe[is] * xo[is];
  }
  return [sl, xo, xe, fixed, f = std::move(f)](std::span<const double> y) -> Complex {
    if (y.size() != sl.size()) throw DimensionError("pi_apply: argument must have p0 entries");
    std::vector<double> shifted(y.size());
    double ph = fixed;
    for (std::size_t i = 0; i < y.size(); ++i) {
      ph -= sl[i] * xe[i] * y[i];
      shifted[i] = y[i] + sl[i] * xo[i];
    }
    return std::polar(1.0, ph) * f(shifted);
  };
}

Complex tensor_inner(const StateFn& f, const StateFn& g, int dim, int nodes) {
  if (dim < 1) throw DimensionError("tensor_inner: dim must be >= 1");
  const QuadratureRule& rule = gauss_hermite(nodes);
  std::size_t total = 1;
  for (int d = 0; d < dim; ++d) {
    total *= static_cast<std::size_t>(nodes);
    if (total > kMaxTensorNodes) throw BudgetError("tensor_inner: tensor grid exceeds the node budget");
  }
  std::vector<double> y(static_cast<std::size_t>(dim));
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  Complex sum{0.0, 0.0};
  for (std::size_t t = 0; t < total; ++t) {
    double w = 1.0;
    for (int d = 0; d < dim; ++d) {
      const double node = rule.nodes[static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])];
      y[static_cast<std::size_t>(d)] = node;
      w *= rule.weights[static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])] * std::exp(node * node);
    }
    sum += w * f(y) * std::conj(g(y));
    for (int d = 0; d < dim; ++d) {
      if (++idx[static_cast<std::size_t>(d)] < nodes) break;
      idx[static_cast<std::size_t>(d)] = 0;
    }
  }
  return sum;
}

Complex matrix_element(double r, const LambdaSpec& lambda, const MultiIndex& alpha, const GroupPoint& n, int nodes) {
  require_nonzero(lambda);
  if (n.dim() != lambda.p()) throw DimensionError("matrix_element: point dimension does not match p");
  const OrbitProfile prof = orbit_profile(lambda);
  if (prof.p0 > kMaxMatrixElementP0) throw BudgetError("matrix_element: p0 exceeds the quadrature budget");
  check_alpha(alpha, prof.p0);
  const int p = lambda.p();
  Overlap overlap(gauss_hermite(nodes));
  const double phase = z_inner(d2_matrix(lambda), n.a) + r * n.x[p - 1];
  return element_core(lambda, prof.p0, alpha, n.x.coords().data(), phase, overlap);
}

BatchIntegrand matrix_element_integrand(const SphericalIndex& idx, const MultiIndex& alpha, const GroupPoint& n,
                                        int nodes) {
  const LambdaSpec& lambda = idx.lambda();
  require_nonzero(lambda);
  if (n.dim() != idx.p()) throw DimensionError("matrix_element: point dimension does not match p");
  const int p0 = idx.profile().p0;
  if (p0 > kMaxMatrixElementP0) throw BudgetError("matrix_element: p0 exceeds the quadrature budget");
  check_alpha(alpha, p0);
  const QuadratureRule& rule = gauss_hermite(nodes);
  return [lambda, p0, alpha, &rule, r = idx.r(), x = n.x.coords(), a = n.a.matrix()](
             const double* ks, std::size_t count, Complex* out) {
    const int p = lambda.p();
    const std::size_t pp = static_cast<std::size_t>(p * p);
    Overlap overlap(rule);
    Vector kx(p);
    Matrix ka(p, p);
    for (std::size_t s = 0; s < count; ++s) {
      Eigen::Map<const Matrix> k(ks + s * pp, p, p);
      kx.noalias() = k * x;
      ka.noalias() = k * a;
      double phase = r * kx[p - 1];
      for (int i = 0; i < p0; ++i) phase += lambda[i] * ka.row(2 * i).dot(k.row(2 * i + 1));
      out[s] = element_core(lambda, p0, alpha, kx.data(), phase, overlap);
    }
  };
}

MCEstimate phi_via_rep(const SphericalIndex& idx, const GroupPoint& n, const Integrator& integ, int nodes,
                       std::optional<MultiIndex> alpha) {
  if (idx.bessel_family()) throw DomainError("phi_via_rep: Lambda must be nonzero");
  if (idx.kind() != GroupKind::O) throw DomainError("phi_via_rep: only the O_p family is supported");
  if (integrator_dim(integ) != idx.p() || integrator_kind(integ) != idx.kind())
    throw DomainError("phi_via_rep: integrator does not match the index");
  const auto all = enumerate_El(idx.l(), idx.profile());
  if (alpha && std::find(all.begin(), all.end(), *alpha) == all.end())
    throw DomainError("phi_via_rep: alpha is not in E_l");
  const MultiIndex a = alpha ? *alpha : all.front();
  return k_average(matrix_element_integrand(idx, a, n, nodes), integ);
}

double sublap_eigenvalue(const SphericalIndex& idx) {
  const OrbitProfile& prof = idx.profile();
  double v = idx.r() * idx.r();
  for (int j = 0; j < prof.p1; ++j) {
    const std::size_t js = static_cast<std::size_t>(j);
    v += prof.mu[js] * (2.0 * idx.l()[js] + prof.m[js]);
  }
  return v;
}

}  // namespace nilsphere
