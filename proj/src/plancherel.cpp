#include "nilsphere/plancherel.hpp"

#include "nilsphere/errors.hpp"
#include "nilsphere/kernels.hpp"
#include "nilsphere/parallel.hpp"
#include "nilsphere/quadrature.hpp"
#include "nilsphere/special.hpp"
#include "nilsphere/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nilsphere {
namespace {

constexpr double kMaxRelativeSe = 0.05;
constexpr double kTensorBudget = 5e8;

// Symmetric Vandermonde-type density; no ordering requirement.
double raw_eta(const double* lambda, int half, int p) {
  double v = 1.0;
  for (int j = 0; j < half; ++j)
    for (int k = j + 1; k < half; ++k) {
      const double d = lambda[j] * lambda[j] - lambda[k] * lambda[k];
      v *= d * d;
    }
  if (p % 2 == 1)
    for (int i = 0; i < half; ++i) v *= lambda[i] * lambda[i];
  return v;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Mean vector and covariance accumulator (Chan et al. merge).
struct VecWelford {
  std::size_t n = 0;
  Vector mean;
  Matrix m2;

  explicit VecWelford(int dim) : mean(Vector::Zero(dim)), m2(Matrix::Zero(dim, dim)) {}

  void add(const Vector& x) {
    ++n;
    const Vector d = x - mean;
    mean += d / static_cast<double>(n);
    m2.noalias() += d * (x - mean).transpose();
  }

  void merge(const VecWelford& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n), nb = static_cast<double>(o.n), nt = na + nb;
    const Vector delta = o.mean - mean;
    mean += delta * (nb / nt);
    m2 += o.m2 + delta * delta.transpose() * (na * nb / nt);
    n += o.n;
  }
};

// Tensor Gauss-Hermite over R^dim with per-axis scales: int f = sum W f(x).
template <class F>
void tensor_hermite(int dim, int nodes, std::span<const double> scales, F&& visit) {
  const QuadratureRule& rule = gauss_hermite(nodes);
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  std::vector<double> x(static_cast<std::size_t>(dim));
  std::size_t total = 1;
  for (int d = 0; d < dim; ++d) total *= static_cast<std::size_t>(nodes);
  for (std::size_t t = 0; t < total; ++t) {
    double w = 1.0;
    for (int d = 0; d < dim; ++d) {
      const std::size_t ds = static_cast<std::size_t>(d);
      const std::size_t q = static_cast<std::size_t>(idx[ds]);
      const double node = rule.nodes[q];
      x[ds] = scales[ds] * node;
      w *= scales[ds] * rule.weights[q] * std::exp(node * node);
    }
    visit(std::span<const double>(x), w);
    for (int d = 0; d < dim; ++d) {
      const std::size_t ds = static_cast<std::size_t>(d);
      if (++idx[ds] < nodes) break;
      idx[ds] = 0;
    }
  }
}

double tensor_cost(int dim, int nodes) { return std::pow(static_cast<double>(nodes), dim); }

std::vector<double> grid_scales(int p, const TensorGrid& grid) {
  std::vector<double> s(static_cast<std::size_t>(p), grid.scale_x);
  s.resize(static_cast<std::size_t>(p + centre_dim(p)), grid.scale_a);
  return s;
}

}  // namespace

double eta_density(std::span<const double> lambda, int p) {
  if (p < 1) throw DimensionError("eta_density: p must be >= 1");
  const int half = p / 2;
  if (static_cast<int>(lambda.size()) != half) throw DimensionError("eta_density: expected floor(p/2) values");
  for (int i = 0; i < half; ++i) {
    if (!(lambda[static_cast<std::size_t>(i)] >= 0.0)) throw DomainError("eta_density: values must be >= 0");
    if (i > 0 && lambda[static_cast<std::size_t>(i)] > lambda[static_cast<std::size_t>(i - 1)])
      throw DomainError("eta_density: values must be nonincreasing");
  }
  for (int i = 0; i < half; ++i) {
    if (lambda[static_cast<std::size_t>(i)] == 0.0) return 0.0;
    if (i > 0 && lambda[static_cast<std::size_t>(i)] == lambda[static_cast<std::size_t>(i - 1)]) return 0.0;
  }
  return raw_eta(lambda.data(), half, p);
}

double eta_prime_density(std::span<const double> lambda, int p) {
  double v = eta_density(lambda, p);
  for (double l : lambda) v *= l;
  return v;
}

double plancherel_constant(int p) {
  if (p < 2) throw DomainError("plancherel_constant: p must be >= 2");
  const int half = p / 2;
  const double two_pi = 2.0 * std::numbers::pi;
  if (p % 2 == 0) return std::pow(two_pi, -centre_dim(p) + half);
  return 2.0 * std::pow(two_pi, -centre_dim(p) + half - 1);
}

std::optional<double> polar_constant_reference(int p) {
  if (p == 2) return 2.0;
  if (p == 3) return 4.0 * std::numbers::pi;
  return std::nullopt;
}

ZGaussian ZGaussian::isotropic(int p, double width) {
  return ZGaussian{std::vector<double>(static_cast<std::size_t>(centre_dim(p)), 1.0), width};
}

double ZGaussian::operator()(std::span<const double> coords) const {
  if (coords.size() != weights.size()) throw DimensionError("ZGaussian: dimension mismatch");
  double q = 0.0;
  for (std::size_t i = 0; i < coords.size(); ++i) q += weights[i] * coords[i] * coords[i];
  return std::exp(-0.5 * q / (width * width));
}

double ZGaussian::integral() const {
  double v = 1.0;
  for (double w : weights) v *= std::sqrt(2.0 * std::numbers::pi / w) * width;
  return v;
}

std::vector<ZGaussian> calibration_family(int p) {
  const std::size_t z = static_cast<std::size_t>(centre_dim(p));
  std::vector<ZGaussian> fam{ZGaussian::isotropic(p, 0.8), ZGaussian::isotropic(p, 1.3)};
  ZGaussian a{std::vector<double>(z), 1.0}, b{std::vector<double>(z), 0.9};
  for (std::size_t i = 0; i < z; ++i) {
    a.weights[i] = 1.0 + 0.5 * static_cast<double>(i % 3);
    b.weights[i] = 2.0 - 0.4 * static_cast<double>(i % 2);
  }
  fam.push_back(a);
  fam.push_back(b);
  return fam;
}

std::vector<ZGaussian> held_out_family(int p) {
  const std::size_t z = static_cast<std::size_t>(centre_dim(p));
  std::vector<ZGaussian> fam{ZGaussian::isotropic(p, 1.1), ZGaussian::isotropic(p, 0.7)};
  for (int v = 0; v < 3; ++v) {
    ZGaussian g{std::vector<double>(z), 0.85 + 0.2 * v};
    for (std::size_t i = 0; i < z; ++i) g.weights[i] = 1.0 + 0.3 * static_cast<double>((i + static_cast<std::size_t>(v)) % 4);
    fam.push_back(g);
  }
  return fam;
}

CalibrationResult calibrate_c(int p, std::uint64_t seed, std::size_t n_samples) {
  return calibrate_c(p, seed, n_samples, calibration_family(p), held_out_family(p));
}

CalibrationResult calibrate_c(int p, std::uint64_t seed, std::size_t n_samples, const std::vector<ZGaussian>& family,
                              const std::vector<ZGaussian>& held_out) {
  if (p < 2 || p > 6) throw DomainError("calibrate_c: p must be in [2, 6]");
  if (family.empty()) throw DomainError("calibrate_c: empty fitting family");
  const int z = centre_dim(p);
  const int half = p / 2;
  std::vector<ZGaussian> all = family;
  all.insert(all.end(), held_out.begin(), held_out.end());
  const int nf = static_cast<int>(all.size());
  const int nfit = static_cast<int>(family.size());
  for (const auto& g : all)
    if (static_cast<int>(g.weights.size()) != z) throw DimensionError("calibrate_c: Gaussian dimension mismatch");

  // Left-hand sides: tensor Gauss-Hermite on A_p, axes scaled to each Gaussian.
  const int gh_nodes = z <= 3 ? 8 : (z <= 6 ? 5 : 2);
  std::vector<double> lhs(static_cast<std::size_t>(nf));
  for (int f = 0; f < nf; ++f) {
    const auto& g = all[static_cast<std::size_t>(f)];
    std::vector<double> scales(static_cast<std::size_t>(z));
    for (int i = 0; i < z; ++i) scales[static_cast<std::size_t>(i)] = std::sqrt(2.0 / g.weights[static_cast<std::size_t>(i)]) * g.width;
    double s = 0.0;
    tensor_hermite(z, gh_nodes, scales, [&](std::span<const double> x, double w) { s += w * g(x); });
    lhs[static_cast<std::size_t>(f)] = s;
  }

  // Lambda grids: tensor Gauss-Legendre on [0, Lambda_max]^{p'} per function,
  // divided by p'! to undo the ordering.
  const int gl_nodes = half == 1 ? 32 : (half == 2 ? 20 : 10);
  struct LambdaGrid {
    std::vector<double> points;  // half entries per node
    std::vector<double> weights;
  };
  std::vector<LambdaGrid> grids(static_cast<std::size_t>(nf));
  for (int f = 0; f < nf; ++f) {
    const auto& g = all[static_cast<std::size_t>(f)];
    const double wmin = *std::min_element(g.weights.begin(), g.weights.end());
    const double lmax = g.width * std::sqrt(80.0 / wmin);
    const QuadratureRule rule = gauss_legendre_on(gl_nodes, 0.0, lmax);
    std::size_t total = 1;
    for (int i = 0; i < half; ++i) total *= static_cast<std::size_t>(gl_nodes);
    std::vector<int> idx(static_cast<std::size_t>(half), 0);
    auto& grid = grids[static_cast<std::size_t>(f)];
    std::vector<double> lam(static_cast<std::size_t>(half));
    for (std::size_t t = 0; t < total; ++t) {
      double w = 1.0 / factorial(half);
      for (int i = 0; i < half; ++i) {
        const std::size_t q = static_cast<std::size_t>(idx[static_cast<std::size_t>(i)]);
        lam[static_cast<std::size_t>(i)] = rule.nodes[q];
        w *= rule.weights[q];
      }
      w *= raw_eta(lam.data(), half, p);
      grid.points.insert(grid.points.end(), lam.begin(), lam.end());
      grid.weights.push_back(w);
      for (int i = 0; i < half; ++i) {
        if (++idx[static_cast<std::size_t>(i)] < gl_nodes) break;
        idx[static_cast<std::size_t>(i)] = 0;
      }
    }
  }

  // Per-sample right-hand sides.
  std::shared_ptr<const SampleSet> samples;
  if (p == 2) {
    samples = exact_samples(Exact{GroupKind::O, 2, 256});
  } else {
    if (n_samples < 2) throw DomainError("calibrate_c: need at least 2 samples");
    samples = draw_samples(GroupKind::O, p, n_samples, seed);
  }
  const std::size_t n = samples->size();
  const std::size_t shards = (n + kShardSize - 1) / kShardSize;
  std::vector<VecWelford> parts(shards, VecWelford(nf));
  parallel_for(shards, [&](std::size_t sh) {
    const std::size_t begin = sh * kShardSize, end = std::min(n, begin + kShardSize);
    const std::size_t pp = static_cast<std::size_t>(p * p);
    Matrix units(z, half);
    Vector r(nf);
    std::vector<double> coords(static_cast<std::size_t>(z));
    for (std::size_t s = begin; s < end; ++s) {
      Eigen::Map<const Matrix> k(samples->at(s), p, p);
      (void)pp;
      // Coordinates of k D2(e_b) k^T: entry (j, i) of c0 c1^T - c1 c0^T.
      for (int b = 0; b < half; ++b) {
        int col = 0;
        for (int i = 0; i < p; ++i)
          for (int j = i + 1; j < p; ++j)
            units(col++, b) = k(j, 2 * b) * k(i, 2 * b + 1) - k(j, 2 * b + 1) * k(i, 2 * b);
      }
      for (int f = 0; f < nf; ++f) {
        const auto& g = all[static_cast<std::size_t>(f)];
        const auto& grid = grids[static_cast<std::size_t>(f)];
        double acc = 0.0;
        for (std::size_t t = 0; t < grid.weights.size(); ++t) {
          const double* lam = grid.points.data() + t * static_cast<std::size_t>(half);
          for (int c = 0; c < z; ++c) {
            double v = 0.0;
            for (int b = 0; b < half; ++b) v += lam[b] * units(c, b);
            coords[static_cast<std::size_t>(c)] = v;
          }
          acc += grid.weights[t] * g(coords);
        }
        r[f] = acc;
      }
      parts[sh].add(r);
    }
  });
  VecWelford acc(nf);
  for (const auto& part : parts) acc.merge(part);
  const Vector rbar = acc.mean;
  const double nn = static_cast<double>(acc.n);
  const Matrix cov = (samples->deterministic || acc.n < 2) ? Matrix::Zero(nf, nf) : Matrix(acc.m2 / (nn - 1.0));

  double lr = 0.0, rr = 0.0;
  for (int f = 0; f < nfit; ++f) {
    lr += lhs[static_cast<std::size_t>(f)] * rbar[f];
    rr += rbar[f] * rbar[f];
  }
  CalibrationResult res;
  res.p = p;
  res.n_samples = n;
  res.deterministic = samples->deterministic;
  res.c = lr / rr;
  Vector grad = Vector::Zero(nf);
  for (int f = 0; f < nfit; ++f) grad[f] = (lhs[static_cast<std::size_t>(f)] - 2.0 * res.c * rbar[f]) / rr;
  res.std_error = std::sqrt(std::max(0.0, grad.dot(cov * grad)) / nn);
  if (res.std_error > kMaxRelativeSe * std::abs(res.c))
    throw BudgetError("calibrate_c: relative standard error above 5%; increase the sample count");

  for (int f = 0; f < nf; ++f) {
    PolarFit pf;
    pf.lhs = lhs[static_cast<std::size_t>(f)];
    pf.rhs = rbar[f];
    pf.rhs_se = std::sqrt(std::max(0.0, cov(f, f)) / nn);
    pf.ratio = pf.lhs / (res.c * pf.rhs);
    Vector v = -pf.ratio * grad / res.c;
    v[f] -= pf.ratio / pf.rhs;
    pf.ratio_se = std::sqrt(std::max(0.0, v.dot(cov * v)) / nn);
    (f < nfit ? res.fit : res.held_out).push_back(pf);
  }
  return res;
}

Complex spherical_coefficient(const GroupFn& psi, const SphericalIndex& idx, const TensorGrid& grid,
                              const std::optional<Integrator>& integ) {
  const int p = idx.p();
  const int dim = p + centre_dim(p);
  const bool closed = p == 2 && !idx.bessel_family();
  double per_point = 1.0;
  if (!closed && !idx.bessel_family()) {
    if (!integ) throw DomainError("spherical_coefficient: an integrator is required for p > 2");
    per_point = std::visit(
        [](const auto& i) -> double {
          using T = std::decay_t<decltype(i)>;
          if constexpr (std::is_same_v<T, MonteCarlo>)
            return static_cast<double>(i.samples);
          else if constexpr (std::is_same_v<T, Exact>)
            return 2.0 * i.rotations;
          else
            return static_cast<double>(i.samples->size());
        },
        *integ);
  }
  if (tensor_cost(dim, grid.nodes) * per_point > kTensorBudget)
    throw BudgetError("spherical_coefficient: grid exceeds the evaluation budget");
  const auto scales = grid_scales(p, grid);
  Complex sum{0.0, 0.0};
  tensor_hermite(dim, grid.nodes, scales, [&](std::span<const double> x, double w) {
    const GroupPoint n = GroupPoint::from_coords(p, x);
    const Complex f = psi(n);
    if (f == Complex{0.0, 0.0}) return;
    Complex ph;
    if (closed)
      ph = phi_p2_closed_form(idx, n);
    else if (idx.bessel_family())
      ph = phi_bessel(idx.r(), n);
    else
      ph = phi(idx, n, *integ).value;
    sum += w * f * std::conj(ph);
  });
  return sum;
}

double l2_norm_squared(const GroupFn& psi, int p, const TensorGrid& grid) {
  const int dim = p + centre_dim(p);
  if (tensor_cost(dim, grid.nodes) > kTensorBudget) throw BudgetError("l2_norm_squared: grid exceeds the budget");
  const auto scales = grid_scales(p, grid);
  double sum = 0.0;
  tensor_hermite(dim, grid.nodes, scales,
                 [&](std::span<const double> x, double w) { sum += w * std::norm(psi(GroupPoint::from_coords(p, x))); });
  return sum;
}

PolarCoefficients::PolarCoefficients(const GroupFn& psi, const PolarGrid& grid) : grid_(grid) {
  if (grid.rho_nodes < 1 || grid.a_nodes < 1 || !(grid.rho_max > 0.0) || !(grid.a_max > 0.0))
    throw DomainError("PolarCoefficients: invalid grid");
  const QuadratureRule rr = gauss_legendre_on(grid.rho_nodes, 0.0, grid.rho_max);
  const QuadratureRule ar = gauss_legendre_on(grid.a_nodes, 0.0, grid.a_max);
  rho_ = rr.nodes;
  a_ = ar.nodes;
  for (std::size_t i = 0; i < rho_.size(); ++i) rho_w_.push_back(2.0 * std::numbers::pi * rho_[i] * rr.weights[i]);
  for (std::size_t j = 0; j < a_.size(); ++j) a_w_.push_back(2.0 * ar.weights[j]);
  table_.resize(rho_.size() * a_.size());
  for (std::size_t i = 0; i < rho_.size(); ++i)
    for (std::size_t j = 0; j < a_.size(); ++j) {
      const GroupPoint n(VVector{rho_[i], 0.0}, ZSkew::basis(2, 0, 1) * a_[j]);
      table_[i * a_.size() + j] = psi(n);
    }
}

std::vector<Complex> PolarCoefficients::operator()(double lambda, std::size_t count) const {
  if (!(lambda > 0.0)) throw DomainError("PolarCoefficients: lambda must be positive");
  std::vector<double> cosv(a_.size());
  for (std::size_t j = 0; j < a_.size(); ++j) cosv[j] = a_w_[j] * std::cos(lambda * a_[j]);
  std::vector<double> u, wre, wim;
  for (std::size_t i = 0; i < rho_.size(); ++i) {
    const double ui = 0.5 * lambda * rho_[i] * rho_[i];
    // Nodes past the direct Laguerre range sit where psi has decayed.
    if (ui > kLaguerreDirectLimit) continue;
    Complex g{0.0, 0.0};
    const Complex* row = table_.data() + i * a_.size();
    for (std::size_t j = 0; j < a_.size(); ++j) g += cosv[j] * row[j];
    u.push_back(ui);
    wre.push_back(rho_w_[i] * g.real());
    wim.push_back(rho_w_[i] * g.imag());
  }
  std::vector<double> re(count), im(count);
  kernels::laguerre_weighted_sums(0.0, u, wre, re);
  kernels::laguerre_weighted_sums(0.0, u, wim, im);
  std::vector<Complex> out(count);
  for (std::size_t l = 0; l < count; ++l) out[l] = {re[l], im[l]};
  return out;
}

RadialMeasure RadialMeasure::for_p(int p) {
  RadialMeasure m;
  m.p = p;
  m.c_polar = polar_constant_reference(p).value_or(std::numeric_limits<double>::quiet_NaN());
  m.c_p = plancherel_constant(p);
  if (p % 2 == 1) m.r_grid = PolarGrid{};
  return m;
}

PlancherelResult radial_plancherel_check(const GroupFn& psi, const RadialMeasure& measure) {
  if (measure.p != 2) throw DomainError("radial_plancherel_check: only p = 2 is supported");
  if (!(measure.c_polar > 0.0)) throw DomainError("radial_plancherel_check: c_polar must be positive");
  PlancherelResult res;
  const PolarGrid& pg = measure.polar;
  auto at = [&](double rho, double a) { return std::abs(psi(GroupPoint(VVector{rho, 0.0}, ZSkew::basis(2, 0, 1) * a))); };
  double peak = 0.0;
  for (int i = 0; i <= 8; ++i)
    for (int j = 0; j <= 8; ++j) peak = std::max(peak, at(pg.rho_max * i / 16.0, pg.a_max * j / 16.0));
  const double edge = std::max({at(pg.rho_max, 0.0), at(0.0, pg.a_max), at(pg.rho_max, pg.a_max)});
  if (edge > 1e-10 * std::max(peak, 1e-300) && edge > 0.0)
    throw DomainError("radial_plancherel_check: psi does not decay within the polar grid");

  res.lhs = l2_norm_squared(psi, 2, measure.tensor);
  const PolarCoefficients coef(psi, pg);

  auto integrand = [&](double lambda) {
    if (lambda <= 0.0) return 0.0;
    std::size_t count = 32;
    for (;;) {
      const auto c = coef(lambda, count);
      double partial = 0.0;
      for (std::size_t l = 0; l < count; ++l) {
        const double term = std::norm(c[l]);
        if (l > 0 && term < measure.l_tail * partial) {
          res.max_l_terms = std::max(res.max_l_terms, l);
          return lambda * partial;
        }
        partial += term;
      }
      if (partial == 0.0) return 0.0;
      if (count >= measure.l_max) throw BudgetError("radial_plancherel_check: l-sum did not converge");
      count = std::min(measure.l_max, 4 * count);
    }
  };

  double fmax = 0.0, lambda = 0.0;
  int below = 0;
  while (below < 2) {
    lambda += 0.25;
    if (lambda > 400.0) throw DomainError("radial_plancherel_check: spherical transform does not decay in lambda");
    const double f = integrand(lambda);
    fmax = std::max(fmax, f);
    below = (f <= measure.lambda_tail * fmax) ? below + 1 : 0;
  }
  res.lambda_max = lambda;
  const double lo = std::min(measure.lambda_min, 0.5 * lambda);
  const AdaptiveResult integral =
      adaptive_gauss_legendre(integrand, lo, lambda, measure.rel_tol, 0.0, 16, measure.max_depth);
  res.rhs = measure.c_p * measure.c_polar * (integral.value + lo * integrand(lo));
  if (res.lhs != 0.0 || res.rhs != 0.0) {
    res.ratio = res.rhs / res.lhs;
    if (res.rhs != 0.0) {
      res.measured_c_p = measure.c_p * res.lhs / res.rhs;
      res.agrees_with_c_p = std::abs(*res.measured_c_p / measure.c_p - 1.0) <= 0.01;
    }
  }
  return res;
}

}  // namespace nilsphere
