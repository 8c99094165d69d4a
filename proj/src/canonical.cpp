#include "nilsphere/canonical.hpp"

#include "nilsphere/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace nilsphere {

LambdaSpec::LambdaSpec(int p, std::vector<double> values) : p_(p), values_(std::move(values)) {
  if (p < 1) throw DimensionError("LambdaSpec: p must be >= 1");
  if (static_cast<int>(values_.size()) != p / 2) {
    throw DimensionError("LambdaSpec: expected floor(p/2) = " + std::to_string(p / 2) + " values, got " +
                         std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] < 0.0) throw DomainError("LambdaSpec: values must be finite and >= 0");
    if (i > 0 && values_[i] > values_[i - 1]) throw DomainError("LambdaSpec: values must be nonincreasing");
  }
}

LambdaSpec LambdaSpec::zero(int p) { return LambdaSpec(p, std::vector<double>(static_cast<std::size_t>(p / 2), 0.0)); }

bool LambdaSpec::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

double LambdaSpec::norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s);
}

OrbitProfile orbit_profile(const LambdaSpec& lambda) {
  OrbitProfile prof;
  prof.p = lambda.p();
  prof.m_cum.push_back(0);
  for (double v : lambda.values()) {
    if (v == 0.0) break;
    ++prof.p0;
    if (prof.mu.empty() || prof.mu.back() != v) {
      prof.mu.push_back(v);
      prof.m.push_back(1);
    } else {
      ++prof.m.back();
    }
  }
  prof.p1 = static_cast<int>(prof.mu.size());
  for (int mj : prof.m) prof.m_cum.push_back(prof.m_cum.back() + mj);
  return prof;
}

LambdaSpec cluster_lambda(const LambdaSpec& lambda, double rel_tol) {
  std::vector<double> v = lambda.values();
  if (v.empty()) return lambda;
  const double scale = v.front();
  if (scale == 0.0) return lambda;
  for (double& x : v)
    if (x <= rel_tol * scale) x = 0.0;
  // Runs of values within rel_tol of the run head share the run mean.
  std::size_t i = 0;
  while (i < v.size() && v[i] != 0.0) {
    std::size_t j = i + 1;
    while (j < v.size() && v[j] != 0.0 && v[i] - v[j] <= rel_tol * v[i]) ++j;
    const double mean = std::accumulate(v.begin() + static_cast<std::ptrdiff_t>(i),
                                        v.begin() + static_cast<std::ptrdiff_t>(j), 0.0) /
                        static_cast<double>(j - i);
    std::fill(v.begin() + static_cast<std::ptrdiff_t>(i), v.begin() + static_cast<std::ptrdiff_t>(j), mean);
    i = j;
  }
  return LambdaSpec(lambda.p(), std::move(v));
}

SphericalIndex::SphericalIndex(double r, LambdaSpec lambda, std::vector<int> l, GroupKind kind,
                               std::optional<int> epsilon)
    : r_(r), lambda_(std::move(lambda)), l_(std::move(l)), kind_(kind), epsilon_(epsilon) {
  profile_ = orbit_profile(lambda_);
  if (!std::isfinite(r_) || r_ < 0.0) throw DomainError("SphericalIndex: r must be >= 0");
  if (2 * profile_.p0 == p() && r_ != 0.0) throw DomainError("SphericalIndex: r must be 0 when 2 p0 = p");
  if (lambda_.is_zero()) {
    if (!l_.empty()) throw DomainError("SphericalIndex: l must be empty when Lambda = 0");
  } else {
    if (static_cast<int>(l_.size()) != profile_.p1) {
      throw DomainError("SphericalIndex: l must have p1 = " + std::to_string(profile_.p1) + " entries");
    }
    if (std::any_of(l_.begin(), l_.end(), [](int v) { return v < 0; })) {
      throw DomainError("SphericalIndex: l entries must be >= 0");
    }
  }
  if (kind_ == GroupKind::SO) {
    if (!epsilon_ || (*epsilon_ != 1 && *epsilon_ != -1)) {
      throw DomainError("SphericalIndex: epsilon = +1 or -1 required for SO_p");
    }
  } else if (epsilon_) {
    throw DomainError("SphericalIndex: epsilon must be absent for O_p");
  }
}

ZSkew d2_matrix(const LambdaSpec& lambda, std::optional<int> epsilon) {
  const int p = lambda.p();
  const int half = lambda.half_dim();
  Matrix d = Matrix::Zero(p, p);
  for (int i = 0; i < half; ++i) {
    double v = lambda[i];
    if (epsilon && i == half - 1) v *= static_cast<double>(*epsilon);
    d(2 * i, 2 * i + 1) = v;
    d(2 * i + 1, 2 * i) = -v;
  }
  return ZSkew(d);
}

CanonicalForm canonical_form(const ZSkew& a) {
  const int p = a.dim();
  const Matrix& am = a.matrix();
  const double anorm = am.cwiseAbs().maxCoeff();
  if (anorm == 0.0) return CanonicalForm{Matrix::Identity(p, p), LambdaSpec::zero(p)};

  // -a^2 = a^T a is symmetric PSD with eigenvalues lambda_i^2 (each twice) and 0.
  // Deflation: take the top eigenvector u of the projected matrix, pair it
  // with v = -a u / |a u| (so that u^T a v = |a u|), project both out, repeat.
  const Matrix s = am.transpose() * am;
  std::vector<Vector> basis;
  basis.reserve(static_cast<std::size_t>(p));
  auto orthogonalise = [&basis](Vector v) {
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& b : basis) v -= b.dot(v) * b;
    return v;
  };
  auto projector = [&basis, p]() {
    Matrix proj = Matrix::Identity(p, p);
    for (const Vector& b : basis) proj -= b * b.transpose();
    return proj;
  };

  struct Pair {
    double lambda;
    Vector u, v;
  };
  std::vector<Pair> pairs;
  const double zero_cut = kKernelThreshold * anorm;
  while (static_cast<int>(pairs.size()) < p / 2) {
    const Matrix proj = projector();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(Matrix(proj * s * proj));
    Vector u = orthogonalise(eig.eigenvectors().col(p - 1));
    u.normalize();
    const Vector au = am * u;
    const double lam = au.norm();
    if (lam <= zero_cut) break;
    Vector v = orthogonalise(Vector(-au / lam));
    v.normalize();
    basis.push_back(u);
    basis.push_back(v);
    pairs.push_back({lam, u, v});
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.lambda > y.lambda; });

  // Kernel directions complete the basis.
  std::vector<Vector> kernel;
  while (static_cast<int>(basis.size()) < p) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(projector());
    Vector u = orthogonalise(eig.eigenvectors().col(p - 1));
    u.normalize();
    basis.push_back(u);
    kernel.push_back(u);
  }

  Matrix k(p, p);
  std::vector<double> lambdas(static_cast<std::size_t>(p / 2), 0.0);
  int row = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    k.row(row++) = pairs[i].u.transpose();
    k.row(row++) = pairs[i].v.transpose();
  }
  for (const Vector& u : kernel) k.row(row++) = u.transpose();

  // lambda_i read back from the conjugated matrix.
  const Matrix d = k * am * k.transpose();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const int r0 = static_cast<int>(2 * i);
    lambdas[i] = std::max(0.0, 0.5 * (d(r0, r0 + 1) - d(r0 + 1, r0)));
  }
  for (std::size_t i = 1; i < lambdas.size(); ++i) lambdas[i] = std::min(lambdas[i], lambdas[i - 1]);
  return CanonicalForm{std::move(k), LambdaSpec(p, std::move(lambdas))};
}

OrbitInvariants orbit_invariants(const VVector& xstar, const ZSkew& astar) {
  if (xstar.dim() != astar.dim()) throw DimensionError("orbit_invariants: dimension mismatch");
  const int p = xstar.dim();
  LambdaSpec lambda = canonical_form(astar).lambda;
  const Matrix& am = astar.matrix();
  if (am.cwiseAbs().maxCoeff() == 0.0) return OrbitInvariants{xstar.norm(), std::move(lambda)};

  Eigen::JacobiSVD<Matrix> svd(am, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = kKernelThreshold * sv[0];
  Vector proj = Vector::Zero(p);
  for (int i = 0; i < p; ++i) {
    if (sv[i] <= cut) {
      const Vector vi = svd.matrixV().col(i);
      proj += vi.dot(xstar.coords()) * vi;
    }
  }
  return OrbitInvariants{proj.norm(), std::move(lambda)};
}

std::vector<double> pr_norms(const VVector& x, const OrbitProfile& profile) {
  if (x.dim() != profile.p) throw DimensionError("pr_norms: dimension mismatch");
  std::vector<double> out(static_cast<std::size_t>(profile.p1), 0.0);
  for (int j = 0; j < profile.p1; ++j) {
    double s = 0.0;
    for (int i = profile.m_cum[static_cast<std::size_t>(j)]; i < profile.m_cum[static_cast<std::size_t>(j) + 1]; ++i) {
      s += x[2 * i] * x[2 * i] + x[2 * i + 1] * x[2 * i + 1];
    }
    out[static_cast<std::size_t>(j)] = s;
  }
  return out;
}

}  // namespace nilsphere
