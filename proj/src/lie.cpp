#include "nilsphere/lie.hpp"

#include "nilsphere/errors.hpp"

#include <cmath>
#include <string>

namespace nilsphere {
namespace {

void require_same_dim(int p, int q, const char* what) {
  if (p != q) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(p) +
                         " vs " + std::to_string(q) + ")");
  }
}

}  // namespace

VVector::VVector(Vector coords) : coords_(std::move(coords)) {
  if (coords_.size() < 1) throw DimensionError("VVector: p must be >= 1");
}

VVector::VVector(std::initializer_list<double> coords)
    : VVector(Vector(Eigen::Map<const Vector>(coords.begin(), static_cast<Eigen::Index>(coords.size())))) {}

VVector VVector::zero(int p) { return VVector(Vector::Zero(p)); }

VVector VVector::basis(int p, int i) {
  if (i < 0 || i >= p) throw DimensionError("VVector::basis: index out of range");
  Vector v = Vector::Zero(p);
  v[i] = 1.0;
  return VVector(std::move(v));
}

double VVector::dot(const VVector& other) const {
  require_same_dim(dim(), other.dim(), "VVector::dot");
  return coords_.dot(other.coords_);
}

VVector VVector::operator+(const VVector& o) const {
  require_same_dim(dim(), o.dim(), "VVector::operator+");
  return VVector(Vector(coords_ + o.coords_));
}

VVector VVector::operator-(const VVector& o) const {
  require_same_dim(dim(), o.dim(), "VVector::operator-");
  return VVector(Vector(coords_ - o.coords_));
}

ZSkew::ZSkew(const Matrix& mat) {
  if (mat.rows() != mat.cols()) throw DimensionError("ZSkew: matrix must be square");
  if (mat.rows() < 1) throw DimensionError("ZSkew: p must be >= 1");
  const double scale = std::max(1.0, mat.cwiseAbs().maxCoeff());
  const double asym = (mat + mat.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= kSkewTolerance * scale)) {
    throw DomainError("ZSkew: matrix is not skew-symmetric (|M + M^T| = " + std::to_string(asym) + ")");
  }
  mat_ = 0.5 * (mat - mat.transpose());
}

ZSkew ZSkew::zero(int p) {
  if (p < 1) throw DimensionError("ZSkew: p must be >= 1");
  return ZSkew(Matrix::Zero(p, p), Trusted{});
}

ZSkew ZSkew::basis(int p, int i, int j) {
  if (!(0 <= i && i < j && j < p)) throw DimensionError("ZSkew::basis: need 0 <= i < j < p");
  return bracket(VVector::basis(p, i), VVector::basis(p, j));
}

ZSkew ZSkew::from_coords(int p, std::span<const double> coords) {
  require_same_dim(static_cast<int>(coords.size()), centre_dim(p), "ZSkew::from_coords");
  Matrix m = Matrix::Zero(p, p);
  std::size_t idx = 0;
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j, ++idx) {
      m(j, i) += coords[idx];
      m(i, j) -= coords[idx];
    }
  }
  return ZSkew(std::move(m), Trusted{});
}

std::vector<double> ZSkew::coords() const {
  const int p = dim();
  std::vector<double> c;
  c.reserve(static_cast<std::size_t>(centre_dim(p)));
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) c.push_back(mat_(j, i));
  return c;
}

ZSkew ZSkew::operator+(const ZSkew& o) const {
  require_same_dim(dim(), o.dim(), "ZSkew::operator+");
  return ZSkew(Matrix(mat_ + o.mat_), Trusted{});
}

ZSkew ZSkew::operator-(const ZSkew& o) const {
  require_same_dim(dim(), o.dim(), "ZSkew::operator-");
  return ZSkew(Matrix(mat_ - o.mat_), Trusted{});
}

ZSkew ZSkew::operator-() const { return ZSkew(Matrix(-mat_), Trusted{}); }

ZSkew ZSkew::operator*(double s) const { return ZSkew(Matrix(mat_ * s), Trusted{}); }

GroupPoint::GroupPoint(VVector x_, ZSkew a_) : x(std::move(x_)), a(std::move(a_)) {
  require_same_dim(x.dim(), a.dim(), "GroupPoint");
}

GroupPoint GroupPoint::identity(int p) { return GroupPoint(VVector::zero(p), ZSkew::zero(p)); }

GroupPoint GroupPoint::from_coords(int p, std::span<const double> coords) {
  if (p < 1) throw DimensionError("GroupPoint: p must be >= 1");
  require_same_dim(static_cast<int>(coords.size()), p + centre_dim(p), "GroupPoint::from_coords");
  Vector x(p);
  for (int i = 0; i < p; ++i) x[i] = coords[static_cast<std::size_t>(i)];
  return GroupPoint(VVector(std::move(x)), ZSkew::from_coords(p, coords.subspan(static_cast<std::size_t>(p))));
}

std::vector<double> GroupPoint::coords() const {
  std::vector<double> c(x.coords().data(), x.coords().data() + x.dim());
  const auto ac = a.coords();
  c.insert(c.end(), ac.begin(), ac.end());
  return c;
}

GroupPoint GroupPoint::inverse() const { return GroupPoint(-x, -a); }

ZSkew bracket(const VVector& x, const VVector& y) {
  require_same_dim(x.dim(), y.dim(), "bracket");
  const Vector& u = x.coords();
  const Vector& v = y.coords();
  return ZSkew(Matrix(v * u.transpose() - u * v.transpose()), ZSkew::Trusted{});
}

double z_inner(const ZSkew& a, const ZSkew& b) {
  require_same_dim(a.dim(), b.dim(), "z_inner");
  return 0.5 * a.matrix().cwiseProduct(b.matrix()).sum();
}

GroupPoint group_mul(const GroupPoint& n1, const GroupPoint& n2) {
  require_same_dim(n1.dim(), n2.dim(), "group_mul");
  return GroupPoint(n1.x + n2.x, n1.a + n2.a + bracket(n1.x, n2.x) * 0.5);
}

ZSkew conjugate(const Matrix& k, const ZSkew& a) {
  require_same_dim(static_cast<int>(k.rows()), a.dim(), "conjugate");
  Matrix m = k * a.matrix() * k.transpose();
  // Re-skew to remove rounding asymmetry.
  return ZSkew(Matrix(0.5 * (m - m.transpose())), ZSkew::Trusted{});
}

void require_orthogonal(const Matrix& k) {
  if (k.rows() != k.cols()) throw DomainError("orthogonal matrix must be square");
  const double dev = (k.transpose() * k - Matrix::Identity(k.rows(), k.cols())).norm();
  if (!(dev <= kOrthogonalTolerance)) {
    throw DomainError("matrix is not orthogonal (|k^T k - I| = " + std::to_string(dev) + ")");
  }
}

GroupPoint k_action(const Matrix& k, const GroupPoint& n) {
  require_same_dim(static_cast<int>(k.rows()), n.dim(), "k_action");
  require_orthogonal(k);
  return GroupPoint(VVector(Vector(k * n.x.coords())), conjugate(k, n.a));
}

GroupPoint one_param_curve(const GroupPoint& n, const VVector& vx, const ZSkew& va, double t) {
  require_same_dim(n.dim(), vx.dim(), "one_param_curve");
  require_same_dim(n.dim(), va.dim(), "one_param_curve");
  return GroupPoint(n.x + vx * t, n.a + va * t + bracket(n.x, vx) * (0.5 * t));
}

Functional coadjoint(const GroupPoint& n, const Functional& f) {
  require_same_dim(n.dim(), f.xstar.dim(), "coadjoint");
  require_same_dim(n.dim(), f.astar.dim(), "coadjoint");
  Vector shifted = f.xstar.coords() - f.astar.matrix() * n.x.coords();
  return Functional{VVector(std::move(shifted)), f.astar};
}

}  // namespace nilsphere
