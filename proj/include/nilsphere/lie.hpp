#pragma once

// Free two-step nilpotent Lie algebra N_p = V (+) Z and its group, in
// exponential coordinates.
//
// V = R^p with the orthonormal basis X_1..X_p. The centre Z is realised as the
// skew-symmetric p x p matrices acting on V, with
//
//   [X, Y](V) = <X,V> Y - <Y,V> X,   i.e.  [X, Y] = Y X^T - X Y^T.
//
// So [e_i, e_j] has entry (j,i) = +1 and (i,j) = -1. Under this convention
// X_{1,2} = [e_1, e_2] = -J where J = [[0,1],[-1,0]].
//
// The inner product on Z is HALF the Frobenius product:
//
//   <A, B>_Z = 1/2 trace(A^T B).
//
// The 1/2 is what makes <[X,Y],[X',Y']> = <X,X'><Y,Y'> - <X,Y'><X',Y> and
// makes {X_{i,j}, i<j} orthonormal. Forgetting it doubles every central phase.

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace nilsphere {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kSkewTolerance = 1e-12;
inline constexpr double kOrthogonalTolerance = 1e-10;

/// Dimension of the centre, p(p-1)/2.
constexpr int centre_dim(int p) { return p * (p - 1) / 2; }

/// An element of V in the basis X_1..X_p.
class VVector {
 public:
  explicit VVector(Vector coords);
  VVector(std::initializer_list<double> coords);

  static VVector zero(int p);
  /// Basis vector e_i, zero-based index.
  static VVector basis(int p, int i);

  int dim() const { return static_cast<int>(coords_.size()); }
  const Vector& coords() const { return coords_; }
  double operator[](int i) const { return coords_[i]; }
  double norm() const { return coords_.norm(); }
  double dot(const VVector& other) const;

  VVector operator+(const VVector& o) const;
  VVector operator-(const VVector& o) const;
  VVector operator-() const { return VVector(Vector(-coords_)); }
  VVector operator*(double s) const { return VVector(Vector(coords_ * s)); }

 private:
  Vector coords_;
};

/// An element of the centre Z, stored as a skew-symmetric matrix.
class ZSkew {
 public:
  /// Symmetrises `mat` to (mat - mat^T)/2; throws DomainError if `mat` is
  /// further than kSkewTolerance (scaled by max(1, |mat|)) from skew.
  explicit ZSkew(const Matrix& mat);

  static ZSkew zero(int p);
  /// The basis element X_{i,j} = [e_i, e_j], zero-based, i < j.
  static ZSkew basis(int p, int i, int j);
  /// Builds sum_{i<j} c_{ij} X_{i,j} from coordinates in lexicographic (i<j) order.
  static ZSkew from_coords(int p, std::span<const double> coords);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Matrix& matrix() const { return mat_; }
  /// Coordinates in the orthonormal basis X_{i,j}, lexicographic i<j.
  std::vector<double> coords() const;

  ZSkew operator+(const ZSkew& o) const;
  ZSkew operator-(const ZSkew& o) const;
  ZSkew operator-() const;
  ZSkew operator*(double s) const;

 private:
  struct Trusted {};
  ZSkew(Matrix mat, Trusted) : mat_(std::move(mat)) {}
  friend ZSkew bracket(const VVector&, const VVector&);
  friend ZSkew conjugate(const Matrix&, const ZSkew&);

  Matrix mat_;
};

/// exp(X + A) in exponential coordinates.
struct GroupPoint {
  VVector x;
  ZSkew a;

  GroupPoint(VVector x_, ZSkew a_);

  static GroupPoint identity(int p);
  /// Parses coordinates: p entries of X, then centre_dim(p) entries of A in
  /// lexicographic X_{i,j} order.
  static GroupPoint from_coords(int p, std::span<const double> coords);
  std::vector<double> coords() const;

  int dim() const { return x.dim(); }
  GroupPoint inverse() const;
};

ZSkew bracket(const VVector& x, const VVector& y);

/// 1/2 trace(a^T b).
double z_inner(const ZSkew& a, const ZSkew& b);

/// (X, A)(X', A') = (X + X', A + A' + 1/2 [X, X']).
GroupPoint group_mul(const GroupPoint& n1, const GroupPoint& n2);

/// k A k^T for orthogonal k; no orthogonality check.
ZSkew conjugate(const Matrix& k, const ZSkew& a);

/// Throws DomainError unless |k^T k - I| <= kOrthogonalTolerance.
void require_orthogonal(const Matrix& k);

/// The O_p action (k X, k A k^T). Throws DomainError for non-orthogonal k.
GroupPoint k_action(const Matrix& k, const GroupPoint& n);

/// n . exp(t (vx + va)) = (X + t vx, A + t va + t/2 [X, vx]).
GroupPoint one_param_curve(const GroupPoint& n, const VVector& vx, const ZSkew& va, double t);

/// Coadjoint action of exp(X + A) on the functional X* + A*: (X* - A* X, A*).
struct Functional {
  VVector xstar;
  ZSkew astar;
};
Functional coadjoint(const GroupPoint& n, const Functional& f);

}  // namespace nilsphere
