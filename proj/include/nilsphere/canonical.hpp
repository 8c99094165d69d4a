#pragma once

// Orthogonal normal forms of skew-symmetric matrices and the orbit data that
// parameterise spherical functions.

#include "nilsphere/lie.hpp"

#include <optional>
#include <vector>

namespace nilsphere {

/// Relative tolerance used when clustering numerically computed lambdas
/// (see cluster_lambda). Never applied implicitly by orbit_profile.
inline constexpr double kLambdaClusterTolerance = 1e-8;

/// Singular values below this fraction of the largest count as zero.
inline constexpr double kKernelThreshold = 1e-10;

enum class GroupKind { O, SO };

/// Lambda = (lambda_1 >= ... >= lambda_{p'} >= 0), p' = floor(p/2).
class LambdaSpec {
 public:
  LambdaSpec(int p, std::vector<double> values);
  static LambdaSpec zero(int p);

  int p() const { return p_; }
  int half_dim() const { return p_ / 2; }
  const std::vector<double>& values() const { return values_; }
  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
  bool is_zero() const;
  /// (sum lambda_i^2)^{1/2}
  double norm() const;

 private:
  int p_;
  std::vector<double> values_;
};

/// Derived data of Lambda: p0 nonzero entries, p1 distinct nonzero values
/// mu_1 > ... > mu_{p1} > 0 with multiplicities m_j and cumulative sums m'_j.
struct OrbitProfile {
  int p = 0;
  int p0 = 0;
  int p1 = 0;
  std::vector<double> mu;
  std::vector<int> m;
  std::vector<int> m_cum;  ///< length p1 + 1, m_cum[0] = 0
};

/// Labels one bounded spherical function.
class SphericalIndex {
 public:
  /// Validates the parameter grammar: r >= 0, r = 0 when 2 p0 = p, |l| = p1
  /// when Lambda != 0 and l empty otherwise, epsilon present iff kind == SO.
  SphericalIndex(double r, LambdaSpec lambda, std::vector<int> l, GroupKind kind,
                 std::optional<int> epsilon = std::nullopt);

  int p() const { return lambda_.p(); }
  double r() const { return r_; }
  const LambdaSpec& lambda() const { return lambda_; }
  const std::vector<int>& l() const { return l_; }
  GroupKind kind() const { return kind_; }
  std::optional<int> epsilon() const { return epsilon_; }
  const OrbitProfile& profile() const { return profile_; }
  bool bessel_family() const { return lambda_.is_zero(); }

 private:
  double r_;
  LambdaSpec lambda_;
  std::vector<int> l_;
  GroupKind kind_;
  std::optional<int> epsilon_;
  OrbitProfile profile_;
};

/// Block-diagonal lambda_i J (J = [[0,1],[-1,0]]), last block times epsilon.
ZSkew d2_matrix(const LambdaSpec& lambda, std::optional<int> epsilon = std::nullopt);

struct CanonicalForm {
  Matrix k;           ///< orthogonal, k a k^T = D2(lambda)
  LambdaSpec lambda;
};

/// Orthogonal normal form via the eigendecomposition of -a^2.
CanonicalForm canonical_form(const ZSkew& a);

/// Exact-equality multiplicity detection on a user-supplied Lambda.
OrbitProfile orbit_profile(const LambdaSpec& lambda);

/// Snaps entries within kLambdaClusterTolerance (relative) of each other or
/// of zero, so that a numerically computed Lambda can be profiled.
LambdaSpec cluster_lambda(const LambdaSpec& lambda, double rel_tol = kLambdaClusterTolerance);

struct OrbitInvariants {
  double r;
  LambdaSpec lambda;
};

/// (r, Lambda) for the coadjoint G-orbit of X* + A*: Lambda from the normal
/// form of A*, r the norm of the projection of X* onto ker A*.
OrbitInvariants orbit_invariants(const VVector& xstar, const ZSkew& astar);

/// |pr_j X|^2 for j = 1..p1.
std::vector<double> pr_norms(const VVector& x, const OrbitProfile& profile);

}  // namespace nilsphere
