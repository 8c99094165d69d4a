#include "nilsphere/canonical.hpp"
#include "nilsphere/errors.hpp"
#include "nilsphere/haar.hpp"
#include "support.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

using namespace nilsphere;
using nilsphere::test::random_skew;
using nilsphere::test::random_vector;

TEST_CASE("d2_matrix") {
  CHECK(d2_matrix(LambdaSpec::zero(4)).matrix().norm() == 0.0);
  Matrix want(2, 2);
  want << 0.0, 3.0, -3.0, 0.0;
  CHECK((d2_matrix(LambdaSpec(2, {3.0})).matrix() - want).norm() == 0.0);

  const Matrix d3 = d2_matrix(LambdaSpec(3, {2.0})).matrix();
  CHECK(d3(0, 1) == 2.0);
  CHECK(d3(1, 0) == -2.0);
  CHECK(d3.row(2).norm() == 0.0);
  CHECK(d3.col(2).norm() == 0.0);

  const Matrix d4 = d2_matrix(LambdaSpec(4, {2.0, 1.0}), -1).matrix();
  CHECK(d4(0, 1) == 2.0);
  CHECK(d4(2, 3) == -1.0);
}

TEST_CASE("LambdaSpec validation") {
  CHECK_THROWS_AS(LambdaSpec(4, {1.0, 2.0}), DomainError);
  CHECK_THROWS_AS(LambdaSpec(4, {1.0}), DimensionError);
  CHECK_THROWS_AS(LambdaSpec(2, {-1.0}), DomainError);
  CHECK(LambdaSpec(3, {0.0}).is_zero());
  CHECK(LambdaSpec(4, {3.0, 4.0 - 4.0}).norm() == 3.0);
}

TEST_CASE("canonical_form examples") {
  const CanonicalForm z = canonical_form(ZSkew::zero(3));
  CHECK(z.lambda.is_zero());
  CHECK((z.k.transpose() * z.k - Matrix::Identity(3, 3)).norm() <= 1e-14);

  Matrix a(2, 2);
  a << 0.0, -3.0, 3.0, 0.0;
  const CanonicalForm cf = canonical_form(ZSkew(a));
  CHECK(cf.lambda[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK((cf.k * a * cf.k.transpose() - d2_matrix(cf.lambda).matrix()).norm() <= 1e-12);

  Rng rng(11);
  const ZSkew r = random_skew(4, rng);
  const CanonicalForm cr = canonical_form(r);
  Eigen::SelfAdjointEigenSolver<Matrix> es(-(r.matrix() * r.matrix()));
  Vector ev = es.eigenvalues();  // ascending, each value twice
  CHECK(cr.lambda[0] == doctest::Approx(std::sqrt(ev[3])).epsilon(1e-12));
  CHECK(cr.lambda[1] == doctest::Approx(std::sqrt(ev[1])).epsilon(1e-12));
}

TEST_CASE("canonical_form round trip") {
  Rng rng(12);
  for (int t = 0; t < 500; ++t) {
    const int p = 2 + t % 7;
    const ZSkew a = random_skew(p, rng, 0.1 + 3.0 * rng.uniform());
    const CanonicalForm cf = canonical_form(a);
    CHECK((cf.k * a.matrix() * cf.k.transpose() - d2_matrix(cf.lambda).matrix()).norm() <= 1e-10);
    CHECK((cf.k.transpose() * cf.k - Matrix::Identity(p, p)).norm() <= 1e-12);
    const auto& l = cf.lambda.values();
    CHECK(std::is_sorted(l.rbegin(), l.rend()));
    CHECK(l.back() >= 0.0);
  }
}

TEST_CASE("canonical_form handles repeated and zero values") {
  Rng rng(13);
  const LambdaSpec lam(6, {2.0, 2.0, 0.0});
  for (int t = 0; t < 20; ++t) {
    const Matrix q = sample_haar(GroupKind::O, 6, rng);
    const ZSkew a = conjugate(q, d2_matrix(lam));
    const CanonicalForm cf = canonical_form(a);
    CHECK((cf.k * a.matrix() * cf.k.transpose() - d2_matrix(cf.lambda).matrix()).norm() <= 1e-10);
    const OrbitProfile prof = orbit_profile(cluster_lambda(cf.lambda));
    CHECK(prof.p0 == 2);
    CHECK(prof.p1 == 1);
    CHECK(prof.m[0] == 2);
  }
}

TEST_CASE("canonical_form is conjugation invariant") {
  Rng rng(14);
  for (int t = 0; t < 50; ++t) {
    const int p = 2 + t % 6;
    const ZSkew a = random_skew(p, rng);
    const Matrix q = sample_haar(GroupKind::O, p, rng);
    const auto l1 = canonical_form(a).lambda.values();
    const auto l2 = canonical_form(conjugate(q, a)).lambda.values();
    for (std::size_t i = 0; i < l1.size(); ++i) CHECK(std::abs(l1[i] - l2[i]) <= 1e-10);
  }
}

TEST_CASE("orbit_profile examples") {
  const OrbitProfile a = orbit_profile(LambdaSpec(8, {2.0, 2.0, 1.0, 0.0}));
  CHECK(a.p0 == 3);
  CHECK(a.p1 == 2);
  CHECK(a.mu == std::vector<double>{2.0, 1.0});
  CHECK(a.m == std::vector<int>{2, 1});
  CHECK(a.m_cum == std::vector<int>{0, 2, 3});

  const OrbitProfile z = orbit_profile(LambdaSpec::zero(5));
  CHECK(z.p0 == 0);
  CHECK(z.p1 == 0);
  CHECK(z.mu.empty());

  const OrbitProfile f = orbit_profile(LambdaSpec(2, {5.0}));
  CHECK(f.p0 == 1);
  CHECK(f.p1 == 1);
  CHECK(f.mu == std::vector<double>{5.0});
  CHECK(f.m == std::vector<int>{1});

  // Exact equality: nearly equal values are distinct until clustered.
  const LambdaSpec near(4, {1.0 + 1e-12, 1.0});
  CHECK(orbit_profile(near).p1 == 2);
  CHECK(orbit_profile(cluster_lambda(near)).p1 == 1);
}

TEST_CASE("orbit_invariants examples") {
  const VVector xs{1.0, -2.0, 2.0};
  const OrbitInvariants o0 = orbit_invariants(xs, ZSkew::zero(3));
  CHECK(o0.r == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(o0.lambda.is_zero());

  const OrbitInvariants o2 = orbit_invariants(VVector{0.3, 0.9}, d2_matrix(LambdaSpec(2, {3.0})));
  CHECK(o2.r <= 1e-14);
  CHECK(o2.lambda[0] == doctest::Approx(3.0));

  const OrbitInvariants o3 = orbit_invariants(VVector{1.0, 1.0, 4.0}, d2_matrix(LambdaSpec(3, {2.0})));
  CHECK(o3.r == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(o3.lambda[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("orbit_invariants are invariant under coadjoint moves") {
  Rng rng(15);
  for (int t = 0; t < 50; ++t) {
    const int p = 3 + t % 4;
    Matrix am = random_skew(p, rng).matrix();
    if (p % 2 == 1 || t % 3 == 0) {
      // Force a kernel so that r is nontrivial.
      const CanonicalForm cf = canonical_form(ZSkew(am));
      std::vector<double> l = cf.lambda.values();
      l.back() = 0.0;
      am = cf.k.transpose() * d2_matrix(LambdaSpec(p, l)).matrix() * cf.k;
    }
    const Functional f{VVector(random_vector(p, rng)), ZSkew(am)};
    const OrbitInvariants before = orbit_invariants(f.xstar, f.astar);

    const Matrix k = sample_haar(GroupKind::O, p, rng);
    const GroupPoint n(VVector(random_vector(p, rng)), random_skew(p, rng));
    const Functional g = coadjoint(n, f);
    const VVector kx(Vector(k * g.xstar.coords()));
    const OrbitInvariants after = orbit_invariants(kx, conjugate(k, g.astar));
    CHECK(std::abs(before.r - after.r) <= 1e-8);
    for (int i = 0; i < p / 2; ++i) CHECK(std::abs(before.lambda[i] - after.lambda[i]) <= 1e-8);
  }
}

TEST_CASE("pr_norms") {
  const OrbitProfile prof = orbit_profile(LambdaSpec(5, {2.0, 1.0}));
  CHECK(pr_norms(VVector::zero(5), prof) == std::vector<double>{0.0, 0.0});
  CHECK(pr_norms(VVector{1.0, 2.0, 3.0, 4.0, 9.0}, prof) == std::vector<double>{5.0, 25.0});
  const OrbitProfile p2 = orbit_profile(LambdaSpec(2, {0.5}));
  CHECK(pr_norms(VVector{3.0, 4.0}, p2)[0] == 25.0);
  const OrbitProfile rep = orbit_profile(LambdaSpec(4, {1.0, 1.0}));
  CHECK(pr_norms(VVector{1.0, 1.0, 1.0, 1.0}, rep) == std::vector<double>{4.0});
}

TEST_CASE("SphericalIndex grammar") {
  CHECK_NOTHROW(SphericalIndex(0.0, LambdaSpec(2, {1.0}), {3}, GroupKind::O));
  CHECK_THROWS_AS(SphericalIndex(0.5, LambdaSpec(2, {1.0}), {3}, GroupKind::O), DomainError);
  CHECK_NOTHROW(SphericalIndex(0.5, LambdaSpec(3, {1.0}), {3}, GroupKind::O));
  CHECK_THROWS_AS(SphericalIndex(-0.1, LambdaSpec(3, {1.0}), {0}, GroupKind::O), DomainError);
  CHECK_THROWS_AS(SphericalIndex(0.0, LambdaSpec(2, {1.0}), {}, GroupKind::O), DomainError);
  CHECK_THROWS_AS(SphericalIndex(0.0, LambdaSpec(4, {2.0, 1.0}), {1}, GroupKind::O), DomainError);
  CHECK_THROWS_AS(SphericalIndex(0.0, LambdaSpec(4, {2.0, 1.0}), {1, -1}, GroupKind::O), DomainError);
  CHECK_THROWS_AS(SphericalIndex(1.0, LambdaSpec::zero(3), {0}, GroupKind::O), DomainError);
  CHECK_THROWS_AS(SphericalIndex(0.0, LambdaSpec(2, {1.0}), {0}, GroupKind::SO), DomainError);
  CHECK_THROWS_AS(SphericalIndex(0.0, LambdaSpec(2, {1.0}), {0}, GroupKind::O, 1), DomainError);
  CHECK_THROWS_AS(SphericalIndex(0.0, LambdaSpec(2, {1.0}), {0}, GroupKind::SO, 2), DomainError);
  CHECK_NOTHROW(SphericalIndex(0.0, LambdaSpec(2, {1.0}), {0}, GroupKind::SO, -1));
  CHECK(SphericalIndex(1.0, LambdaSpec::zero(3), {}, GroupKind::O).bessel_family());
}
