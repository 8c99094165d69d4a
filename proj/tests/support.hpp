#pragma once

#include "nilsphere/haar.hpp"
#include "nilsphere/lie.hpp"

#include <vector>

namespace nilsphere::test {

inline Vector random_vector(int p, Rng& rng, double scale = 1.0) {
  Vector v(p);
  for (int i = 0; i < p; ++i) v[i] = scale * rng.normal();
  return v;
}

inline ZSkew random_skew(int p, Rng& rng, double scale = 1.0) {
  Matrix m = Matrix::Zero(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) {
      m(i, j) = scale * rng.normal();
      m(j, i) = -m(i, j);
    }
  return ZSkew(m);
}

/// Uniform coordinates in [-scale, scale].
inline GroupPoint random_point(int p, Rng& rng, double scale = 1.0) {
  std::vector<double> c(static_cast<std::size_t>(p + centre_dim(p)));
  for (double& v : c) v = scale * (2.0 * rng.uniform() - 1.0);
  return GroupPoint::from_coords(p, c);
}

inline double dist(const GroupPoint& a, const GroupPoint& b) {
  return (a.x.coords() - b.x.coords()).norm() + (a.a.matrix() - b.a.matrix()).norm();
}

}  // namespace nilsphere::test
