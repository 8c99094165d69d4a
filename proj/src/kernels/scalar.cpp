#include "nilsphere/errors.hpp"
#include "nilsphere/kernels.hpp"
#include "nilsphere/special.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace nilsphere::kernels::scalar {

void laguerre_norm_batch(int n, double alpha, std::span<const double> u, std::span<double> out) {
  if (u.size() != out.size()) throw DimensionError("laguerre_norm_batch: size mismatch");
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = laguerre_norm(n, alpha, u[i]);
}

void laguerre_weighted_sums(double alpha, std::span<const double> u, std::span<const double> w,
                            std::span<double> sums) {
  if (u.size() != w.size()) throw DimensionError("laguerre_weighted_sums: size mismatch");
  if (!(alpha > -1.0)) throw DomainError("laguerre_weighted_sums: alpha must be > -1");
  for (double v : u)
    if (!(v >= 0.0 && v <= kLaguerreDirectLimit)) throw DomainError("laguerre_weighted_sums: argument out of range");
  if (sums.empty()) return;
  std::vector<double> prev(u.size()), cur(u.size());
  double s0 = 0.0, s1 = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    prev[i] = std::exp(-0.5 * u[i]);
    cur[i] = (1.0 + alpha - u[i]) * prev[i];
    s0 += w[i] * prev[i];
    s1 += w[i] * cur[i];
  }
  sums[0] = s0;
  if (sums.size() > 1) sums[1] = s1;
  for (std::size_t l = 2; l < sums.size(); ++l) {
    const double k = static_cast<double>(l - 1);
    const double c = 2.0 * k + 1.0 + alpha;
    const double d = k + alpha;
    const double e = k + 1.0;
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double next = ((c - u[i]) * cur[i] - d * prev[i]) / e;
      prev[i] = cur[i];
      cur[i] = next;
      s += w[i] * next;
    }
    sums[l] = s;
  }
}

void hermite_scaled_batch(int k, std::span<const double> x, std::span<double> out) {
  if (x.size() != out.size()) throw DimensionError("hermite_scaled_batch: size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = hermite_scaled(k, x[i]);
}

}  // namespace nilsphere::kernels::scalar
