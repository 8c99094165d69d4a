#include "nilsphere/haar.hpp"
#include "nilsphere/kernels.hpp"
#include "nilsphere/special.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

using namespace nilsphere;

namespace {

std::vector<double> laguerre_args(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = rng.uniform();
    u[i] = r < 0.1 ? 0.0 : (r < 0.2 ? 600.0 + 400.0 * rng.uniform() : 80.0 * rng.uniform() * rng.uniform());
  }
  return u;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar kernels agree with the special functions") {
  const auto u = laguerre_args(101, 1);
  std::vector<double> out(u.size());
  kernels::scalar::laguerre_norm_batch(7, 1.0, u, out);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(out[i] == laguerre_norm(7, 1.0, u[i]));
  kernels::scalar::hermite_scaled_batch(5, u, out);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(out[i] == hermite_scaled(5, u[i]));
}

TEST_CASE("AVX2 pointwise kernels are bit-identical to scalar") {
  if (!kernels::avx2_available()) {
    MESSAGE("AVX2 not available; skipping");
    return;
  }
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 1000u}) {
    const auto u = laguerre_args(n, 10 + n);
    for (int deg : {0, 1, 2, 9, 60})
      for (double alpha : {-0.5, 0.0, 0.5, 1.0, 3.0}) {
        std::vector<double> a(n), b(n);
        kernels::scalar::laguerre_norm_batch(deg, alpha, u, a);
        kernels::avx2::laguerre_norm_batch(deg, alpha, u, b);
        CHECK(same_bits(a, b));
      }
    Rng rng(n);
    std::vector<double> x(n);
    for (double& v : x) v = 8.0 * (rng.uniform() - 0.5);
    for (int k : {0, 1, 2, 13, 64}) {
      std::vector<double> a(n), b(n);
      kernels::scalar::hermite_scaled_batch(k, x, a);
      kernels::avx2::hermite_scaled_batch(k, x, b);
      CHECK(same_bits(a, b));
    }
  }
}

TEST_CASE("AVX2 weighted Laguerre sums agree with scalar to rounding") {
  if (!kernels::avx2_available()) {
    MESSAGE("AVX2 not available; skipping");
    return;
  }
  Rng rng(3);
  for (std::size_t n : {1u, 4u, 7u, 200u}) {
    std::vector<double> u(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = 50.0 * rng.uniform();
      w[i] = rng.uniform();
    }
    for (double alpha : {0.0, 1.0}) {
      std::vector<double> a(300), b(300);
      kernels::scalar::laguerre_weighted_sums(alpha, u, w, a);
      kernels::avx2::laguerre_weighted_sums(alpha, u, w, b);
      double scale = 0.0;
      for (double v : w) scale += std::abs(v);
      for (std::size_t l = 0; l < a.size(); ++l) CHECK(std::abs(a[l] - b[l]) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("kernels reject bad input on both paths") {
  std::vector<double> u{1.0, -1.0}, out(2), w{1.0, 1.0}, sums(3);
  CHECK_THROWS(kernels::scalar::laguerre_norm_batch(1, 0.0, u, out));
  CHECK_THROWS(kernels::laguerre_norm_batch(1, 0.0, u, out));
  std::vector<double> big{1.0, 700.0};
  CHECK_THROWS(kernels::scalar::laguerre_weighted_sums(0.0, big, w, sums));
  CHECK_THROWS(kernels::laguerre_weighted_sums(0.0, big, w, sums));
  std::vector<double> short_out(1);
  CHECK_THROWS(kernels::hermite_scaled_batch(1, w, short_out));
}

TEST_CASE("dispatch reports an ISA") {
  const kernels::Isa isa = kernels::active_isa();
  CHECK(std::string(kernels::isa_name(isa)).size() > 0);
  if (isa == kernels::Isa::Avx2) CHECK(kernels::avx2_available());
}
