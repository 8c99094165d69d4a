// AVX2 variants. Compiled with per-function target attributes so the rest of
// the translation unit stays baseline x86-64; callers must check
// avx2_available() first.

#include "nilsphere/errors.hpp"
#include "nilsphere/kernels.hpp"
#include "nilsphere/special.hpp"

#include <cmath>
#include <vector>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define NILSPHERE_HAVE_X86 1
#else
#define NILSPHERE_HAVE_X86 0
#endif

namespace nilsphere::kernels::avx2 {

#if NILSPHERE_HAVE_X86

namespace {

constexpr std::size_t kLanes = 4;

__attribute__((target("avx2"))) void laguerre_block(int n, double alpha, const double* u, const double* e,
                                                    double* out) {
  const __m256d vu = _mm256_loadu_pd(u);
  __m256d prev = _mm256_loadu_pd(e);
  if (n == 0) {
    _mm256_storeu_pd(out, prev);
    return;
  }
  __m256d cur = _mm256_mul_pd(_mm256_sub_pd(_mm256_set1_pd(1.0 + alpha), vu), prev);
  for (int k = 1; k < n; ++k) {
    const __m256d c = _mm256_set1_pd(2.0 * k + 1.0 + alpha);
    const __m256d d = _mm256_set1_pd(k + alpha);
    const __m256d q = _mm256_set1_pd(k + 1.0);
    const __m256d t = _mm256_sub_pd(_mm256_mul_pd(_mm256_sub_pd(c, vu), cur), _mm256_mul_pd(d, prev));
    prev = cur;
    cur = _mm256_div_pd(t, q);
  }
  _mm256_storeu_pd(out, cur);
}

__attribute__((target("avx2"))) void hermite_block(int k, const double* x, double* out, double h0) {
  const __m256d vx = _mm256_loadu_pd(x);
  __m256d prev = _mm256_set1_pd(h0);
  if (k == 0) {
    _mm256_storeu_pd(out, prev);
    return;
  }
  __m256d cur = _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(M_SQRT2), vx), prev);
  for (int i = 1; i < k; ++i) {
    const __m256d a = _mm256_set1_pd(std::sqrt(2.0 / (i + 1.0)));
    const __m256d b = _mm256_set1_pd(std::sqrt(static_cast<double>(i) / (i + 1.0)));
    const __m256d next = _mm256_sub_pd(_mm256_mul_pd(_mm256_mul_pd(vx, a), cur), _mm256_mul_pd(b, prev));
    prev = cur;
    cur = next;
  }
  _mm256_storeu_pd(out, cur);
}

__attribute__((target("avx2"))) double hsum(__m256d v) {
  alignas(32) double buf[4];
  _mm256_store_pd(buf, v);
  return (buf[0] + buf[1]) + (buf[2] + buf[3]);
}

__attribute__((target("avx2"))) void weighted_sums_impl(double alpha, std::span<const double> u,
                                                        std::span<const double> w, std::span<double> sums) {
  const std::size_t n = u.size();
  const std::size_t padded = (n + kLanes - 1) / kLanes * kLanes;
  // Padding lanes carry zero weight.
  std::vector<double> uu(padded, 0.0), ww(padded, 0.0), prev(padded), cur(padded);
  for (std::size_t i = 0; i < n; ++i) {
    uu[i] = u[i];
    ww[i] = w[i];
  }
  for (std::size_t i = 0; i < padded; ++i) {
    prev[i] = std::exp(-0.5 * uu[i]);
    cur[i] = (1.0 + alpha - uu[i]) * prev[i];
  }
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  for (std::size_t i = 0; i < padded; i += kLanes) {
    const __m256d vw = _mm256_loadu_pd(&ww[i]);
    s0 = _mm256_add_pd(s0, _mm256_mul_pd(vw, _mm256_loadu_pd(&prev[i])));
    s1 = _mm256_add_pd(s1, _mm256_mul_pd(vw, _mm256_loadu_pd(&cur[i])));
  }
  sums[0] = hsum(s0);
  if (sums.size() > 1) sums[1] = hsum(s1);
  for (std::size_t l = 2; l < sums.size(); ++l) {
    const double k = static_cast<double>(l - 1);
    const __m256d c = _mm256_set1_pd(2.0 * k + 1.0 + alpha);
    const __m256d d = _mm256_set1_pd(k + alpha);
    const __m256d e = _mm256_set1_pd(k + 1.0);
    __m256d s = _mm256_setzero_pd();
    for (std::size_t i = 0; i < padded; i += kLanes) {
      const __m256d vu = _mm256_loadu_pd(&uu[i]);
      const __m256d vp = _mm256_loadu_pd(&prev[i]);
      const __m256d vc = _mm256_loadu_pd(&cur[i]);
      const __m256d next =
          _mm256_div_pd(_mm256_sub_pd(_mm256_mul_pd(_mm256_sub_pd(c, vu), vc), _mm256_mul_pd(d, vp)), e);
      _mm256_storeu_pd(&prev[i], vc);
      _mm256_storeu_pd(&cur[i], next);
      s = _mm256_add_pd(s, _mm256_mul_pd(_mm256_loadu_pd(&ww[i]), next));
    }
    sums[l] = hsum(s);
  }
}

}  // namespace

void laguerre_norm_batch(int n, double alpha, std::span<const double> u, std::span<double> out) {
  if (u.size() != out.size()) throw DimensionError("laguerre_norm_batch: size mismatch");
  if (n < 0) throw DomainError("laguerre_norm: n must be >= 0");
  if (!(alpha > -1.0)) throw DomainError("laguerre_norm: alpha must be > -1");
  const double norm = binomial_norm(n, alpha);
  std::size_t i = 0;
  double ub[kLanes], eb[kLanes], ob[kLanes];
  while (i < u.size()) {
    // Gather a block of in-range arguments; zero and out-of-range ones take the
    // scalar path.
    std::size_t idx[kLanes];
    std::size_t filled = 0;
    while (i < u.size() && filled < kLanes) {
      const double v = u[i];
      if (!(v >= 0.0)) throw DomainError("laguerre_norm: x must be >= 0");
      if (v > 0.0 && v <= kLaguerreDirectLimit) {
        ub[filled] = v;
        eb[filled] = std::exp(-0.5 * v);
        idx[filled++] = i;
      } else {
        out[i] = laguerre_norm(n, alpha, v);
      }
      ++i;
    }
    for (std::size_t f = filled; f < kLanes; ++f) {
      ub[f] = 0.0;
      eb[f] = 1.0;
    }
    laguerre_block(n, alpha, ub, eb, ob);
    for (std::size_t f = 0; f < filled; ++f) out[idx[f]] = n == 0 ? ob[f] : ob[f] / norm;
  }
}

void laguerre_weighted_sums(double alpha, std::span<const double> u, std::span<const double> w,
                            std::span<double> sums) {
  if (u.size() != w.size()) throw DimensionError("laguerre_weighted_sums: size mismatch");
  if (!(alpha > -1.0)) throw DomainError("laguerre_weighted_sums: alpha must be > -1");
  for (double v : u)
    if (!(v >= 0.0 && v <= kLaguerreDirectLimit)) throw DomainError("laguerre_weighted_sums: argument out of range");
  if (sums.empty()) return;
  weighted_sums_impl(alpha, u, w, sums);
}

void hermite_scaled_batch(int k, std::span<const double> x, std::span<double> out) {
  if (x.size() != out.size()) throw DimensionError("hermite_scaled_batch: size mismatch");
  if (k < 0) throw DomainError("hermite: k must be >= 0");
  const double h0 = 1.0 / std::sqrt(std::sqrt(M_PI));
  std::size_t i = 0;
  for (; i + kLanes <= x.size(); i += kLanes) hermite_block(k, &x[i], &out[i], h0);
  if (i < x.size()) {
    double xb[kLanes] = {0.0, 0.0, 0.0, 0.0}, ob[kLanes];
    for (std::size_t j = i; j < x.size(); ++j) xb[j - i] = x[j];
    hermite_block(k, xb, ob, h0);
    for (std::size_t j = i; j < x.size(); ++j) out[j] = ob[j - i];
  }
}

#else  // !NILSPHERE_HAVE_X86

void laguerre_norm_batch(int, double, std::span<const double>, std::span<double>) {
  throw DomainError("AVX2 kernels unavailable on this architecture");
}
void laguerre_weighted_sums(double, std::span<const double>, std::span<const double>, std::span<double>) {
  throw DomainError("AVX2 kernels unavailable on this architecture");
}
void hermite_scaled_batch(int, std::span<const double>, std::span<double>) {
  throw DomainError("AVX2 kernels unavailable on this architecture");
}

#endif

}  // namespace nilsphere::kernels::avx2
