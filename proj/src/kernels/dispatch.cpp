#include "nilsphere/kernels.hpp"

#include <cstdlib>
#include <string>

namespace nilsphere::kernels {
namespace {

Isa resolve_isa() {
  const bool have = avx2_available();
  if (const char* env = std::getenv("NILSPHERE_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Isa::Scalar;
    if (v == "avx2" && have) return Isa::Avx2;
  }
  return have ? Isa::Avx2 : Isa::Scalar;
}

}  // namespace

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool have = __builtin_cpu_supports("avx2");
  return have;
#else
  return false;
#endif
}

Isa active_isa() {
  static const Isa isa = resolve_isa();
  return isa;
}

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void laguerre_norm_batch(int n, double alpha, std::span<const double> u, std::span<double> out) {
  if (active_isa() == Isa::Avx2)
    avx2::laguerre_norm_batch(n, alpha, u, out);
  else
    scalar::laguerre_norm_batch(n, alpha, u, out);
}

void laguerre_weighted_sums(double alpha, std::span<const double> u, std::span<const double> w,
                            std::span<double> sums) {
  if (active_isa() == Isa::Avx2)
    avx2::laguerre_weighted_sums(alpha, u, w, sums);
  else
    scalar::laguerre_weighted_sums(alpha, u, w, sums);
}

void hermite_scaled_batch(int k, std::span<const double> x, std::span<double> out) {
  if (active_isa() == Isa::Avx2)
    avx2::hermite_scaled_batch(k, x, out);
  else
    scalar::hermite_scaled_batch(k, x, out);
}

}  // namespace nilsphere::kernels
