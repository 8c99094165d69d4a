#pragma once

// Batched special-function kernels. Each kernel has a scalar reference
// implementation and an AVX2 variant; the dispatched entry points pick one at
// runtime from the CPU features (override with NILSPHERE_SIMD=scalar|avx2).
//
// The AVX2 variants of the pointwise kernels perform the same IEEE operations
// in the same order as the scalar ones (no FMA contraction), so results are
// bit-identical. The weighted-sum kernel reduces in four lanes and agrees to
// rounding.

#include <span>

namespace nilsphere::kernels {

enum class Isa { Scalar, Avx2 };

bool avx2_available();
/// ISA used by the dispatched entry points.
Isa active_isa();
const char* isa_name(Isa isa);

/// out[i] = laguerre_norm(n, alpha, u[i]).
void laguerre_norm_batch(int n, double alpha, std::span<const double> u, std::span<double> out);

/// sums[l] = sum_i w[i] L_l^alpha(u[i]) e^{-u[i]/2} for l = 0..sums.size()-1.
/// Requires u[i] in [0, kLaguerreDirectLimit].
void laguerre_weighted_sums(double alpha, std::span<const double> u, std::span<const double> w,
                            std::span<double> sums);

/// out[i] = hermite_scaled(k, x[i]).
void hermite_scaled_batch(int k, std::span<const double> x, std::span<double> out);

namespace scalar {
void laguerre_norm_batch(int n, double alpha, std::span<const double> u, std::span<double> out);
void laguerre_weighted_sums(double alpha, std::span<const double> u, std::span<const double> w,
                            std::span<double> sums);
void hermite_scaled_batch(int k, std::span<const double> x, std::span<double> out);
}  // namespace scalar

/// Only valid when avx2_available().
namespace avx2 {
void laguerre_norm_batch(int n, double alpha, std::span<const double> u, std::span<double> out);
void laguerre_weighted_sums(double alpha, std::span<const double> u, std::span<const double> w,
                            std::span<double> sums);
void hermite_scaled_batch(int k, std::span<const double> x, std::span<double> out);
}  // namespace avx2

}  // namespace nilsphere::kernels
