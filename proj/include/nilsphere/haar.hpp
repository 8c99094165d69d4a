#pragma once

// Haar measure on O_p / SO_p: sampling, Monte-Carlo averages with standard
// errors, and an exact equispaced rule for p <= 2.

#include "nilsphere/canonical.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <variant>
#include <vector>

namespace nilsphere {

using Complex = std::complex<double>;

/// Samples per Monte-Carlo shard. Shard s always draws from rng.split(s), so
/// estimates do not depend on the number of worker threads.
inline constexpr std::size_t kShardSize = 8192;

/// Explicit, splittable random stream (mt19937_64 seeded through SplitMix64).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  /// Independent child stream; deterministic in (seed, stream).
  Rng split(std::uint64_t stream) const;

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

/// Haar-random element of O_p or SO_p: Gaussian matrix, QR with positive R
/// diagonal; for SO the first column is negated when det = -1.
Matrix sample_haar(GroupKind kind, int p, Rng& rng);

/// Same, written column-major into out[0 .. p*p).
void sample_haar_into(GroupKind kind, int p, Rng& rng, double* out);

struct MCEstimate {
  Complex value{0.0, 0.0};
  double std_error = 0.0;
  std::size_t n_samples = 0;
};

/// A fixed list of group elements (column-major p x p each), shared between
/// integrands in paired mode.
struct SampleSet {
  GroupKind kind = GroupKind::O;
  int p = 0;
  std::vector<double> data;
  /// Exact rule: averages are reported with zero standard error.
  bool deterministic = false;

  std::size_t size() const { return p == 0 ? 0 : data.size() / static_cast<std::size_t>(p * p); }
  const double* at(std::size_t i) const { return data.data() + i * static_cast<std::size_t>(p * p); }
};

struct MonteCarlo {
  GroupKind kind = GroupKind::O;
  int p = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// Equispaced rotations (plus the reflection coset for O_2); p <= 2 only.
struct Exact {
  GroupKind kind = GroupKind::O;
  int p = 0;
  int rotations = 256;
};

struct Paired {
  std::shared_ptr<const SampleSet> samples;
};

using Integrator = std::variant<MonteCarlo, Exact, Paired>;

GroupKind integrator_kind(const Integrator& integ);
int integrator_dim(const Integrator& integ);

/// Batch integrand: out[i] = f(k_i) for count matrices at ks (column-major,
/// p*p doubles each).
using BatchIntegrand = std::function<void(const double* ks, std::size_t count, Complex* out)>;
using Integrand = std::function<Complex(const Matrix& k)>;

BatchIntegrand as_batch(int p, Integrand f);

/// Draws n Haar samples with the shard layout used by MonteCarlo.
std::shared_ptr<const SampleSet> draw_samples(GroupKind kind, int p, std::size_t n, std::uint64_t seed);

/// The node set of an Exact integrator.
std::shared_ptr<const SampleSet> exact_samples(const Exact& rule);

/// Average over K. MC: mean with std_error = sqrt((var_re + var_im)/N);
/// throws DomainError for fewer than 2 samples.
MCEstimate k_average(const BatchIntegrand& f, const Integrator& integ);
MCEstimate k_average(const Integrand& f, const Integrator& integ);

/// Convenience form drawing a fresh seed from rng.
MCEstimate k_average(const Integrand& f, GroupKind kind, int p, std::size_t n_samples, Rng& rng);

}  // namespace nilsphere
