#include "nilsphere/haar.hpp"

#include "nilsphere/errors.hpp"
#include "nilsphere/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nilsphere {
namespace {

struct Welford {
  std::size_t n = 0;
  Complex mean{0.0, 0.0};
  double m2 = 0.0;

  void add(Complex x) {
    ++n;
    const Complex d = x - mean;
    mean += d / static_cast<double>(n);
    const Complex e = x - mean;
    m2 += d.real() * e.real() + d.imag() * e.imag();
  }

  void merge(const Welford& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const std::size_t total = n + o.n;
    const Complex delta = o.mean - mean;
    const double fa = static_cast<double>(n), fb = static_cast<double>(o.n), ft = static_cast<double>(total);
    mean += delta * (fb / ft);
    m2 += o.m2 + std::norm(delta) * fa * fb / ft;
    n = total;
  }
};

MCEstimate finish(const Welford& acc, bool deterministic) {
  MCEstimate est;
  est.value = acc.mean;
  est.n_samples = acc.n;
  if (!deterministic && acc.n > 1)
    est.std_error = std::sqrt(std::max(0.0, acc.m2) / static_cast<double>(acc.n - 1) / static_cast<double>(acc.n));
  return est;
}

std::size_t shard_count(std::size_t n) { return (n + kShardSize - 1) / kShardSize; }

void fill_shard(GroupKind kind, int p, const Rng& root, std::size_t shard, std::size_t count, double* out) {
  Rng rng = root.split(shard);
  const std::size_t pp = static_cast<std::size_t>(p * p);
  for (std::size_t i = 0; i < count; ++i) sample_haar_into(kind, p, rng, out + i * pp);
}

void check_dim(int p) {
  if (p < 1) throw DimensionError("haar: p must be >= 1");
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(seed)), static_cast<std::uint32_t>(splitmix64(seed) >> 32),
                    static_cast<std::uint32_t>(splitmix64(seed ^ 0x5851f42d4c957f2dULL)),
                    static_cast<std::uint32_t>(splitmix64(seed ^ 0x5851f42d4c957f2dULL) >> 32)};
  engine_.seed(seq);
}

Rng Rng::split(std::uint64_t stream) const { return Rng(splitmix64(seed_ ^ splitmix64(stream + 1))); }

void sample_haar_into(GroupKind kind, int p, Rng& rng, double* out) {
  check_dim(p);
  const std::size_t n = static_cast<std::size_t>(p);
  for (std::size_t i = 0; i < n * n; ++i) out[i] = rng.normal();
  // Modified Gram-Schmidt, two passes: Q of the QR factorisation with R_ii > 0.
  for (std::size_t j = 0; j < n; ++j) {
    double* v = out + j * n;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        const double* q = out + i * n;
        double d = 0.0;
        for (std::size_t r = 0; r < n; ++r) d += q[r] * v[r];
        for (std::size_t r = 0; r < n; ++r) v[r] -= d * q[r];
      }
    }
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r) s += v[r] * v[r];
    s = 1.0 / std::sqrt(s);
    for (std::size_t r = 0; r < n; ++r) v[r] *= s;
  }
  if (kind == GroupKind::SO) {
    Eigen::Map<Matrix> k(out, p, p);
    if (k.determinant() < 0.0)
      for (std::size_t r = 0; r < n; ++r) out[r] = -out[r];
  }
}

Matrix sample_haar(GroupKind kind, int p, Rng& rng) {
  check_dim(p);
  Matrix k(p, p);
  sample_haar_into(kind, p, rng, k.data());
  return k;
}

GroupKind integrator_kind(const Integrator& integ) {
  return std::visit(
      [](const auto& i) -> GroupKind {
        using T = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<T, Paired>)
          return i.samples->kind;
        else
          return i.kind;
      },
      integ);
}

int integrator_dim(const Integrator& integ) {
  return std::visit(
      [](const auto& i) -> int {
        using T = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<T, Paired>)
          return i.samples->p;
        else
          return i.p;
      },
      integ);
}

BatchIntegrand as_batch(int p, Integrand f) {
  return [p, f = std::move(f)](const double* ks, std::size_t count, Complex* out) {
    const std::size_t pp = static_cast<std::size_t>(p * p);
    Matrix k(p, p);
    for (std::size_t i = 0; i < count; ++i) {
      std::copy(ks + i * pp, ks + (i + 1) * pp, k.data());
      out[i] = f(k);
    }
  };
}

std::shared_ptr<const SampleSet> draw_samples(GroupKind kind, int p, std::size_t n, std::uint64_t seed) {
  check_dim(p);
  auto set = std::make_shared<SampleSet>();
  set->kind = kind;
  set->p = p;
  const std::size_t pp = static_cast<std::size_t>(p * p);
  set->data.assign(n * pp, 0.0);
  const Rng root(seed);
  parallel_for(shard_count(n), [&](std::size_t s) {
    const std::size_t begin = s * kShardSize;
    const std::size_t count = std::min(kShardSize, n - begin);
    fill_shard(kind, p, root, s, count, set->data.data() + begin * pp);
  });
  return set;
}

std::shared_ptr<const SampleSet> exact_samples(const Exact& rule) {
  if (rule.p < 1 || rule.p > 2) throw DomainError("exact integrator: only p <= 2 is supported");
  if (rule.rotations < 1) throw DomainError("exact integrator: rotations must be >= 1");
  auto set = std::make_shared<SampleSet>();
  set->kind = rule.kind;
  set->p = rule.p;
  set->deterministic = true;
  if (rule.p == 1) {
    set->data.push_back(1.0);
    if (rule.kind == GroupKind::O) set->data.push_back(-1.0);
    return set;
  }
  const int m = rule.rotations;
  for (int reflect = 0; reflect < (rule.kind == GroupKind::O ? 2 : 1); ++reflect) {
    const double s2 = reflect ? -1.0 : 1.0;
    for (int j = 0; j < m; ++j) {
      const double t = 2.0 * std::numbers::pi * j / m;
      const double c = std::cos(t), s = std::sin(t);
      // diag(1, s2) * [[c, -s], [s, c]], column-major
      set->data.insert(set->data.end(), {c, s2 * s, -s, s2 * c});
    }
  }
  return set;
}

namespace {

MCEstimate average_set(const BatchIntegrand& f, const SampleSet& set) {
  const std::size_t n = set.size();
  if (n == 0) throw DomainError("k_average: empty sample set");
  if (!set.deterministic && n < 2) throw DomainError("k_average: need at least 2 samples");
  const std::size_t shards = shard_count(n);
  std::vector<Welford> parts(shards);
  parallel_for(shards, [&](std::size_t s) {
    const std::size_t begin = s * kShardSize;
    const std::size_t count = std::min(kShardSize, n - begin);
    std::vector<Complex> vals(count);
    f(set.at(begin), count, vals.data());
    for (const Complex& v : vals) parts[s].add(v);
  });
  Welford acc;
  for (const auto& part : parts) acc.merge(part);
  return finish(acc, set.deterministic);
}

}  // namespace

MCEstimate k_average(const BatchIntegrand& f, const Integrator& integ) {
  if (const auto* mc = std::get_if<MonteCarlo>(&integ)) {
    check_dim(mc->p);
    if (mc->samples < 2) throw DomainError("k_average: need at least 2 samples");
    const std::size_t shards = shard_count(mc->samples);
    const std::size_t pp = static_cast<std::size_t>(mc->p * mc->p);
    const Rng root(mc->seed);
    std::vector<Welford> parts(shards);
    parallel_for(shards, [&](std::size_t s) {
      const std::size_t begin = s * kShardSize;
      const std::size_t count = std::min(kShardSize, mc->samples - begin);
      std::vector<double> ks(count * pp);
      fill_shard(mc->kind, mc->p, root, s, count, ks.data());
      std::vector<Complex> vals(count);
      f(ks.data(), count, vals.data());
      for (const Complex& v : vals) parts[s].add(v);
    });
    Welford acc;
    for (const auto& part : parts) acc.merge(part);
    return finish(acc, false);
  }
  if (const auto* ex = std::get_if<Exact>(&integ)) return average_set(f, *exact_samples(*ex));
  const auto& paired = std::get<Paired>(integ);
  if (!paired.samples) throw DomainError("k_average: null sample set");
  return average_set(f, *paired.samples);
}

MCEstimate k_average(const Integrand& f, const Integrator& integ) {
  return k_average(as_batch(integrator_dim(integ), f), integ);
}

MCEstimate k_average(const Integrand& f, GroupKind kind, int p, std::size_t n_samples, Rng& rng) {
  return k_average(f, Integrator{MonteCarlo{kind, p, n_samples, rng.next_u64()}});
}

}  // namespace nilsphere
