#pragma once

#include <cstdint>
#include <span>

#include "hsf/heisenberg.hpp"
#include "hsf/random.hpp"

namespace hsf {

/// Monte Carlo estimate with its standard error. Reproducible from `seed`:
/// the same configuration gives bit-identical output for any worker count.
struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

struct MCConfig {
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  /// Threads; 0 means one per hardware thread. Does not affect results.
  unsigned workers = 1;
};

inline constexpr std::int64_t kMinKernelSamples = 10'000;
/// Largest H_n supported by the kernel sampler.
inline constexpr int kMaxKernelN = 16;

/// ||T(x)||_p^p = int_{R^{2n+1}} |N(x^{-1}z)^{-alpha} - N(z)^{-alpha}|^p dz,
/// by importance sampling after normalizing N(x) = 1. The proposal mixes
/// (0.4, 0.4, 0.2) of a radial law ~ N(z)^{-alpha p + 0.01} on B_N(0,2),
/// its left translate by x, and a tail law ~ N(z)^{-(alpha+1)p} on
/// N(z) > 2. A point of H_1 is embedded into H_n with n = params.n.
MCEstimate mc_kernel_norm(const GroupPoint& x, const EmbeddingParams& params,
                          const MCConfig& config);

/// The same integral restricted to B_N(0, K N(x)); requires K >= 1/3.
MCEstimate mc_kernel_norm_ball(const GroupPoint& x, double k,
                               const EmbeddingParams& params,
                               const MCConfig& config);

/// Uniform point of the Koranyi unit sphere under the cone measure, written
/// into horizontal (length 2n) and returned central coordinate t, so that
/// |horizontal|^4 + t^2 = 1. Rejection from (Euclidean ball) x [-1, 1].
double sample_koranyi_sphere(CounterRng& rng, std::span<double> horizontal);

/// Uniform point of the Koranyi unit ball, same layout as above.
double sample_koranyi_ball(CounterRng& rng, std::span<double> horizontal);

/// Mean and standard error of weighted chunk statistics, merged in order.
struct RunningStats {
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) noexcept {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }
  void merge(const RunningStats& other) noexcept;
  double std_error() const noexcept;
};

}  // namespace hsf
