#pragma once

// Counter-based random numbers (Philox4x32-10) and a deterministic chunked
// parallel map. Every draw is a pure function of (seed, stream, index,
// draw), so results do not depend on how work is split across threads.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace hsf {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Ten rounds of Philox4x32 (Salmon et al. 2011).
PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key) noexcept;

/// Sequential draws for one sample: the counter is (index_lo, index_hi,
/// stream, block) and the key is the seed.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint32_t stream,
             std::uint64_t index) noexcept
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        index_(index), stream_(stream) {}

  std::uint32_t next_u32() noexcept {
    if (pos_ == 4) refill();
    return buffer_[pos_++];
  }

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() noexcept {
    const std::uint64_t hi = next_u32() >> 5;  // 27 bits
    const std::uint64_t lo = next_u32() >> 6;  // 26 bits
    return (static_cast<double>((hi << 26) | lo) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal by Box-Muller; the sine branch is cached.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double phi = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

 private:
  void refill() noexcept {
    buffer_ = philox4x32({static_cast<std::uint32_t>(index_),
                          static_cast<std::uint32_t>(index_ >> 32), stream_,
                          block_++},
                         key_);
    pos_ = 0;
  }

  PhiloxKey key_;
  std::uint64_t index_;
  std::uint32_t stream_;
  std::uint32_t block_ = 0;
  PhiloxCounter buffer_{};
  int pos_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Runs task(i) for i in [0, count) on up to `workers` threads (0 means one
/// per hardware thread) and returns the results in index order.
template <class T>
std::vector<T> parallel_map(std::size_t count, unsigned workers,
                            const std::function<T(std::size_t)>& task);

/// Thread count actually used for a requested worker count.
unsigned resolve_workers(unsigned requested) noexcept;

/// Calls body(i) once for every i in [0, count); threads pull indices from a
/// shared counter. Rethrows the first exception after all threads join.
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& body);

template <class T>
std::vector<T> parallel_map(std::size_t count, unsigned workers,
                            const std::function<T(std::size_t)>& task) {
  std::vector<T> out(count);
  parallel_for(count, workers, [&](std::size_t i) { out[i] = task(i); });
  return out;
}

}  // namespace hsf
