#pragma once

#include <array>
#include <cstdint>

namespace secrelay {

/// One 128-bit Philox4x32-10 block: counter/key in, four 32-bit words out.
/// Exposed as a free function so the generator can be pinned against the
/// published known-answer vectors.
std::array<std::uint32_t, 4> philox4x32_10(
    const std::array<std::uint32_t, 4>& counter,
    const std::array<std::uint32_t, 2>& key) noexcept;

/// SplitMix64 finalizer; used to derive independent per-point seeds from one
/// base seed in sweeps.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Counter-based uniform stream. Each (trial, draw) pair addresses an
/// independent uniform variate, so any partition of trials across threads
/// yields bit-identical values; there is no sequential generator state.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) noexcept
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)} {}

  /// Uniform variate strictly inside (0,1) for the given trial/draw address.
  double uniform(std::uint64_t trial, std::uint32_t draw) const noexcept;

 private:
  std::array<std::uint32_t, 2> key_;
};

}  // namespace secrelay
