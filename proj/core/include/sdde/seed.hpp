#pragma once

#include <cstdint>

namespace sdde {

/// Independent random streams carved out of one master seed.
enum class StreamTag : std::uint64_t {
  base_noise = 1,
  auxiliary = 2,
  stationary = 3,
  reference = 4,
  probes = 5,
};

/// SplitMix64 finalizer; a bijection on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x);

/// Counter-based per-stream seed. Pure integer arithmetic, so identical on every
/// platform; for fixed (master, tag) distinct indices never collide.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t path_index, StreamTag tag);

}  // namespace sdde
