#pragma once

#include <cstdint>
#include <random>

namespace cinnamon {

/// Independent generator per (seed, stream) so that emitters sharing one
/// scenario seed never consume each other's draws.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace cinnamon
