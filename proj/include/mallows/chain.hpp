#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mallows {

/// State of the auxiliary chain M_t = max(M_{t-1}, Z_t) - 1 on {0, 1, ...}.
struct ChainState {
  std::uint64_t value = 0;

  friend bool operator==(ChainState, ChainState) = default;
};

/// max(state, z) - 1.  Requires z >= 1.
ChainState chain_step(ChainState state, std::uint32_t z);

/// M_1, ..., M_n obtained by iterating chain_step from m0.
std::vector<ChainState> chain_trajectory(std::span<const std::uint32_t> z, ChainState m0 = {});

/// The times t <= |z| (1-based) at which the chain started from 0 sits at 0,
/// i.e. the prefixes on which the insertion permutation maps [t] onto [t].
std::vector<std::uint64_t> regeneration_times(std::span<const std::uint32_t> z);

}  // namespace mallows
