#include "mallows/chain.hpp"

#include <algorithm>
#include <stdexcept>

namespace mallows {

ChainState chain_step(ChainState state, std::uint32_t z) {
  if (z < 1) throw std::invalid_argument("chain_step: z must be >= 1");
  return {std::max<std::uint64_t>(state.value, z) - 1};
}

std::vector<ChainState> chain_trajectory(std::span<const std::uint32_t> z, ChainState m0) {
  std::vector<ChainState> out;
  out.reserve(z.size());
  ChainState m = m0;
  for (const auto zi : z) {
    m = chain_step(m, zi);
    out.push_back(m);
  }
  return out;
}

std::vector<std::uint64_t> regeneration_times(std::span<const std::uint32_t> z) {
  std::vector<std::uint64_t> times;
  ChainState m{};
  for (std::size_t t = 0; t < z.size(); ++t) {
    m = chain_step(m, z[t]);
    if (m.value == 0) times.push_back(t + 1);
  }
  return times;
}

}  // namespace mallows
