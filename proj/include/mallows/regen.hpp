#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mallows/insertion.hpp"
#include "mallows/monotone.hpp"
#include "mallows/params.hpp"
#include "mallows/permutation.hpp"
#include "mallows/rng.hpp"

namespace mallows {

/// Raised when an excursion exceeds the step cap.  Return times have
/// exponential tails, so this only fires on a broken sampler.
class StepCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultStepCap = 1'000'000'000;

/// (X, Y, Y_down) of one regeneration block.
struct BlockStats {
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  std::uint32_t y_down = 0;

  friend bool operator==(const BlockStats&, const BlockStats&) = default;
};

/// One regeneration block: the permutation Sigma of [X] between two
/// consecutive regeneration times, with its length and LIS/LDS.
struct Block {
  Permutation sigma;
  BlockStats stats;
};

/// Samples i.i.d. blocks as excursions of the chain from 0.
///
/// Free positions below the running maximum are kept in a sorted list; its
/// length is exactly the chain state M_t, and the block closes when the list
/// empties.  Patience piles are fed as elements arrive, so next_stats()
/// never stores Sigma.
class BlockSampler {
 public:
  BlockSampler(MallowsParams params, GeometricStream stream, std::uint64_t step_cap = kDefaultStepCap);

  /// Full block, Sigma included.
  Block next();
  /// (X, Y, Y_down) only.
  BlockStats next_stats();

  const GeometricStream& stream() const noexcept { return stream_; }

 private:
  BlockStats run(std::vector<int>* sigma);

  GeometricStream stream_;
  std::uint64_t step_cap_;
  std::vector<std::int64_t> gaps_;
  PatienceLength up_{true};
  PatienceLength down_{false};
};

/// One block from the stream (thin wrapper over BlockSampler).
Block sample_block(MallowsParams params, GeometricStream& stream);

/// A prefix of the insertion process cut at its regeneration times.
struct Decomposition {
  std::vector<Block> blocks;
  std::size_t n = 0;
  std::size_t s_n = 0;              // min{j : T_j >= n}
  std::uint64_t q_n = 0;            // sum of Y_j for j <= S_n
  std::vector<std::uint64_t> t;     // T_0 = 0 < T_1 < ... < T_{S_n}
};

struct PrefixDecomposition {
  Decomposition decomposition;
  InfinitePrefix prefix;            // Pi~ on [T_{S_n}]
  Permutation pi_n;                 // induced permutation on the first n elements
};

/// Runs the insertion process up to the first regeneration time >= n.
PrefixDecomposition decompose_prefix(std::size_t n, MallowsParams params, GeometricStream& stream,
                                     std::uint64_t step_cap = kDefaultStepCap);

/// Pi~ restricted to [T_{S_n}], rebuilt from the blocks and their offsets.
InfinitePrefix reassemble(const Decomposition& d);

/// True when no proper prefix of sigma maps onto an initial segment.
bool is_indecomposable(const Permutation& sigma);

}  // namespace mallows
