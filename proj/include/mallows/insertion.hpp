#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mallows/params.hpp"
#include "mallows/permutation.hpp"
#include "mallows/rng.hpp"

namespace mallows {

/// Prefix of the infinite insertion permutation: positions[i-1] is the
/// position assigned to element i.
struct InfinitePrefix {
  std::vector<std::int64_t> positions;

  std::size_t size() const noexcept { return positions.size(); }
};

/// Order-statistic allocator over the free positions {1, 2, ...}.
///
/// A Fenwick tree counts free slots in a window [1, capacity]; select-k
/// descends the tree in O(log capacity).  The window doubles whenever a
/// request reaches past it, which never disturbs slots already taken.
class PositionAllocator {
 public:
  explicit PositionAllocator(std::size_t initial_capacity = 64);

  /// Takes the k-th smallest free position (k >= 1) and returns it.
  std::int64_t take(std::uint64_t k);

  std::size_t taken() const noexcept { return taken_; }
  std::int64_t max_taken() const noexcept { return max_taken_; }

 private:
  void grow(std::size_t min_capacity);

  std::vector<std::uint32_t> tree_;  // 1-based Fenwick over free flags
  std::vector<std::uint8_t> used_;
  std::size_t capacity_ = 0;
  std::size_t taken_ = 0;
  std::int64_t max_taken_ = 0;
};

/// Runs the insertion process: element i goes to the z_i-th position not
/// used by elements 1..i-1.  O(n log n).  Throws std::invalid_argument
/// on any z_i < 1.
InfinitePrefix assign_positions(std::span<const std::uint32_t> z);

/// Pi_n(i) = rank of positions[i-1] among the first n positions.
Permutation induce_finite(const InfinitePrefix& prefix);

/// Draws n geometrics from the stream and returns the induced permutation,
/// which is Mallows(q) distributed on S_n.
Permutation sample_mallows(std::size_t n, MallowsParams params, GeometricStream& stream);

/// Same, also returning the infinite prefix and the draws it consumed.
struct MallowsSample {
  std::vector<std::uint32_t> z;
  InfinitePrefix prefix;
  Permutation permutation;
};
MallowsSample sample_mallows_detailed(std::size_t n, MallowsParams params, GeometricStream& stream);

}  // namespace mallows
