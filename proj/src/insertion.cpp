#include "mallows/insertion.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace mallows {

PositionAllocator::PositionAllocator(std::size_t initial_capacity) { grow(std::max<std::size_t>(initial_capacity, 2)); }

void PositionAllocator::grow(std::size_t min_capacity) {
  const std::size_t new_capacity = std::bit_ceil(min_capacity);
  used_.resize(new_capacity + 1, 0);
  tree_.assign(new_capacity + 1, 0);
  for (std::size_t i = 1; i <= new_capacity; ++i) {
    tree_[i] += used_[i] ? 0u : 1u;
    const std::size_t parent = i + (i & (~i + 1));
    if (parent <= new_capacity) tree_[parent] += tree_[i];
  }
  capacity_ = new_capacity;
}

std::int64_t PositionAllocator::take(std::uint64_t k) {
  if (k < 1) throw std::invalid_argument("insertion index must be >= 1");
  // free slots in the window = capacity - taken
  if (k > capacity_ - taken_) grow(std::max<std::size_t>(capacity_ * 2, taken_ + k));
  std::size_t pos = 0;
  std::uint64_t remaining = k;
  for (std::size_t step = capacity_; step > 0; step >>= 1) {
    const std::size_t next = pos + step;
    if (next <= capacity_ && tree_[next] < remaining) {
      pos = next;
      remaining -= tree_[next];
    }
  }
  const std::size_t slot = pos + 1;
  for (std::size_t j = slot; j <= capacity_; j += j & (~j + 1)) --tree_[j];
  used_[slot] = 1;
  ++taken_;
  max_taken_ = std::max<std::int64_t>(max_taken_, static_cast<std::int64_t>(slot));
  return static_cast<std::int64_t>(slot);
}

InfinitePrefix assign_positions(std::span<const std::uint32_t> z) {
  PositionAllocator alloc(z.size() + 64);
  InfinitePrefix prefix;
  prefix.positions.reserve(z.size());
  for (const auto zi : z) prefix.positions.push_back(alloc.take(zi));
  return prefix;
}

Permutation induce_finite(const InfinitePrefix& prefix) {
  if (prefix.positions.empty()) throw std::invalid_argument("induce_finite: empty prefix");
  const auto max_pos = *std::max_element(prefix.positions.begin(), prefix.positions.end());
  // counting sort: rank(p) = #{assigned positions <= p}
  std::vector<int> rank_of(static_cast<std::size_t>(max_pos) + 1, 0);
  for (const auto p : prefix.positions) rank_of[p] = 1;
  int running = 0;
  for (auto& r : rank_of) {
    running += r;
    r = running;
  }
  std::vector<int> out(prefix.positions.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = rank_of[prefix.positions[i]];
  return Permutation::from_trusted(std::move(out));
}

namespace {

void check_sampling_args(std::size_t n, MallowsParams params, const GeometricStream& stream) {
  if (n < 1) throw std::invalid_argument("sample_mallows: n must be >= 1");
  if (params.q() != stream.q()) throw std::invalid_argument("sample_mallows: stream was built for a different q");
}

}  // namespace

MallowsSample sample_mallows_detailed(std::size_t n, MallowsParams params, GeometricStream& stream) {
  check_sampling_args(n, params, stream);
  MallowsSample s;
  s.z.resize(n);
  for (auto& zi : s.z) zi = stream.draw();
  s.prefix = assign_positions(s.z);
  s.permutation = induce_finite(s.prefix);
  return s;
}

Permutation sample_mallows(std::size_t n, MallowsParams params, GeometricStream& stream) {
  check_sampling_args(n, params, stream);
  PositionAllocator alloc(n + 64);
  InfinitePrefix prefix;
  prefix.positions.resize(n);
  for (auto& p : prefix.positions) p = alloc.take(stream.draw());
  return induce_finite(prefix);
}

}  // namespace mallows
