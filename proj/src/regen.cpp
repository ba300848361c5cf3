#include "mallows/regen.hpp"

#include <algorithm>
#include <string>

namespace mallows {

BlockSampler::BlockSampler(MallowsParams params, GeometricStream stream, std::uint64_t step_cap)
    : stream_(std::move(stream)), step_cap_(step_cap) {
  if (params.q() != stream_.q()) throw std::invalid_argument("BlockSampler: stream was built for a different q");
}

BlockStats BlockSampler::run(std::vector<int>* sigma) {
  gaps_.clear();
  up_.clear();
  down_.clear();
  std::int64_t max_pos = 0;
  std::uint64_t steps = 0;
  do {
    if (++steps > step_cap_) {
      throw StepCapExceeded("block excursion exceeded " + std::to_string(step_cap_) + " steps");
    }
    const std::uint64_t z = stream_.draw();
    std::int64_t pos;
    if (z <= gaps_.size()) {
      pos = gaps_[z - 1];
      gaps_.erase(gaps_.begin() + static_cast<std::ptrdiff_t>(z - 1));
    } else {
      pos = max_pos + static_cast<std::int64_t>(z - gaps_.size());
      for (std::int64_t g = max_pos + 1; g < pos; ++g) gaps_.push_back(g);
      max_pos = pos;
    }
    up_.push(pos);
    down_.push(pos);
    if (sigma) sigma->push_back(static_cast<int>(pos));
  } while (!gaps_.empty());
  return {static_cast<std::uint32_t>(steps), static_cast<std::uint32_t>(up_.length()),
          static_cast<std::uint32_t>(down_.length())};
}

Block BlockSampler::next() {
  std::vector<int> sigma;
  const auto stats = run(&sigma);
  return {Permutation::from_trusted(std::move(sigma)), stats};
}

BlockStats BlockSampler::next_stats() { return run(nullptr); }

Block sample_block(MallowsParams params, GeometricStream& stream) {
  BlockSampler sampler(params, stream);
  auto block = sampler.next();
  stream = sampler.stream();
  return block;
}

namespace {

Block make_block(const std::vector<std::int64_t>& positions, std::size_t begin, std::size_t end,
                 std::int64_t offset) {
  std::vector<int> sigma;
  sigma.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i) sigma.push_back(static_cast<int>(positions[i] - offset));
  auto perm = Permutation::from_trusted(std::move(sigma));
  const BlockStats stats{static_cast<std::uint32_t>(end - begin), static_cast<std::uint32_t>(lis_length(perm)),
                         static_cast<std::uint32_t>(lds_length(perm))};
  return {std::move(perm), stats};
}

}  // namespace

PrefixDecomposition decompose_prefix(std::size_t n, MallowsParams params, GeometricStream& stream,
                                     std::uint64_t step_cap) {
  if (n < 1) throw std::invalid_argument("decompose_prefix: n must be >= 1");
  if (params.q() != stream.q()) throw std::invalid_argument("decompose_prefix: stream was built for a different q");
  PositionAllocator alloc(n + 64);
  PrefixDecomposition out;
  auto& positions = out.prefix.positions;
  auto& d = out.decomposition;
  d.n = n;
  d.t.push_back(0);
  std::size_t block_start = 0;
  std::uint64_t steps_in_block = 0;
  while (true) {
    if (++steps_in_block > step_cap) {
      throw StepCapExceeded("decompose_prefix: block exceeded " + std::to_string(step_cap) + " steps");
    }
    positions.push_back(alloc.take(stream.draw()));
    const std::size_t t = positions.size();
    if (alloc.max_taken() == static_cast<std::int64_t>(t)) {
      d.blocks.push_back(make_block(positions, block_start, t, static_cast<std::int64_t>(block_start)));
      d.t.push_back(t);
      d.q_n += d.blocks.back().stats.y;
      block_start = t;
      steps_in_block = 0;
      if (t >= n) break;
    }
  }
  d.s_n = d.blocks.size();
  InfinitePrefix first_n;
  first_n.positions.assign(positions.begin(), positions.begin() + static_cast<std::ptrdiff_t>(n));
  out.pi_n = induce_finite(first_n);
  return out;
}

InfinitePrefix reassemble(const Decomposition& d) {
  InfinitePrefix out;
  for (std::size_t j = 0; j < d.blocks.size(); ++j) {
    const auto offset = static_cast<std::int64_t>(d.t[j]);
    for (const int v : d.blocks[j].sigma.one_line()) out.positions.push_back(v + offset);
  }
  return out;
}

bool is_indecomposable(const Permutation& sigma) {
  int running_max = 0;
  for (std::size_t m = 1; m < sigma.size(); ++m) {
    running_max = std::max(running_max, sigma(m));
    if (running_max == static_cast<int>(m)) return false;
  }
  return true;
}

}  // namespace mallows
