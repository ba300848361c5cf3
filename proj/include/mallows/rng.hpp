#pragma once

#include <array>
#include <cstdint>

#include "mallows/params.hpp"

namespace mallows {

/// Philox4x32-10 counter-based generator.
///
/// The 64-bit seed is the key; the 128-bit counter is split into the stream
/// id (high half) and the block index (low half).  Two streams with
/// different ids therefore never share a counter value, whatever their
/// lengths, and any position in a stream can be reached in O(1).
class CounterRng {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  CounterRng(std::uint64_t seed, std::uint64_t stream_id) noexcept;

  /// Raw Philox4x32-10 bijection, exposed for known-answer tests.
  static Block philox(Block counter, Key key) noexcept;

  std::uint64_t next_u64() noexcept;

  /// Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform() noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  /// Number of 64-bit words consumed so far.
  std::uint64_t position() const noexcept { return position_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t position_ = 0;
  Block buffer_{};
};

/// Deterministic stream of Geom(1-q) draws on {1, 2, ...}.
///
/// Every draw consumes exactly one word of the underlying CounterRng, so a
/// (seed, stream_id) pair replays the same sequence and position() counts
/// draws.
class GeometricStream {
 public:
  GeometricStream(MallowsParams params, std::uint64_t seed, std::uint64_t stream_id) noexcept;

  /// P(k) = (1-q) q^(k-1), by inverse transform k = 1 + floor(ln U / ln q).
  std::uint32_t draw() noexcept;

  /// Raw uniform on (0, 1) from the same stream.
  double uniform() noexcept { return rng_.uniform(); }

  double q() const noexcept { return q_; }
  std::uint64_t seed() const noexcept { return rng_.seed(); }
  std::uint64_t stream_id() const noexcept { return rng_.stream_id(); }
  std::uint64_t position() const noexcept { return rng_.position(); }

 private:
  CounterRng rng_;
  double q_;
  double inv_log_q_;
};

/// Stream-id namespaces.  Each consumer of randomness owns the ids
/// (purpose << 48) | index, so that e.g. constants estimation and the CLT
/// replicates never share draws under a common seed.
enum class StreamPurpose : std::uint64_t {
  kSample = 1,
  kBlocks = 2,
  kEstimate = 3,
  kClt = 4,
  kLds = 5,
  kKacReturn = 6,
  kKacStationary = 7,
  kTail = 8,
  kVariance = 9,
  kHitting = 10,
  kBlockTail = 11,
};

constexpr std::uint64_t stream_id(StreamPurpose purpose, std::uint64_t index) noexcept {
  return (static_cast<std::uint64_t>(purpose) << 48) | (index & ((std::uint64_t{1} << 48) - 1));
}

}  // namespace mallows
