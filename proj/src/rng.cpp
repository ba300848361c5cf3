#include "mallows/rng.hpp"

#include <cmath>

namespace mallows {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream_id) noexcept
    : seed_(seed), stream_id_(stream_id) {}

CounterRng::Block CounterRng::philox(Block ctr, Key key) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

std::uint64_t CounterRng::next_u64() noexcept {
  const std::uint64_t block = position_ >> 1;
  const bool first_half = (position_ & 1) == 0;
  if (first_half) {
    const Block counter = {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
                           static_cast<std::uint32_t>(stream_id_),
                           static_cast<std::uint32_t>(stream_id_ >> 32)};
    const Key key = {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
    buffer_ = philox(counter, key);
  }
  ++position_;
  return first_half ? (static_cast<std::uint64_t>(buffer_[1]) << 32) | buffer_[0]
                    : (static_cast<std::uint64_t>(buffer_[3]) << 32) | buffer_[2];
}

double CounterRng::uniform() noexcept {
  // midpoint of one of 2^53 equal cells: strictly inside (0, 1)
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

GeometricStream::GeometricStream(MallowsParams params, std::uint64_t seed, std::uint64_t stream_id) noexcept
    : rng_(seed, stream_id), q_(params.q()), inv_log_q_(1.0 / std::log(params.q())) {}

std::uint32_t GeometricStream::draw() noexcept {
  const double u = rng_.uniform();
  return 1u + static_cast<std::uint32_t>(std::floor(std::log(u) * inv_log_q_));
}

}  // namespace mallows
