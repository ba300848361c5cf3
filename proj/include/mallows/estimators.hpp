#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mallows/regen.hpp"

namespace mallows {

/// Raised when the block sample has eta^2 = 0 (Y = aX on every block).
class DegenerateEstimate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

__extension__ typedef unsigned __int128 uint128_t;

/// Exact power sums sum X^i Y^j, i + j <= 4, over a set of blocks.  Integer
/// accumulation makes merging associative and order-insensitive.
class BlockMoments {
 public:
  static constexpr int kDegree = 4;

  void add(std::uint64_t x, std::uint64_t y);
  void add(const BlockStats& b) { add(b.x, b.y); }

  BlockMoments& operator+=(const BlockMoments& other);
  BlockMoments& operator-=(const BlockMoments& other);

  std::uint64_t count() const noexcept { return count_; }
  /// sum X^i Y^j as an exact integer.
  uint128_t power_sum(int i, int j) const { return sums_.at(i).at(j); }
  /// (1/B) sum X^i Y^j.
  long double moment(int i, int j) const;

  friend bool operator==(const BlockMoments&, const BlockMoments&) = default;

 private:
  std::uint64_t count_ = 0;
  std::array<std::array<uint128_t, kDegree + 1>, kDegree + 1> sums_{};
};

/// Estimated constants of the LIS central limit theorem.
struct CltConstants {
  double q = 0;
  double a_hat = 0;        // LIS growth rate, Ybar / Xbar
  double eta2_hat = 0;     // Var(Y - aX), plug-in a
  double eta_hat = 0;
  double sigma_hat = 0;    // sqrt(mu0) eta
  double mu0_hat = 0;      // 1 / Xbar
  // delta-method standard errors
  double se_a = 0, se_eta = 0, se_sigma = 0, se_mu0 = 0;
  // group-jackknife standard errors (zero when not computed)
  double jk_se_a = 0, jk_se_eta = 0, jk_se_sigma = 0, jk_se_mu0 = 0;
  std::uint64_t n_blocks = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream_first = 0;
  std::uint64_t stream_count = 0;
};

/// Ratio estimators and delta-method errors from block moments.
/// Throws std::invalid_argument for fewer than two blocks and
/// DegenerateEstimate when eta^2 vanishes.
CltConstants constants_from_moments(const BlockMoments& m, double q);

/// Fills the jk_se_* fields by the delete-one-group jackknife over `groups`.
void attach_jackknife(CltConstants& c, const std::vector<BlockMoments>& groups);

/// Block moments from `groups` independent streams (ids in the kEstimate
/// namespace), `blocks` in total.  Deterministic in (q, blocks, seed, groups)
/// whatever the worker count.
std::vector<BlockMoments> collect_block_moments(double q, std::uint64_t blocks, std::uint64_t seed,
                                                std::uint64_t groups = 100, unsigned workers = 1,
                                                StreamPurpose purpose = StreamPurpose::kEstimate);

/// collect_block_moments + constants_from_moments + attach_jackknife.
/// Requires blocks >= 1000.
CltConstants estimate_constants(double q, std::uint64_t blocks, std::uint64_t seed, unsigned workers = 1,
                                std::uint64_t groups = 100);

}  // namespace mallows
