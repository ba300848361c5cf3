#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mallows/permutation.hpp"

namespace mallows {

/// Patience sorting that keeps pile tops only.  Values may be any distinct
/// integers (e.g. raw insertion positions); only their relative order
/// matters.
class PatienceLength {
 public:
  /// Feeds the next value; increasing=false tracks decreasing runs instead.
  explicit PatienceLength(bool increasing = true) : increasing_(increasing) {}

  void push(std::int64_t value);
  std::size_t length() const noexcept { return tops_.size(); }
  void clear() noexcept { tops_.clear(); }

 private:
  bool increasing_;
  std::vector<std::int64_t> tops_;
};

/// Longest increasing subsequence length, O(n log n).
std::size_t lis_length(const Permutation& p);
std::size_t lis_length(std::span<const std::int64_t> values);

/// Longest decreasing subsequence length; equals lis_length(reversal(p)).
std::size_t lds_length(const Permutation& p);
std::size_t lds_length(std::span<const std::int64_t> values);

/// One longest increasing subsequence (values, left to right), recovered
/// through predecessor links.  Debugging aid, not used on hot paths.
std::vector<int> lis_witness(const Permutation& p);

/// O(n^2) dynamic-programming LIS, independent of patience sorting.
/// Throws std::invalid_argument for n > 20.
std::size_t lis_bruteforce(const Permutation& p);

}  // namespace mallows
