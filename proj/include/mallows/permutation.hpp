#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mallows {

/// A permutation of [n] = {1, ..., n} in one-line form: entry i (1-based)
/// holds pi(i).
class Permutation {
 public:
  Permutation() = default;

  /// Validates that `one_line` is a permutation of {1, ..., n}.
  explicit Permutation(std::vector<int> one_line);

  static Permutation identity(std::size_t n);
  /// Skips validation; callers guarantee the invariant.
  static Permutation from_trusted(std::vector<int> one_line) noexcept;
  /// Builds the permutation whose array form (position -> element) is given.
  static Permutation from_array_form(const std::vector<int>& array_form);

  std::size_t size() const noexcept { return map_.size(); }
  bool empty() const noexcept { return map_.empty(); }

  /// pi(i) for 1 <= i <= n.
  int operator()(std::size_t i) const noexcept { return map_[i - 1]; }

  std::span<const int> one_line() const noexcept { return map_; }

  /// Array form: entry k (1-based) is the element placed at position k,
  /// i.e. the inverse permutation.
  std::vector<int> array_form() const;

  Permutation inverse() const;

  /// Compact word, e.g. "2413"; entries are separated by spaces once n > 9.
  std::string to_string() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> map_;
};

/// #{(i, j) : i < j, pi(i) > pi(j)} by merge counting, O(n log n).
std::uint64_t inversions(const Permutation& p);

/// #{(i, j) : i < j, ref(i) < ref(j), p(i) > p(j)}, O(n log^2 n).  Throws
/// std::invalid_argument when the lengths differ.
std::uint64_t kendall_tau(const Permutation& p, const Permutation& ref);

/// pi^R(i) = n + 1 - pi(i).
Permutation reversal(const Permutation& p);

/// Lexicographic rank in [0, n!) via the Lehmer code; n <= 20.
std::uint64_t lex_rank(const Permutation& p);
Permutation lex_unrank(std::uint64_t rank, std::size_t n);

/// Z_{n,q} = prod_{i=1}^n (1 - q^i) / (1 - q).  Switches to exp(log Z)
/// for n > 300 and returns +inf when that overflows.
double partition_function(std::size_t n, double q);
double log_partition_function(std::size_t n, double q);

/// inv(p) ln q - ln Z_{n,q}.
double log_pmf(const Permutation& p, double q);

}  // namespace mallows
