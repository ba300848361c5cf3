#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mallows/permutation.hpp"

namespace mallows {

/// A probability mass function over integer-coded outcomes.  `domain` names
/// the universe the keys live in (e.g. "perm:5" for lexicographic ranks of
/// S_5, "lis:5" for LIS values); pmfs from different domains are not
/// comparable.
struct Pmf {
  std::string domain;
  std::map<std::int64_t, double> mass;

  double total() const;
};

struct WeightedPermutation {
  Permutation permutation;
  std::uint64_t inversions = 0;
  double probability = 0;
};

inline constexpr std::size_t kMaxExactN = 9;

/// All n! permutations with their Mallows(q) probabilities, in lexicographic
/// order.  Inversion counts are updated by +-1 per adjacent transposition of
/// a Steinhaus-Johnson-Trotter walk.  Throws std::invalid_argument for
/// n > 9, or n > 6 when q < 0.1.
std::vector<WeightedPermutation> enumerate_mallows(std::size_t n, double q);

/// Exact Mallows pmf keyed by lex_rank, domain "perm:n".
Pmf exact_permutation_pmf(std::size_t n, double q);

/// Push-forward of the exact pmf through an integer statistic.
Pmf exact_statistic_distribution(std::size_t n, double q, const std::function<std::int64_t(const Permutation&)>& statistic,
                                 const std::string& statistic_name);

/// Empirical pmf of a sample of permutations of one common size.
Pmf empirical_permutation_pmf(const std::vector<Permutation>& sample);

/// Exact pmf of Mallows(1/q) on S_n, i.e. weights q^(n(n-1)/2 - inv).
Pmf exact_inverse_q_pmf(std::size_t n, double q);

/// Half the L1 distance.  Keys absent from one pmf count as zero mass;
/// throws std::invalid_argument when the domains differ.
double tv_distance(const Pmf& p1, const Pmf& p2);

/// Brute-force sum over S_n of q^inv(pi), for n <= 9.
double brute_force_partition(std::size_t n, double q);

}  // namespace mallows
