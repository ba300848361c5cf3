#include "mallows/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mallows {
namespace {

void check_exact_args(std::size_t n, double q) {
  if (n < 1 || n > kMaxExactN) throw std::invalid_argument("exact enumeration needs 1 <= n <= 9");
  if (!(q > 0.0) || !(q < 1.0)) throw std::invalid_argument("exact enumeration needs q in (0, 1)");
  // weights down to q^36 lose too much against the identity's weight 1
  if (q < 0.1 && n > 6) throw std::invalid_argument("exact enumeration restricts n <= 6 when q < 0.1");
}

// Visits every permutation of [n] once, with its inversion count, by
// Steinhaus-Johnson-Trotter (Even's variant).
template <typename Visit>
void sjt_walk(std::size_t n, Visit&& visit) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<int> dir(n, -1);  // -1 left, +1 right, indexed by position
  std::uint64_t inv = 0;
  visit(perm, inv);
  while (true) {
    // largest mobile element
    std::ptrdiff_t mobile = -1;
    for (std::size_t i = 0; i < n; ++i) {
      const auto j = static_cast<std::ptrdiff_t>(i) + dir[i];
      if (j < 0 || j >= static_cast<std::ptrdiff_t>(n)) continue;
      if (perm[j] < perm[i] && (mobile < 0 || perm[i] > perm[mobile])) mobile = static_cast<std::ptrdiff_t>(i);
    }
    if (mobile < 0) return;
    const int value = perm[mobile];
    const auto target = mobile + dir[mobile];
    // the mobile value is larger than its neighbour: moving it right removes
    // one inversion, moving it left creates one
    if (target > mobile) {
      --inv;
    } else {
      ++inv;
    }
    std::swap(perm[mobile], perm[target]);
    std::swap(dir[mobile], dir[target]);
    for (std::size_t i = 0; i < n; ++i) {
      if (perm[i] > value) dir[i] = -dir[i];
    }
    visit(perm, inv);
  }
}

}  // namespace

double Pmf::total() const {
  double s = 0;
  for (const auto& [k, v] : mass) s += v;
  return s;
}

std::vector<WeightedPermutation> enumerate_mallows(std::size_t n, double q) {
  check_exact_args(n, q);
  std::vector<WeightedPermutation> out;
  std::size_t total = 1;
  for (std::size_t i = 2; i <= n; ++i) total *= i;
  out.reserve(total);
  sjt_walk(n, [&](const std::vector<int>& perm, std::uint64_t inv) {
    out.push_back({Permutation::from_trusted(perm), inv, std::pow(q, static_cast<double>(inv))});
  });
  // Neumaier-compensated normalizer
  double sum = 0, comp = 0;
  for (const auto& w : out) {
    const double t = sum + w.probability;
    comp += std::abs(sum) >= w.probability ? (sum - t) + w.probability : (w.probability - t) + sum;
    sum = t;
  }
  const double z = sum + comp;
  for (auto& w : out) w.probability /= z;
  std::sort(out.begin(), out.end(),
            [](const WeightedPermutation& a, const WeightedPermutation& b) { return a.permutation < b.permutation; });
  return out;
}

Pmf exact_permutation_pmf(std::size_t n, double q) {
  Pmf pmf{"perm:" + std::to_string(n), {}};
  for (const auto& w : enumerate_mallows(n, q)) {
    pmf.mass[static_cast<std::int64_t>(lex_rank(w.permutation))] = w.probability;
  }
  return pmf;
}

Pmf exact_statistic_distribution(std::size_t n, double q,
                                 const std::function<std::int64_t(const Permutation&)>& statistic,
                                 const std::string& statistic_name) {
  Pmf pmf{statistic_name + ":" + std::to_string(n), {}};
  for (const auto& w : enumerate_mallows(n, q)) pmf.mass[statistic(w.permutation)] += w.probability;
  return pmf;
}

Pmf empirical_permutation_pmf(const std::vector<Permutation>& sample) {
  if (sample.empty()) throw std::invalid_argument("empirical_permutation_pmf: empty sample");
  const auto n = sample.front().size();
  Pmf pmf{"perm:" + std::to_string(n), {}};
  const double w = 1.0 / static_cast<double>(sample.size());
  for (const auto& p : sample) {
    if (p.size() != n) throw std::invalid_argument("empirical_permutation_pmf: mixed sizes");
    pmf.mass[static_cast<std::int64_t>(lex_rank(p))] += w;
  }
  return pmf;
}

Pmf exact_inverse_q_pmf(std::size_t n, double q) {
  const auto all = enumerate_mallows(n, q);
  const auto max_inv = static_cast<double>(n * (n - 1) / 2);
  Pmf pmf{"perm:" + std::to_string(n), {}};
  double z = 0;
  for (const auto& w : all) z += std::pow(q, max_inv - static_cast<double>(w.inversions));
  for (const auto& w : all) {
    pmf.mass[static_cast<std::int64_t>(lex_rank(w.permutation))] =
        std::pow(q, max_inv - static_cast<double>(w.inversions)) / z;
  }
  return pmf;
}

double tv_distance(const Pmf& p1, const Pmf& p2) {
  if (p1.domain != p2.domain) {
    throw std::invalid_argument("tv_distance: pmfs live on different domains (" + p1.domain + " vs " + p2.domain + ")");
  }
  double sum = 0;
  auto a = p1.mass.begin();
  auto b = p2.mass.begin();
  while (a != p1.mass.end() || b != p2.mass.end()) {
    if (b == p2.mass.end() || (a != p1.mass.end() && a->first < b->first)) {
      sum += std::abs(a->second);
      ++a;
    } else if (a == p1.mass.end() || b->first < a->first) {
      sum += std::abs(b->second);
      ++b;
    } else {
      sum += std::abs(a->second - b->second);
      ++a;
      ++b;
    }
  }
  return 0.5 * sum;
}

double brute_force_partition(std::size_t n, double q) {
  check_exact_args(n, q);
  double sum = 0;
  sjt_walk(n, [&](const std::vector<int>&, std::uint64_t inv) { sum += std::pow(q, static_cast<double>(inv)); });
  return sum;
}

}  // namespace mallows
